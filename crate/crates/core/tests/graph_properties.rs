mod common;

use std::collections::BTreeSet;

use common::strategies::{records, TS_LO};
use proptest::prelude::*;
use txgraph::graph::snapshot::GraphSnapshot;
use txgraph::graph::{
    accumulate_cmtg, build_batch, build_mtg, degree_sequence, edges_of_transaction, sample_edges, write_edge_list,
    DegreeVariant, GraphError, SUPERNODE,
};
use txgraph::ingest::{bucket_by_month, SUPERNODE_TOKEN};
use txgraph::metrics::{density, repetition_ratio_edges, repetition_ratio_nodes};
use txgraph::{AddressTable, CumulativeGraph, GraphView, MonthIndex, MonthlyGraph, TxRecord, YearMonth};

fn fold(months: &[MonthlyGraph]) -> Vec<CumulativeGraph> {
    let mut out: Vec<CumulativeGraph> = Vec::new();
    let mut acc = CumulativeGraph::empty();
    for m in months {
        acc = accumulate_cmtg(&acc, m).unwrap();
        out.push(acc.clone());
    }
    out
}

fn monthly(recs: &[TxRecord]) -> (AddressTable, Vec<MonthlyGraph>) {
    let genesis = YearMonth::from_timestamp(TS_LO).unwrap();
    let mut table = AddressTable::new();
    let months = bucket_by_month(recs.to_vec(), genesis)
        .unwrap()
        .iter()
        .map(|(m, b)| build_mtg(b, m, &mut table))
        .collect();
    (table, months)
}

fn named_edges(table: &AddressTable, g: &dyn GraphView) -> BTreeSet<(String, String)> {
    g.undirected_edges()
        .iter()
        .map(|&(a, b)| (table.resolve(a).unwrap().to_owned(), table.resolve(b).unwrap().to_owned()))
        .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
        .collect()
}

#[test]
fn three_by_two_and_coinbase() {
    let mut table = AddressTable::new();
    let e = edges_of_transaction(&TxRecord::transfer(0, ["A", "B", "C"], ["D", "E"]).unwrap(), &mut table);
    assert_eq!(e.pairs.len(), 6);
    assert_eq!(e.touched.len(), 5);
    let cb = edges_of_transaction(&TxRecord::coinbase(0, ["M1", "M2", "M3"]).unwrap(), &mut table);
    assert_eq!(cb.pairs.len(), 3);
    assert!(cb.pairs.iter().all(|&(s, _)| s == SUPERNODE));
    assert_eq!(table.resolve(SUPERNODE), Some(SUPERNODE_TOKEN));
}

#[test]
fn self_pair_is_counted_not_stored() {
    let mut table = AddressTable::new();
    let g = build_mtg(&[TxRecord::transfer(0, ["A"], ["A", "B"]).unwrap()], MonthIndex(0), &mut table);
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.directed_edges().len(), 1);
    assert_eq!(g.self_transfers(), 1);
    assert_eq!(g.node_count(), 2);
}

#[test]
fn accumulate_rejects_gaps() {
    let m0 = MonthlyGraph::empty(MonthIndex(0));
    let m2 = MonthlyGraph::empty(MonthIndex(2));
    let c0 = accumulate_cmtg(&CumulativeGraph::empty(), &m0).unwrap();
    assert!(matches!(accumulate_cmtg(&c0, &m2), Err(GraphError::MonthDiscontinuity { .. })));
    assert!(accumulate_cmtg(&CumulativeGraph::empty(), &m2).is_err());
}

#[test]
fn edge_sample_file() {
    let mut table = AddressTable::new();
    let g = build_mtg(&[TxRecord::transfer(0, ["A", "B", "C"], ["D", "E"]).unwrap()], MonthIndex(0), &mut table);
    let s = sample_edges(&g, 4, 3);
    assert_eq!(s.len(), 4);
    assert_eq!(s, sample_edges(&g, 4, 3));
    assert_eq!(sample_edges(&g, 100, 3).len(), 6);
    let mut out = Vec::new();
    write_edge_list(&s, &table, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().next(), Some("src,dst"));
    assert_eq!(text.lines().count(), 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_invariants(recs in records(15, 50)) {
        let (_, months) = monthly(&recs);
        for g in &months {
            let nodes = g.nodes();
            for &(a, b) in g.undirected_edges() {
                prop_assert!(a < b);
                prop_assert!(g.contains_node(a) && g.contains_node(b));
            }
            let projected: BTreeSet<(u32, u32)> = g
                .directed_edges()
                .iter()
                .filter(|(a, b)| a != b)
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect();
            prop_assert_eq!(projected.into_iter().collect::<Vec<_>>(), g.undirected_edges().to_vec());
            for &(a, b) in g.directed_edges() {
                prop_assert!(nodes.binary_search(&a).is_ok() && nodes.binary_search(&b).is_ok());
            }
            if let Ok(d) = density(g.node_count() as u64, g.edge_count() as u64) {
                prop_assert!((0.0..=1.0).contains(&d));
            }
        }
    }

    #[test]
    fn cumulative_is_monotone_superset(recs in records(15, 50)) {
        let (_, months) = monthly(&recs);
        let cumulative = fold(&months);
        for (n, c) in cumulative.iter().enumerate() {
            for m in &months[..=n] {
                prop_assert!(m.nodes().iter().all(|&v| c.contains_node(v)));
                let edges: BTreeSet<_> = c.undirected_edges().iter().collect();
                prop_assert!(m.undirected_edges().iter().all(|e| edges.contains(e)));
            }
            if n > 0 {
                prop_assert!(c.node_count() >= cumulative[n - 1].node_count());
                prop_assert!(c.edge_count() >= cumulative[n - 1].edge_count());
            }
        }
    }

    #[test]
    fn incremental_equals_batch(recs in records(15, 50)) {
        let (table, months) = monthly(&recs);
        let last = fold(&months).pop();
        let mut batch_table = AddressTable::new();
        let batch = build_batch(recs.iter(), &mut batch_table);
        match last {
            Some(c) => {
                prop_assert_eq!(c.node_count(), batch.node_count());
                prop_assert_eq!(named_edges(&table, &c), named_edges(&batch_table, &batch));
                prop_assert_eq!(c.directed_edges().len(), batch.directed_edges().len());
            }
            None => prop_assert_eq!(batch.node_count(), 0),
        }
    }

    #[test]
    fn duplicated_records_change_nothing(recs in records(15, 40)) {
        let mut doubled = recs.clone();
        doubled.extend(recs.iter().cloned());
        let (ta, a) = monthly(&recs);
        let (tb, b) = monthly(&doubled);
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.node_count(), y.node_count());
            prop_assert_eq!(named_edges(&ta, x), named_edges(&tb, y));
            prop_assert_eq!(x.directed_edges().len(), y.directed_edges().len());
        }
    }

    #[test]
    fn degree_sums(recs in records(15, 50)) {
        let (_, months) = monthly(&recs);
        for g in &months {
            let sum = |v| degree_sequence(g, v).iter().sum::<u64>();
            prop_assert_eq!(sum(DegreeVariant::Undirected), 2 * g.edge_count() as u64);
            prop_assert_eq!(sum(DegreeVariant::In), g.directed_edges().len() as u64);
            prop_assert_eq!(sum(DegreeVariant::Out), g.directed_edges().len() as u64);
            prop_assert_eq!(sum(DegreeVariant::Total), 2 * g.directed_edges().len() as u64);
        }
    }

    #[test]
    fn snapshot_round_trip(recs in records(15, 40)) {
        prop_assume!(!recs.is_empty());
        let (table, months) = monthly(&recs);
        let snap = GraphSnapshot { genesis: YearMonth::from_timestamp(TS_LO).unwrap(), table, months };
        let mut bytes = Vec::new();
        snap.write_to(&mut bytes).unwrap();
        prop_assert_eq!(GraphSnapshot::read_from(bytes.as_slice()).unwrap(), snap);
    }

    #[test]
    fn repetition_ratios_ignore_labels(
        prev in proptest::collection::vec(("[a-f]", "[a-f]"), 1..12),
        curr in proptest::collection::vec(("[a-f]", "[a-f]"), 1..12),
        rename in Just(('a'..='f').collect::<Vec<char>>()).prop_shuffle(),
    ) {
        let tx = |pairs: &[(String, String)], f: &dyn Fn(&str) -> String| -> Vec<TxRecord> {
            pairs.iter().map(|(a, b)| TxRecord::transfer(0, [f(a)], [f(b)]).unwrap()).collect()
        };
        let ident = |s: &str| s.to_owned();
        let relabel = |s: &str| rename[(s.as_bytes()[0] - b'a') as usize].to_string();
        let ratios = |f: &dyn Fn(&str) -> String| {
            let mut t = AddressTable::new();
            // Intern in reverse so ids differ from the identity run too.
            for c in ('a'..='f').rev() {
                t.intern(&f(&c.to_string()));
            }
            let p = build_mtg(&tx(&prev, f), MonthIndex(0), &mut t);
            let c = build_mtg(&tx(&curr, f), MonthIndex(1), &mut t);
            (repetition_ratio_nodes(&c, &p).ok(), repetition_ratio_edges(&c, &p).ok())
        };
        prop_assert_eq!(ratios(&ident), ratios(&relabel));
    }
}
