//! Monthly (MTG) and cumulative (CMTG) transaction graphs.
//!
//! Every transaction contributes one ordered pair from each distinct input
//! address to each distinct output address. Coinbase transactions use a single
//! global supernode as their input. Within a month pairs have set semantics:
//! repeated transfers between the same two addresses produce one edge.
//!
//! Each graph keeps three sorted, deduplicated stores over interned ids:
//! the node set, the undirected simple edge set (`(lo, hi)`, no self-pairs) and
//! the directed edge set used for in/out/total degree analyses. Self-pairs
//! (an address paying itself) never enter either edge store; they are counted
//! in `self_transfers` instead.

use std::collections::HashMap;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::adjacency::UndirectedGraph;
use crate::ingest::{MonthIndex, TxRecord, SUPERNODE_TOKEN};

pub mod snapshot;

/// Dense interned address id.
pub type NodeId = u32;

/// The coinbase supernode always interns to id 0.
pub const SUPERNODE: NodeId = 0;

/// Bidirectional address ↔ id map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressTable {
    ids: HashMap<String, NodeId>,
    names: Vec<String>,
}

impl Default for AddressTable {
    fn default() -> Self {
        Self::new()
    }
}

impl AddressTable {
    pub fn new() -> Self {
        let mut table = AddressTable {
            ids: HashMap::new(),
            names: Vec::new(),
        };
        table.intern(SUPERNODE_TOKEN);
        table
    }

    pub fn intern(&mut self, address: &str) -> NodeId {
        if let Some(&id) = self.ids.get(address) {
            return id;
        }
        let id = NodeId::try_from(self.names.len()).expect("address table overflow");
        self.names.push(address.to_owned());
        self.ids.insert(address.to_owned(), id);
        id
    }

    pub fn get(&self, address: &str) -> Option<NodeId> {
        self.ids.get(address).copied()
    }

    pub fn resolve(&self, id: NodeId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    /// Number of interned addresses, supernode included.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Addresses in id order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Rebuilds a table from its id-ordered names.
    pub fn from_names(names: Vec<String>) -> Result<Self, GraphError> {
        if names.first().map(String::as_str) != Some(SUPERNODE_TOKEN) {
            return Err(GraphError::Corrupt("address table must start with the supernode".into()));
        }
        let mut ids = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if ids.insert(name.clone(), i as NodeId).is_some() {
                return Err(GraphError::Corrupt(format!("duplicate address {name:?}")));
            }
        }
        Ok(AddressTable { ids, names })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("month discontinuity: expected month {expected}, got {got}")]
    MonthDiscontinuity { expected: MonthIndex, got: MonthIndex },
    #[error("corrupt graph data: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The node and edge stores shared by monthly and cumulative graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSets {
    nodes: Vec<NodeId>,
    undirected: Vec<(NodeId, NodeId)>,
    directed: Vec<(NodeId, NodeId)>,
    self_transfers: u64,
}

impl EdgeSets {
    /// Assembles stores from raw touched ids and directed pairs (any order,
    /// duplicates allowed, no self-pairs).
    fn from_parts(mut nodes: Vec<NodeId>, mut directed: Vec<(NodeId, NodeId)>, self_transfers: u64) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        directed.sort_unstable();
        directed.dedup();
        let mut undirected: Vec<_> = directed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        undirected.sort_unstable();
        undirected.dedup();
        EdgeSets {
            nodes,
            undirected,
            directed,
            self_transfers,
        }
    }

    /// Validates and wraps already-normalized stores.
    pub fn from_sorted(
        nodes: Vec<NodeId>,
        undirected: Vec<(NodeId, NodeId)>,
        directed: Vec<(NodeId, NodeId)>,
        self_transfers: u64,
    ) -> Result<Self, GraphError> {
        let sorted_unique = |v: &[(NodeId, NodeId)]| v.windows(2).all(|w| w[0] < w[1]);
        if !nodes.windows(2).all(|w| w[0] < w[1]) || !sorted_unique(&undirected) || !sorted_unique(&directed) {
            return Err(GraphError::Corrupt("stores must be sorted and duplicate-free".into()));
        }
        if directed.iter().any(|&(a, b)| a == b) || undirected.iter().any(|&(a, b)| a >= b) {
            return Err(GraphError::Corrupt("self-pair or unnormalized edge".into()));
        }
        let known = |id: &NodeId| nodes.binary_search(id).is_ok();
        if !directed.iter().all(|(a, b)| known(a) && known(b)) {
            return Err(GraphError::Corrupt("edge endpoint missing from node set".into()));
        }
        let expected = EdgeSets::from_parts(Vec::new(), directed.clone(), 0).undirected;
        if expected != undirected {
            return Err(GraphError::Corrupt("undirected store is not the projection of the directed store".into()));
        }
        Ok(EdgeSets {
            nodes,
            undirected,
            directed,
            self_transfers,
        })
    }

    fn union(&self, other: &EdgeSets) -> EdgeSets {
        EdgeSets {
            nodes: merge_sorted(&self.nodes, &other.nodes),
            undirected: merge_sorted(&self.undirected, &other.undirected),
            directed: merge_sorted(&self.directed, &other.directed),
            self_transfers: self.self_transfers + other.self_transfers,
        }
    }
}

fn merge_sorted<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Size of the intersection of two sorted, duplicate-free slices.
pub fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Maps node ids to their position in a sorted node list. Ids are dense in
/// the address table, so a flat array beats a binary search per edge.
struct LocalIndex {
    first: NodeId,
    slots: Option<Vec<u32>>,
}

impl LocalIndex {
    fn new(nodes: &[NodeId]) -> Self {
        let (Some(&first), Some(&last)) = (nodes.first(), nodes.last()) else {
            return LocalIndex { first: 0, slots: None };
        };
        if (last - first) as usize + 1 == nodes.len() {
            return LocalIndex { first, slots: None };
        }
        let mut slots = vec![u32::MAX; (last - first) as usize + 1];
        for (i, &id) in nodes.iter().enumerate() {
            slots[(id - first) as usize] = i as u32;
        }
        LocalIndex {
            first,
            slots: Some(slots),
        }
    }

    fn get(&self, id: NodeId) -> usize {
        let offset = (id - self.first) as usize;
        match &self.slots {
            None => offset,
            Some(slots) => {
                let i = slots[offset];
                assert!(i != u32::MAX, "edge endpoint {id} not in node set");
                i as usize
            }
        }
    }
}

/// Read access common to monthly and cumulative graphs.
pub trait GraphView {
    fn edge_sets(&self) -> &EdgeSets;

    /// Sorted node ids.
    fn nodes(&self) -> &[NodeId] {
        &self.edge_sets().nodes
    }

    /// Sorted `(lo, hi)` pairs.
    fn undirected_edges(&self) -> &[(NodeId, NodeId)] {
        &self.edge_sets().undirected
    }

    /// Sorted `(from, to)` pairs.
    fn directed_edges(&self) -> &[(NodeId, NodeId)] {
        &self.edge_sets().directed
    }

    fn self_transfers(&self) -> u64 {
        self.edge_sets().self_transfers
    }

    fn node_count(&self) -> usize {
        self.nodes().len()
    }

    fn edge_count(&self) -> usize {
        self.undirected_edges().len()
    }

    fn contains_node(&self, id: NodeId) -> bool {
        self.nodes().binary_search(&id).is_ok()
    }

    /// Position of `id` in [`GraphView::nodes`], which is also its vertex
    /// index in [`GraphView::to_undirected`].
    fn local_index(&self, id: NodeId) -> Option<u32> {
        self.nodes().binary_search(&id).ok().map(|i| i as u32)
    }

    /// The undirected simple graph re-indexed to `0..node_count()` in node-id
    /// order.
    fn to_undirected(&self) -> UndirectedGraph {
        let nodes = self.nodes();
        let lookup = LocalIndex::new(nodes);
        let local = |id: NodeId| lookup.get(id) as u32;
        // Re-indexing is monotone, so the sorted (lo, hi) order is preserved.
        let edges: Vec<(u32, u32)> = self.undirected_edges().iter().map(|&(a, b)| (local(a), local(b))).collect();
        UndirectedGraph::from_sorted_unique(nodes.len(), &edges)
    }
}

impl GraphView for EdgeSets {
    fn edge_sets(&self) -> &EdgeSets {
        self
    }
}

/// MTG_n: the graph of one calendar month.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonthlyGraph {
    pub month: MonthIndex,
    edges: EdgeSets,
}

impl MonthlyGraph {
    pub fn empty(month: MonthIndex) -> Self {
        MonthlyGraph {
            month,
            edges: EdgeSets::default(),
        }
    }

    pub fn from_edge_sets(month: MonthIndex, edges: EdgeSets) -> Self {
        MonthlyGraph { month, edges }
    }
}

impl GraphView for MonthlyGraph {
    fn edge_sets(&self) -> &EdgeSets {
        &self.edges
    }
}

/// CMTG_n: the union of MTG_0 ..= MTG_n.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CumulativeGraph {
    /// `None` before any month has been absorbed.
    pub through_month: Option<MonthIndex>,
    edges: EdgeSets,
}

impl CumulativeGraph {
    pub fn empty() -> Self {
        CumulativeGraph::default()
    }
}

impl GraphView for CumulativeGraph {
    fn edge_sets(&self) -> &EdgeSets {
        &self.edges
    }
}

/// The ids and pairs one transaction contributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxEdges {
    /// Every distinct address in the transaction (the supernode for coinbase).
    pub touched: Vec<NodeId>,
    /// Ordered input → output pairs, self-pairs excluded.
    pub pairs: Vec<(NodeId, NodeId)>,
    /// Number of input addresses that also appear among the outputs.
    pub self_pairs: u64,
}

pub fn edges_of_transaction(tx: &TxRecord, table: &mut AddressTable) -> TxEdges {
    let mut sources: Vec<NodeId> = if tx.coinbase {
        vec![SUPERNODE]
    } else {
        tx.inputs.iter().map(|a| table.intern(a)).collect()
    };
    let mut sinks: Vec<NodeId> = tx.outputs.iter().map(|a| table.intern(a)).collect();
    sources.sort_unstable();
    sources.dedup();
    sinks.sort_unstable();
    sinks.dedup();

    let mut pairs = Vec::with_capacity(sources.len() * sinks.len());
    let mut self_pairs = 0;
    for &s in &sources {
        for &t in &sinks {
            if s == t {
                self_pairs += 1;
            } else {
                pairs.push((s, t));
            }
        }
    }
    let mut touched = merge_sorted(&sources, &sinks);
    touched.dedup();
    TxEdges {
        touched,
        pairs,
        self_pairs,
    }
}

/// Builds MTG_month from the month's bucket, interning new addresses into
/// `table`.
pub fn build_mtg(bucket: &[TxRecord], month: MonthIndex, table: &mut AddressTable) -> MonthlyGraph {
    let mut nodes = Vec::new();
    let mut directed = Vec::new();
    let mut self_transfers = 0;
    for tx in bucket {
        let e = edges_of_transaction(tx, table);
        nodes.extend_from_slice(&e.touched);
        directed.extend_from_slice(&e.pairs);
        self_transfers += e.self_pairs;
    }
    MonthlyGraph {
        month,
        edges: EdgeSets::from_parts(nodes, directed, self_transfers),
    }
}

/// Folds the next month into the cumulative graph.
pub fn accumulate_cmtg(prev: &CumulativeGraph, mtg: &MonthlyGraph) -> Result<CumulativeGraph, GraphError> {
    let expected = prev.through_month.map_or(MonthIndex(0), MonthIndex::next);
    if mtg.month != expected {
        return Err(GraphError::MonthDiscontinuity {
            expected,
            got: mtg.month,
        });
    }
    Ok(CumulativeGraph {
        through_month: Some(mtg.month),
        edges: prev.edges.union(&mtg.edges),
    })
}

/// Builds one graph directly from every record, with no month structure.
/// Equivalent to folding [`accumulate_cmtg`] over all months.
pub fn build_batch<'a, I>(records: I, table: &mut AddressTable) -> EdgeSets
where
    I: IntoIterator<Item = &'a TxRecord>,
{
    let mut nodes = Vec::new();
    let mut directed = Vec::new();
    let mut self_transfers = 0;
    for tx in records {
        let e = edges_of_transaction(tx, table);
        nodes.extend_from_slice(&e.touched);
        directed.extend_from_slice(&e.pairs);
        self_transfers += e.self_pairs;
    }
    EdgeSets::from_parts(nodes, directed, self_transfers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeVariant {
    Undirected,
    In,
    Out,
    Total,
}

impl DegreeVariant {
    pub const ALL: [DegreeVariant; 4] = [
        DegreeVariant::Undirected,
        DegreeVariant::In,
        DegreeVariant::Out,
        DegreeVariant::Total,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DegreeVariant::Undirected => "undirected",
            DegreeVariant::In => "in",
            DegreeVariant::Out => "out",
            DegreeVariant::Total => "total",
        }
    }
}

/// One degree per node, in node-id order. `Total` counts reciprocal transfers
/// A→B and B→A as two edges, whereas `Undirected` counts them once.
pub fn degree_sequence<G: GraphView + ?Sized>(graph: &G, variant: DegreeVariant) -> Vec<u64> {
    let nodes = graph.nodes();
    let mut degrees = vec![0u64; nodes.len()];
    let lookup = LocalIndex::new(nodes);
    let idx = |id: NodeId| lookup.get(id);
    match variant {
        DegreeVariant::Undirected => {
            for &(a, b) in graph.undirected_edges() {
                degrees[idx(a)] += 1;
                degrees[idx(b)] += 1;
            }
        }
        DegreeVariant::In => graph.directed_edges().iter().for_each(|&(_, b)| degrees[idx(b)] += 1),
        DegreeVariant::Out => graph.directed_edges().iter().for_each(|&(a, _)| degrees[idx(a)] += 1),
        DegreeVariant::Total => {
            for &(a, b) in graph.directed_edges() {
                degrees[idx(a)] += 1;
                degrees[idx(b)] += 1;
            }
        }
    }
    degrees
}

/// Uniform sample of `min(k, |E|)` undirected edges without replacement,
/// deterministic for a fixed seed.
pub fn sample_edges<G: GraphView + ?Sized>(graph: &G, k: usize, seed: u64) -> Vec<(NodeId, NodeId)> {
    let edges = graph.undirected_edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if k >= edges.len() {
        let mut all = edges.to_vec();
        all.shuffle(&mut rng);
        return all;
    }
    rand::seq::index::sample(&mut rng, edges.len(), k)
        .into_iter()
        .map(|i| edges[i])
        .collect()
}

/// Writes `src,dst` rows with original address strings.
pub fn write_edge_list<W: Write>(edges: &[(NodeId, NodeId)], table: &AddressTable, out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["src", "dst"])?;
    for &(a, b) in edges {
        let name = |id| {
            table
                .resolve(id)
                .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, format!("unknown node id {id}")))
        };
        w.write_record([name(a)?, name(b)?])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tx(inputs: &[&str], outputs: &[&str]) -> TxRecord {
        TxRecord::transfer(1_500_000_000, inputs.iter().copied(), outputs.iter().copied()).unwrap()
    }

    fn three_by_two() -> TxRecord {
        tx(&["A", "B", "C"], &["D", "E"])
    }

    fn names(table: &AddressTable, pairs: &[(NodeId, NodeId)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = pairs
            .iter()
            .map(|&(a, b)| (table.resolve(a).unwrap().to_owned(), table.resolve(b).unwrap().to_owned()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn supernode_is_id_zero() {
        let mut t = AddressTable::new();
        assert_eq!(t.get(SUPERNODE_TOKEN), Some(SUPERNODE));
        assert_eq!(t.intern("A"), 1);
        assert_eq!(t.intern("A"), 1);
        assert_eq!(t.resolve(1), Some("A"));
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn three_inputs_two_outputs_give_six_pairs() {
        let mut t = AddressTable::new();
        let e = edges_of_transaction(&three_by_two(), &mut t);
        let expected: Vec<(String, String)> = [("A", "D"), ("A", "E"), ("B", "D"), ("B", "E"), ("C", "D"), ("C", "E")]
            .iter()
            .map(|&(a, b)| (a.into(), b.into()))
            .collect();
        assert_eq!(names(&t, &e.pairs), expected);
        assert_eq!(e.touched.len(), 5);
    }

    #[test]
    fn coinbase_edges_come_from_supernode() {
        let mut t = AddressTable::new();
        let cb = TxRecord::coinbase(0, ["M1", "M2"]).unwrap();
        let e = edges_of_transaction(&cb, &mut t);
        assert_eq!(e.pairs, vec![(SUPERNODE, 1), (SUPERNODE, 2)]);
        assert!(e.touched.contains(&SUPERNODE));
    }

    #[test]
    fn self_pair_is_tallied_not_linked() {
        let mut t = AddressTable::new();
        let e = edges_of_transaction(&tx(&["A"], &["A", "B"]), &mut t);
        assert_eq!(names(&t, &e.pairs), vec![("A".into(), "B".into())]);
        assert_eq!(e.self_pairs, 1);
        assert_eq!(e.touched.len(), 2);

        // An address that only ever pays itself is still a node.
        let g = build_mtg(&[tx(&["Z"], &["Z"])], MonthIndex(0), &mut t);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.self_transfers(), 1);
    }

    #[test]
    fn mtg_examples() {
        let mut t = AddressTable::new();
        let g = build_mtg(&[three_by_two()], MonthIndex(0), &mut t);
        assert_eq!((g.node_count(), g.edge_count(), g.directed_edges().len()), (5, 6, 6));

        let twice = build_mtg(&[three_by_two(), three_by_two()], MonthIndex(0), &mut t);
        assert_eq!(twice, g);

        let back = build_mtg(&[three_by_two(), tx(&["D"], &["A"])], MonthIndex(0), &mut t);
        assert_eq!(back.edge_count(), 6);
        assert_eq!(back.directed_edges().len(), 7);
    }

    #[test]
    fn accumulate_checks_month_order() {
        let mut t = AddressTable::new();
        let m0 = build_mtg(&[three_by_two()], MonthIndex(0), &mut t);
        let c0 = accumulate_cmtg(&CumulativeGraph::empty(), &m0).unwrap();
        assert_eq!(c0.nodes(), m0.nodes());
        assert_eq!(c0.undirected_edges(), m0.undirected_edges());
        assert_eq!(c0.through_month, Some(MonthIndex(0)));

        let m1 = build_mtg(&[tx(&["X"], &["Y"])], MonthIndex(1), &mut t);
        let c1 = accumulate_cmtg(&c0, &m1).unwrap();
        assert_eq!(c1.node_count(), 7);
        assert_eq!(c1.edge_count(), 7);

        let m3 = MonthlyGraph::empty(MonthIndex(3));
        assert!(matches!(
            accumulate_cmtg(&c1, &m3),
            Err(GraphError::MonthDiscontinuity { .. })
        ));
        assert!(accumulate_cmtg(&CumulativeGraph::empty(), &m1).is_err());
    }

    #[test]
    fn degree_examples() {
        let mut t = AddressTable::new();
        let g = build_mtg(&[three_by_two()], MonthIndex(0), &mut t);
        let und = degree_sequence(&g, DegreeVariant::Undirected);
        // ids: A=1,B=2,C=3,D=4,E=5
        assert_eq!(und, vec![2, 2, 2, 3, 3]);

        let mut t = AddressTable::new();
        let g = build_mtg(&[tx(&["A"], &["B"]), tx(&["B"], &["A"])], MonthIndex(0), &mut t);
        let a = g.local_index(t.get("A").unwrap()).unwrap() as usize;
        assert_eq!(degree_sequence(&g, DegreeVariant::Total)[a], 2);
        assert_eq!(degree_sequence(&g, DegreeVariant::Undirected)[a], 1);
        assert_eq!(degree_sequence(&g, DegreeVariant::In)[a], 1);
        assert_eq!(degree_sequence(&g, DegreeVariant::Out)[a], 1);

        assert!(degree_sequence(&MonthlyGraph::empty(MonthIndex(0)), DegreeVariant::Total).is_empty());
    }

    #[test]
    fn sampling() {
        let mut t = AddressTable::new();
        let records: Vec<_> = (0..200).map(|i| tx(&[&format!("s{i}")], &[&format!("d{}", i % 37)])).collect();
        let g = build_mtg(&records, MonthIndex(0), &mut t);
        let s1 = sample_edges(&g, 50, 9);
        let s2 = sample_edges(&g, 50, 9);
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 50);
        let mut dedup = s1.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 50);
        assert!(s1.iter().all(|e| g.undirected_edges().binary_search(e).is_ok()));

        let all = sample_edges(&g, 10_000, 3);
        assert_eq!(all.len(), g.edge_count());
        assert_eq!(all, sample_edges(&g, 10_000, 3));
    }

    #[test]
    fn edge_list_uses_addresses() {
        let mut t = AddressTable::new();
        let g = build_mtg(&[tx(&["A"], &["B"])], MonthIndex(0), &mut t);
        let mut out = Vec::new();
        write_edge_list(g.undirected_edges(), &t, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "src,dst\nA,B\n");
    }

    #[test]
    fn from_sorted_validates() {
        assert!(EdgeSets::from_sorted(vec![1, 2], vec![(1, 2)], vec![(2, 1)], 0).is_ok());
        assert!(EdgeSets::from_sorted(vec![1, 2], vec![(1, 2)], vec![(2, 3)], 0).is_err());
        assert!(EdgeSets::from_sorted(vec![2, 1], vec![], vec![], 0).is_err());
        assert!(EdgeSets::from_sorted(vec![1, 2], vec![], vec![(1, 2)], 0).is_err());
    }
}
