//! Structural measures of a single transaction graph.
//!
//! Everything here is a pure function of an immutable graph, so callers may
//! evaluate several measures (or several months) concurrently. Statistics that
//! are undefined for a given graph return a [`MetricError`] rather than a
//! placeholder number; the report layer turns those into empty cells.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::adjacency::UndirectedGraph;
use crate::graph::{sorted_intersection_len, GraphView, MonthlyGraph};
use crate::ingest::MonthIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("density is undefined for {0} node(s); at least 2 are required")]
    TooFewNodes(u64),
    #[error("edge-to-vertex ratio is undefined for a graph with no nodes")]
    NoNodes,
    #[error("clustering is undefined for a graph with no triads")]
    NoTriads,
    #[error("graph has {nodes} nodes, above the cap of {cap}")]
    CapExceeded { nodes: usize, cap: usize },
    #[error("sample count must be positive")]
    NoSamples,
    #[error("assortativity is undefined for a graph with no edges")]
    NoEdges,
    #[error("assortativity is undefined: all edge endpoints have the same degree")]
    ZeroVariance,
    #[error("repetition ratio is undefined: the current month is empty")]
    EmptyCurrent,
    #[error("repetition ratio needs consecutive months, got {prev} then {curr}")]
    MonthDiscontinuity { prev: MonthIndex, curr: MonthIndex },
}

/// `2|E| / (|V|(|V|-1))`.
pub fn density(n_nodes: u64, n_edges: u64) -> Result<f64, MetricError> {
    if n_nodes < 2 {
        return Err(MetricError::TooFewNodes(n_nodes));
    }
    let n = n_nodes as f64;
    Ok(2.0 * n_edges as f64 / (n * (n - 1.0)))
}

/// `|E| / |V|`.
pub fn edge_vertex_ratio(n_nodes: u64, n_edges: u64) -> Result<f64, MetricError> {
    if n_nodes == 0 {
        return Err(MetricError::NoNodes);
    }
    Ok(n_edges as f64 / n_nodes as f64)
}

/// A global clustering coefficient value and how it was obtained.
///
/// For exact results `samples` is the triad count and `triangle_hits` the
/// number of closed triads (three per triangle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusteringEstimate {
    pub value: f64,
    pub samples: u64,
    pub triangle_hits: u64,
    pub seed: u64,
    pub exact: bool,
}

/// Number of connected triples, `Σ_v C(deg v, 2)`.
pub fn triad_count(graph: &UndirectedGraph) -> u64 {
    graph.degrees().map(|d| (d as u64) * (d as u64).saturating_sub(1) / 2).sum()
}

/// Exact triangle count using degree ordering, so each triangle is seen once
/// from its lowest-ranked vertex.
pub fn triangle_count(graph: &UndirectedGraph) -> u64 {
    let n = graph.node_count() as u32;
    let rank = |v: u32| (graph.degree(v), v);
    let forward: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|v| graph.neighbors(v).iter().copied().filter(|&u| rank(u) > rank(v)).collect())
        .collect();
    (0..n as usize)
        .into_par_iter()
        .map(|v| {
            forward[v]
                .iter()
                .map(|&u| sorted_intersection_len(&forward[v], &forward[u as usize]) as u64)
                .sum::<u64>()
        })
        .sum()
}

/// `3 × triangles / triads`, counted exactly. Refuses graphs with more than
/// `node_cap` nodes.
pub fn clustering_exact(graph: &UndirectedGraph, node_cap: usize) -> Result<ClusteringEstimate, MetricError> {
    if graph.node_count() > node_cap {
        return Err(MetricError::CapExceeded {
            nodes: graph.node_count(),
            cap: node_cap,
        });
    }
    let triads = triad_count(graph);
    if triads == 0 {
        return Err(MetricError::NoTriads);
    }
    let closed = 3 * triangle_count(graph);
    Ok(ClusteringEstimate {
        value: closed as f64 / triads as f64,
        samples: triads,
        triangle_hits: closed,
        seed: 0,
        exact: true,
    })
}

/// Default triad sample budget for a graph with `n_nodes` nodes.
pub fn default_sample_count(n_nodes: usize) -> u64 {
    (100 * n_nodes as u64).clamp(1, 1_000_000)
}

/// Fixed partition of a sample budget. Each stream draws from its own
/// ChaCha stream, so results do not depend on the thread count.
const SAMPLE_STREAMS: u64 = 64;

/// Estimates clustering by drawing triads uniformly at random and reporting
/// the fraction that close into triangles.
///
/// A triad is drawn by picking its center with probability proportional to
/// `C(deg, 2)` and then two distinct neighbors of the center uniformly.
pub fn clustering_sampled(graph: &UndirectedGraph, samples: u64, seed: u64) -> Result<ClusteringEstimate, MetricError> {
    if samples == 0 {
        return Err(MetricError::NoSamples);
    }
    let mut centers = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0u64;
    for v in 0..graph.node_count() as u32 {
        let d = graph.degree(v) as u64;
        if d >= 2 {
            total += d * (d - 1) / 2;
            centers.push(v);
            cumulative.push(total);
        }
    }
    if total == 0 {
        return Err(MetricError::NoTriads);
    }
    let hits: u64 = (0..SAMPLE_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let quota = samples / SAMPLE_STREAMS + u64::from(stream < samples % SAMPLE_STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut hits = 0u64;
            for _ in 0..quota {
                let r = rng.random_range(0..total);
                let center = centers[cumulative.partition_point(|&c| c <= r)];
                let nbrs = graph.neighbors(center);
                let i = rng.random_range(0..nbrs.len());
                let mut j = rng.random_range(0..nbrs.len() - 1);
                if j >= i {
                    j += 1;
                }
                if graph.has_edge(nbrs[i], nbrs[j]) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(ClusteringEstimate {
        value: hits as f64 / samples as f64,
        samples,
        triangle_hits: hits,
        seed,
        exact: false,
    })
}

/// Work limits for [`max_clique`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueBudget {
    pub time_limit: Option<Duration>,
    pub max_steps: Option<u64>,
}

impl Default for CliqueBudget {
    fn default() -> Self {
        CliqueBudget {
            time_limit: Some(Duration::from_secs(60)),
            max_steps: None,
        }
    }
}

impl CliqueBudget {
    pub fn unlimited() -> Self {
        CliqueBudget {
            time_limit: None,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Vertex indices of one maximum clique, ascending.
    pub members: Vec<u32>,
    /// False when the budget ran out before the search space was exhausted;
    /// `size` is then a lower bound.
    pub exact: bool,
}

impl CliqueResult {
    /// Checks that the certificate is pairwise adjacent and matches `size`.
    pub fn verify(&self, graph: &UndirectedGraph) -> bool {
        self.members.len() == self.size
            && self
                .members
                .iter()
                .enumerate()
                .all(|(i, &a)| self.members[i + 1..].iter().all(|&b| graph.has_edge(a, b)))
    }
}

/// Degeneracy (smallest-last) ordering. Ties resolve to the smaller index.
fn degeneracy_order(graph: &UndirectedGraph) -> (Vec<u32>, Vec<u32>) {
    let n = graph.node_count();
    let mut degree: Vec<usize> = graph.degrees().collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; max_degree + 1];
    for &d in &degree {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut order = vec![0u32; n];
    let mut pos = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[degree[v]];
        order[pos[v]] = v as u32;
        bin[degree[v]] += 1;
    }
    for d in (1..=max_degree).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    let mut core = vec![0u32; n];
    for i in 0..n {
        let v = order[i] as usize;
        core[v] = degree[v] as u32;
        for &u in graph.neighbors(v as u32) {
            let u = u as usize;
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = order[pw] as usize;
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    (order, core)
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
    }
}

struct CliqueSearch<'a> {
    adj: &'a [Bits],
    best: usize,
    best_members: Option<Vec<usize>>,
    steps: &'a mut u64,
    budget: &'a CliqueBudget,
    started: Instant,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    /// Greedy sequential coloring; returns vertices in non-decreasing color
    /// order with their color numbers (1-based).
    fn color_sort(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut uncolored = cand.clone();
        let mut out = Vec::new();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                uncolored.clear(v);
                q.clear(v);
                q.and_not_assign(&self.adj[v]);
                out.push((v, color));
            }
        }
        out
    }

    fn tick(&mut self) -> bool {
        *self.steps += 1;
        let over_steps = self.budget.max_steps.is_some_and(|m| *self.steps > m);
        let over_time = self.steps.is_multiple_of(1024)
            && self.budget.time_limit.is_some_and(|t| self.started.elapsed() > t);
        if over_steps || over_time {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// `base` counts vertices already fixed outside `current` (the root).
    fn expand(&mut self, base: usize, current: &mut Vec<usize>, mut cand: Bits) {
        let colored = self.color_sort(&cand);
        for &(v, color) in colored.iter().rev() {
            if base + current.len() + color <= self.best {
                return;
            }
            if self.tick() {
                return;
            }
            current.push(v);
            let next = cand.and(&self.adj[v]);
            if next.is_empty() {
                if base + current.len() > self.best {
                    self.best = base + current.len();
                    self.best_members = Some(current.clone());
                }
            } else {
                self.expand(base, current, next);
            }
            current.pop();
            if self.exhausted {
                return;
            }
            cand.clear(v);
        }
    }
}

/// Maximum clique by branch and bound with a greedy-coloring upper bound.
///
/// Each vertex is tried as the earliest member (in degeneracy order) of a
/// clique, which confines the search to its later neighbors. When the budget
/// runs out the best clique found so far is returned with `exact = false`.
pub fn max_clique(graph: &UndirectedGraph, budget: &CliqueBudget) -> CliqueResult {
    let n = graph.node_count();
    if n == 0 {
        return CliqueResult {
            size: 0,
            members: Vec::new(),
            exact: true,
        };
    }
    let started = Instant::now();
    let (order, core) = degeneracy_order(graph);
    let mut rank = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i as u32;
    }

    let mut best = 1;
    let mut best_members = vec![0u32];
    let mut steps = 0u64;
    let mut exhausted = false;
    let mut slot = vec![u32::MAX; n];

    for &v in order.iter().rev() {
        if (core[v as usize] as usize) < best {
            continue;
        }
        let later: Vec<u32> = graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| rank[u as usize] > rank[v as usize])
            .collect();
        if later.len() < best {
            continue;
        }
        for (i, &u) in later.iter().enumerate() {
            slot[u as usize] = i as u32;
        }
        let mut adj = vec![Bits::new(later.len()); later.len()];
        for (i, &u) in later.iter().enumerate() {
            for &w in graph.neighbors(u) {
                let j = slot[w as usize];
                if j != u32::MAX {
                    adj[i].set(j as usize);
                }
            }
        }
        let mut cand = Bits::new(later.len());
        (0..later.len()).for_each(|i| cand.set(i));

        let mut search = CliqueSearch {
            adj: &adj,
            best,
            best_members: None,
            steps: &mut steps,
            budget,
            started,
            exhausted: false,
        };
        search.expand(1, &mut Vec::new(), cand);
        if let Some(found) = search.best_members.take() {
            best = search.best;
            best_members = found.iter().map(|&i| later[i]).chain(std::iter::once(v)).collect();
            best_members.sort_unstable();
        }
        exhausted = search.exhausted;
        for &u in &later {
            slot[u as usize] = u32::MAX;
        }
        if exhausted {
            break;
        }
    }
    CliqueResult {
        size: best,
        members: best_members,
        exact: !exhausted,
    }
}

/// Degree assortativity: the Pearson correlation of endpoint degrees over
/// every edge taken in both orientations.
///
/// Sums are accumulated in exact integer arithmetic; only the final ratio is
/// rounded.
pub fn assortativity(graph: &UndirectedGraph) -> Result<f64, MetricError> {
    let pairs = 2 * graph.edge_count() as i128;
    if pairs == 0 {
        return Err(MetricError::NoEdges);
    }
    let mut sum_x = 0i128;
    let mut sum_xx = 0i128;
    for d in graph.degrees() {
        let d = d as i128;
        // A vertex of degree d is the first endpoint of d orientation pairs.
        sum_x += d * d;
        sum_xx += d * d * d;
    }
    let sum_xy: i128 = 2 * graph
        .edges()
        .map(|(a, b)| graph.degree(a) as i128 * graph.degree(b) as i128)
        .sum::<i128>();
    let variance = pairs * sum_xx - sum_x * sum_x;
    if variance == 0 {
        return Err(MetricError::ZeroVariance);
    }
    let covariance = pairs * sum_xy - sum_x * sum_x;
    Ok((covariance as f64 / variance as f64).clamp(-1.0, 1.0))
}

fn check_consecutive(curr: &MonthlyGraph, prev: &MonthlyGraph) -> Result<(), MetricError> {
    if prev.month.next() != curr.month {
        return Err(MetricError::MonthDiscontinuity {
            prev: prev.month,
            curr: curr.month,
        });
    }
    Ok(())
}

/// Share of this month's nodes that were also active last month.
pub fn repetition_ratio_nodes(curr: &MonthlyGraph, prev: &MonthlyGraph) -> Result<f64, MetricError> {
    check_consecutive(curr, prev)?;
    if curr.node_count() == 0 {
        return Err(MetricError::EmptyCurrent);
    }
    Ok(sorted_intersection_len(curr.nodes(), prev.nodes()) as f64 / curr.node_count() as f64)
}

/// Share of this month's undirected edges that also occurred last month.
pub fn repetition_ratio_edges(curr: &MonthlyGraph, prev: &MonthlyGraph) -> Result<f64, MetricError> {
    check_consecutive(curr, prev)?;
    if curr.edge_count() == 0 {
        return Err(MetricError::EmptyCurrent);
    }
    Ok(sorted_intersection_len(curr.undirected_edges(), prev.undirected_edges()) as f64 / curr.edge_count() as f64)
}

/// Every per-month value destined for the monthly report. `None` marks a value
/// that is undefined or was not computed for that month.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub month: MonthIndex,
    pub mtg_nodes: u64,
    pub mtg_edges: u64,
    pub cmtg_nodes: u64,
    pub cmtg_edges: u64,
    pub mtg_density: Option<f64>,
    pub cmtg_density: Option<f64>,
    pub edge_vertex_mtg: Option<f64>,
    pub edge_vertex_cmtg: Option<f64>,
    pub rr_nodes: Option<f64>,
    pub rr_edges: Option<f64>,
    pub assortativity: Option<f64>,
    pub clustering: Option<ClusteringEstimate>,
    pub max_clique: Option<CliqueResult>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_mtg, AddressTable};
    use crate::ingest::TxRecord;

    fn complete(n: u32) -> UndirectedGraph {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        UndirectedGraph::from_edges(n as usize, &edges)
    }

    fn path(n: u32) -> UndirectedGraph {
        let edges: Vec<_> = (0..n - 1).map(|a| (a, a + 1)).collect();
        UndirectedGraph::from_edges(n as usize, &edges)
    }

    fn cycle(n: u32) -> UndirectedGraph {
        let edges: Vec<_> = (0..n).map(|a| (a, (a + 1) % n)).collect();
        UndirectedGraph::from_edges(n as usize, &edges)
    }

    fn star(leaves: u32) -> UndirectedGraph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        UndirectedGraph::from_edges(leaves as usize + 1, &edges)
    }

    /// K_{3,2}: inputs {0,1,2} each linked to outputs {3,4}.
    fn bipartite_3_2() -> UndirectedGraph {
        let edges: Vec<_> = (0..3).flat_map(|a| (3..5).map(move |b| (a, b))).collect();
        UndirectedGraph::from_edges(5, &edges)
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(5, 10).unwrap(), 1.0);
        assert!((density(3, 2).unwrap() - 0.666_667).abs() < 1e-6);
        let litecoin = density(134_607, 6_538_828).unwrap();
        assert!((litecoin - 7.2176e-4).abs() / 7.2176e-4 < 1e-3, "{litecoin}");
        assert_eq!(density(1, 0), Err(MetricError::TooFewNodes(1)));
    }

    #[test]
    fn edge_vertex_examples() {
        assert!((edge_vertex_ratio(62_321, 137_825).unwrap() - 2.2115).abs() < 1e-3);
        assert!((edge_vertex_ratio(134_607, 6_538_828).unwrap() - 48.577).abs() < 1e-2);
        assert_eq!(edge_vertex_ratio(4, 0).unwrap(), 0.0);
        assert_eq!(edge_vertex_ratio(0, 0), Err(MetricError::NoNodes));
    }

    #[test]
    fn exact_clustering_examples() {
        let k3 = clustering_exact(&complete(3), usize::MAX).unwrap();
        assert_eq!((k3.value, k3.samples, k3.triangle_hits), (1.0, 3, 3));
        assert_eq!(clustering_exact(&bipartite_3_2(), usize::MAX).unwrap().value, 0.0);
        let k4 = clustering_exact(&complete(4), usize::MAX).unwrap();
        assert_eq!((k4.value, k4.samples, k4.triangle_hits), (1.0, 12, 12));
        assert_eq!(triangle_count(&complete(4)), 4);
        assert_eq!(clustering_exact(&path(2), usize::MAX), Err(MetricError::NoTriads));
        assert!(matches!(
            clustering_exact(&complete(4), 3),
            Err(MetricError::CapExceeded { .. })
        ));
    }

    #[test]
    fn sampled_clustering_examples() {
        let k3 = clustering_sampled(&complete(3), 1000, 1).unwrap();
        assert_eq!(k3.value, 1.0);
        assert_eq!(k3.triangle_hits, 1000);
        assert_eq!(clustering_sampled(&bipartite_3_2(), 1000, 1).unwrap().value, 0.0);
        assert_eq!(clustering_sampled(&path(2), 10, 1), Err(MetricError::NoTriads));
        assert_eq!(clustering_sampled(&complete(3), 0, 1), Err(MetricError::NoSamples));
        // Odd sample counts are split across streams without loss.
        let e = clustering_sampled(&complete(5), 1_001, 4).unwrap();
        assert_eq!(e.samples, 1_001);
        assert_eq!(e.triangle_hits, 1_001);
    }

    #[test]
    fn sampled_clustering_is_deterministic() {
        let mut edges = Vec::new();
        for a in 0..60u32 {
            for b in a + 1..60 {
                if (a * 7 + b * 13) % 5 == 0 {
                    edges.push((a, b));
                }
            }
        }
        let g = UndirectedGraph::from_edges(60, &edges);
        let a = clustering_sampled(&g, 10_000, 77).unwrap();
        let b = clustering_sampled(&g, 10_000, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn clique_examples() {
        // Triangle plus pendant.
        let g = UndirectedGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let r = max_clique(&g, &CliqueBudget::unlimited());
        assert_eq!(r.size, 3);
        assert_eq!(r.members, vec![0, 1, 2]);
        assert!(r.exact && r.verify(&g));

        let r = max_clique(&bipartite_3_2(), &CliqueBudget::unlimited());
        assert_eq!(r.size, 2);
        assert!(r.verify(&bipartite_3_2()));

        let empty = UndirectedGraph::from_edges(0, &[]);
        assert_eq!(max_clique(&empty, &CliqueBudget::default()).size, 0);
        let lonely = UndirectedGraph::from_edges(3, &[]);
        assert_eq!(max_clique(&lonely, &CliqueBudget::default()).size, 1);

        let k7 = complete(7);
        let r = max_clique(&k7, &CliqueBudget::unlimited());
        assert_eq!(r.size, 7);
        assert!(r.verify(&k7));
    }

    #[test]
    fn clique_budget_exhaustion_is_flagged() {
        let g = complete(30);
        let r = max_clique(
            &g,
            &CliqueBudget {
                time_limit: None,
                max_steps: Some(3),
            },
        );
        assert!(!r.exact);
        assert!(r.verify(&g));
        assert!(r.size < 30);
    }

    #[test]
    fn assortativity_examples() {
        assert!((assortativity(&star(5)).unwrap() + 1.0).abs() < 1e-12);
        assert!((assortativity(&path(4)).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(assortativity(&cycle(5)), Err(MetricError::ZeroVariance));
        assert_eq!(assortativity(&complete(4)), Err(MetricError::ZeroVariance));
        assert_eq!(assortativity(&UndirectedGraph::from_edges(2, &[])), Err(MetricError::NoEdges));
    }

    fn month(records: &[TxRecord], m: u32, t: &mut AddressTable) -> MonthlyGraph {
        build_mtg(records, MonthIndex(m), t)
    }

    fn tx(i: &str, o: &str) -> TxRecord {
        TxRecord::transfer(0, [i], [o]).unwrap()
    }

    #[test]
    fn repetition_examples() {
        let mut t = AddressTable::new();
        let prev = month(&[tx("A", "B"), tx("B", "C")], 0, &mut t);
        let same = month(&[tx("A", "B"), tx("B", "C")], 1, &mut t);
        assert_eq!(repetition_ratio_nodes(&same, &prev).unwrap(), 1.0);
        assert_eq!(repetition_ratio_edges(&same, &prev).unwrap(), 1.0);

        let disjoint = month(&[tx("X", "Y")], 1, &mut t);
        assert_eq!(repetition_ratio_nodes(&disjoint, &prev).unwrap(), 0.0);
        assert_eq!(repetition_ratio_edges(&disjoint, &prev).unwrap(), 0.0);

        let curr = month(&[tx("B", "C"), tx("D", "E")], 1, &mut t);
        assert_eq!(repetition_ratio_nodes(&curr, &prev).unwrap(), 0.5);
        let curr_edges = month(&[tx("B", "C"), tx("C", "D")], 1, &mut t);
        assert_eq!(repetition_ratio_edges(&curr_edges, &prev).unwrap(), 0.5);

        let gap = month(&[tx("A", "B")], 2, &mut t);
        assert!(matches!(
            repetition_ratio_nodes(&gap, &prev),
            Err(MetricError::MonthDiscontinuity { .. })
        ));
        let empty = MonthlyGraph::empty(MonthIndex(1));
        assert_eq!(repetition_ratio_nodes(&empty, &prev), Err(MetricError::EmptyCurrent));
    }
}
