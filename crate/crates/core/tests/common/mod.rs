//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod strategies;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use txgraph::UndirectedGraph;

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in a + 1..n as u32 {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    UndirectedGraph::from_edges(n, &edges)
}

/// Largest clique by checking every vertex subset (n ≤ 26).
pub fn brute_force_clique(g: &UndirectedGraph) -> usize {
    let n = g.node_count();
    assert!(n <= 26);
    let adj: Vec<u32> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let mut is_clique = vec![false; 1 << n];
    is_clique[0] = true;
    let mut best = 0;
    for mask in 1u32..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = is_clique[rest as usize] && adj[low] & rest == rest;
        is_clique[mask as usize] = ok;
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Pearson correlation over the (deg u, deg v) pairs of both orientations of
/// every edge, in plain floating point.
pub fn pearson_oracle(g: &UndirectedGraph) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b) in g.edges() {
        let (da, db) = (g.degree(a) as f64, g.degree(b) as f64);
        xs.extend([da, db]);
        ys.extend([db, da]);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Log-likelihood of a continuous power law whose lower bound is shifted to
/// `x_min - 1/2`; its maximizer is the closed-form discrete estimator.
pub fn shifted_continuous_log_likelihood(alpha: f64, x_min: u64, xs: &[u64]) -> f64 {
    let n = xs.len() as f64;
    let lo = x_min as f64 - 0.5;
    n * (alpha - 1.0).ln() + n * (alpha - 1.0) * lo.ln() - alpha * xs.iter().map(|&x| (x as f64).ln()).sum::<f64>()
}
