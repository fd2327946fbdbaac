//! Compressed sparse row storage for simple undirected graphs.

/// A simple undirected graph over dense vertex indices `0..n` with sorted
/// neighbor lists. Self-loops and duplicate edges are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl UndirectedGraph {
    /// Builds a graph on `n` vertices from an edge list in any orientation.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(a, b) in edges {
            assert!((a as usize) < n && (b as usize) < n, "edge ({a},{b}) out of range for {n} vertices");
            if a != b {
                degree[a as usize] += 1;
                degree[b as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; *offsets.last().unwrap()];
        for &(a, b) in edges {
            if a != b {
                neighbors[fill[a as usize]] = b;
                fill[a as usize] += 1;
                neighbors[fill[b as usize]] = a;
                fill[b as usize] += 1;
            }
        }
        // Sort and dedup each row, then compact.
        let mut write = 0;
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for v in 0..n {
            let row = &mut neighbors[offsets[v]..offsets[v + 1]];
            row.sort_unstable();
            let mut last = None;
            for i in offsets[v]..offsets[v + 1] {
                let u = neighbors[i];
                if last != Some(u) {
                    neighbors[write] = u;
                    write += 1;
                    last = Some(u);
                }
            }
            new_offsets.push(write);
        }
        neighbors.truncate(write);
        UndirectedGraph {
            offsets: new_offsets,
            neighbors,
        }
    }

    /// Builds a graph from edges already normalized as sorted, deduplicated
    /// `(lo, hi)` pairs with `lo < hi`. Skips the per-row sort.
    pub fn from_sorted_unique(n: usize, edges: &[(u32, u32)]) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(a, b)| a < b));
        let mut degree = vec![0usize; n];
        for &(a, b) in edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; *offsets.last().unwrap()];
        // Rows stay sorted: all smaller neighbors first (ordered by the
        // (hi, lo) sort), then all larger ones (ordered by the input sort).
        let mut by_hi: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (b, a)).collect();
        by_hi.sort_unstable();
        for &(hi, lo) in &by_hi {
            neighbors[fill[hi as usize]] = lo;
            fill[hi as usize] += 1;
        }
        for &(lo, hi) in edges {
            neighbors[fill[lo as usize]] = hi;
            fill[lo as usize] += 1;
        }
        UndirectedGraph { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let (small, other) = if self.degree(a) <= self.degree(b) { (a, b) } else { (b, a) };
        self.neighbors(small).binary_search(&other).is_ok()
    }

    /// Each undirected edge once, as `(lo, hi)`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.node_count() as u32)
            .flat_map(move |v| self.neighbors(v).iter().filter(move |&&u| u > v).map(move |&u| (v, u)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }
}
