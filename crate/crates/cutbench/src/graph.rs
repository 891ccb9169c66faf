//! Weighted undirected simple graphs and cut bookkeeping.
//!
//! [`Graph`] is the universal instance carrier: vertices are `0..n`, edges
//! are stored canonically as `u < v` sorted lexicographically, and adjacency
//! lists are derived at construction. Graphs are immutable once built, so
//! they are safe to share across worker threads.

use crate::error::{Error, Result};
use crate::families::SrgParams;

/// A single undirected edge `u < v` with weight `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples, normalizing each to `u < v`.
    ///
    /// Rejects self-loops, out-of-range endpoints, duplicate vertex pairs
    /// and non-finite weights.
    pub fn new(n: usize, raw: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidArgument("vertex count must be positive".into()));
        }
        let mut edges: Vec<Edge> = Vec::new();
        for (a, b, w) in raw {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite weight on edge ({a}, {b})"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            edges.push(Edge { u, v, w });
        }
        edges.sort_by_key(|e| (e.u, e.v));
        for pair in edges.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({}, {})",
                    pair[0].u, pair[0].v
                )));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Same edge set with every weight replaced.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Graph> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} edges",
                weights.len(),
                self.edges.len()
            )));
        }
        Graph::new(
            self.n,
            self.edges
                .iter()
                .zip(weights)
                .map(|(e, &w)| (e.u, e.v, w)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` with weights, sorted by neighbor index.
    pub fn adj(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Unweighted degree.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn total_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w.abs()).sum()
    }

    /// Induced infinity norm of the weighted adjacency matrix
    /// (maximum absolute row sum).
    pub fn adjacency_inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|v| self.adj[v].iter().map(|&(_, w)| w.abs()).sum())
            .fold(0.0, f64::max)
    }

    /// Dense weighted adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for e in &self.edges {
            a[e.u * self.n + e.v] = e.w;
            a[e.v * self.n + e.u] = e.w;
        }
        a
    }

    /// Number of shared neighbors of two distinct vertices, ignoring weights.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Result<usize> {
        if u == v || u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "common_neighbors needs two distinct vertices below {}, got ({u}, {v})",
                self.n
            )));
        }
        // Adjacency lists are sorted, so a linear merge suffices.
        let (mut i, mut j, mut count) = (0, 0, 0);
        let (a, b) = (&self.adj[u], &self.adj[v]);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    /// Common degree if the graph is regular.
    pub fn check_regular(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Strongly-regular parameters `(n, k, λ, μ)` if the graph has them.
    ///
    /// Requires regularity, a single common-neighbor count λ over adjacent
    /// pairs and a single count μ over non-adjacent pairs; complete and
    /// edgeless graphs are excluded by definition.
    pub fn check_srg(&self) -> Option<SrgParams> {
        let n = self.n;
        let k = self.check_regular()?;
        if k == 0 || k == n - 1 {
            return None;
        }
        let sets = self.neighbor_bitsets();
        let words = sets.words;
        let mut lambda: Option<usize> = None;
        let mut mu: Option<usize> = None;
        let mut adjacent = vec![false; n];
        for u in 0..n {
            for slot in adjacent.iter_mut() {
                *slot = false;
            }
            for &(v, _) in &self.adj[u] {
                adjacent[v] = true;
            }
            for (v, &is_adjacent) in adjacent.iter().enumerate().skip(u + 1) {
                let shared: u32 = (0..words)
                    .map(|w| (sets.bits[u * words + w] & sets.bits[v * words + w]).count_ones())
                    .sum();
                let slot = if is_adjacent { &mut lambda } else { &mut mu };
                match *slot {
                    None => *slot = Some(shared as usize),
                    Some(expect) if expect != shared as usize => return None,
                    Some(_) => {}
                }
            }
        }
        SrgParams::new(
            n as u64,
            k as u64,
            lambda.unwrap_or(0) as u64,
            mu.unwrap_or(0) as u64,
        )
        .ok()
    }

    /// True iff no edge has a common neighbor.
    pub fn is_triangle_free(&self) -> bool {
        let sets = self.neighbor_bitsets();
        let words = sets.words;
        self.edges.iter().all(|e| {
            (0..words)
                .all(|w| sets.bits[e.u * words + w] & sets.bits[e.v * words + w] == 0)
        })
    }

    /// Spread of edge-weight magnitudes on a log scale:
    /// `max log10|w| − min log10|w|` over nonzero weights.
    pub fn magnitude_range(&self) -> Result<f64> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in &self.edges {
            if e.w != 0.0 {
                let mag = e.w.abs().log10();
                lo = lo.min(mag);
                hi = hi.max(mag);
            }
        }
        if lo > hi {
            return Err(Error::InvalidArgument(
                "magnitude range needs at least one nonzero weight".into(),
            ));
        }
        Ok(hi - lo)
    }

    pub fn has_negative_weight(&self) -> bool {
        self.edges.iter().any(|e| e.w < 0.0)
    }

    /// Breadth-first connectivity.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    /// Connectivity of the complement graph, without materializing it.
    pub fn complement_is_connected(&self) -> bool {
        let sets = self.neighbor_bitsets();
        let words = sets.words;
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            let row = &sets.bits[u * words..(u + 1) * words];
            for v in 0..self.n {
                if v != u && !seen[v] && row[v / 64] & (1u64 << (v % 64)) == 0 {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    fn neighbor_bitsets(&self) -> Bitsets {
        let words = self.n.div_ceil(64);
        let mut bits = vec![0u64; self.n * words];
        for e in &self.edges {
            bits[e.u * words + e.v / 64] |= 1u64 << (e.v % 64);
            bits[e.v * words + e.u / 64] |= 1u64 << (e.u % 64);
        }
        Bitsets { words, bits }
    }
}

struct Bitsets {
    words: usize,
    bits: Vec<u64>,
}

/// A bipartition encoded as one `±1` per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutAssignment {
    sides: Vec<i8>,
}

impl CutAssignment {
    pub fn new(sides: Vec<i8>) -> Result<CutAssignment> {
        if sides.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("sides must be ±1".into()));
        }
        Ok(CutAssignment { sides })
    }

    pub fn sides(&self) -> &[i8] {
        &self.sides
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

/// Total weight crossing the partition: `½ Σ w_uv (1 − x_u x_v)`.
pub fn cut_value(g: &Graph, a: &CutAssignment) -> Result<f64> {
    if a.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "assignment length {} for {} vertices",
            a.len(),
            g.n()
        )));
    }
    let sides = a.sides();
    Ok(g.edges()
        .iter()
        .filter(|e| sides[e.u] != sides[e.v])
        .map(|e| e.w)
        .sum())
}
