//! Compressed adjacency storage. Neighbour order is part of the graph:
//! local algorithms address neighbours by index.

use serde::{Deserialize, Serialize};

/// Read-only, index-addressed adjacency; the only view a local algorithm
/// gets of a graph.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn degree(&self, v: u32) -> usize;
    /// `index` is 0-based.
    fn neighbor(&self, v: u32, index: usize) -> Option<u32>;
    fn max_degree(&self) -> usize;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsrGraph {
    offsets: Vec<u64>,
    neighbors: Vec<u32>,
    max_degree: usize,
}

impl CsrGraph {
    pub fn from_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let total: usize = adj.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        offsets.push(0);
        let mut max_degree = 0;
        for list in adj {
            max_degree = max_degree.max(list.len());
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len() as u64);
        }
        Self { offsets, neighbors, max_degree }
    }

    /// Undirected graph from an edge list; neighbour order follows the list.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        Self::from_adjacency(adj)
    }

    pub(crate) fn from_raw(offsets: Vec<u64>, neighbors: Vec<u32>) -> Self {
        let max_degree = offsets.windows(2).map(|w| (w[1] - w[0]) as usize).max().unwrap_or(0);
        Self { offsets, neighbors, max_degree }
    }

    pub(crate) fn raw(&self) -> (&[u64], &[u32]) {
        (&self.offsets, &self.neighbors)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let (s, e) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        &self.neighbors[s as usize..e as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.neighbors(u).len() <= self.neighbors(v).len() { (u, v) } else { (v, u) };
        self.neighbors(a).contains(&b)
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_simple(&self) -> bool {
        (0..self.n() as u32).all(|u| {
            let mut v = self.neighbors(u).to_vec();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1]) && !v.contains(&u)
        })
    }
}

impl Adjacency for CsrGraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    fn neighbor(&self, v: u32, index: usize) -> Option<u32> {
        self.neighbors(v).get(index).copied()
    }

    fn max_degree(&self) -> usize {
        self.max_degree
    }
}
