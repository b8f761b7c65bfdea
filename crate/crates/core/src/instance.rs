//! Random graphs realising a blueprint.
//!
//! The graph a local algorithm sees is just a [`CsrGraph`] with random
//! vertex ids and shuffled neighbour lists. The cluster of every vertex is
//! kept separately and only reachable through [`Evaluation`], which the
//! experiment harness uses for classification and scoring.

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::bipartite::{sample_bipartite, SampleError, SamplerConfig};
use crate::blueprint::{Blueprint, BlueprintError, BpCluster, EdgeKind};
use crate::graph::CsrGraph;
use crate::rng::stream_rng;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Blueprint(#[from] BlueprintError),
    #[error("block {block}: {source}")]
    Sample { block: usize, source: SampleError },
    #[error("instance has {0} vertices, more than 32-bit ids allow")]
    TooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceGraph {
    graph: CsrGraph,
    hidden: Vec<BpCluster>,
    seed: u64,
    blueprint_hash: u64,
}

/// Label classes of the prompts the experiments care about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    /// Between `C0^(0)` and `C0^(1)`: the main matching.
    Significant,
    /// Between `C0^(0)` and `C1^(0)`.
    Misleading,
    Other,
}

/// Right side degrees of a dummy block: `floor` or `ceil` of the average,
/// with the surplus handed out round-robin across blocks so every dummy
/// vertex ends up within one of the mean overall.
fn dummy_side_degrees(left_total: u64, ny: usize, offset: &mut usize) -> Vec<u32> {
    let base = (left_total / ny as u64) as u32;
    let rem = (left_total % ny as u64) as usize;
    let start = *offset;
    *offset = (start + rem) % ny;
    (0..ny).map(|j| base + u32::from((j + ny - start) % ny < rem)).collect()
}

impl InstanceGraph {
    pub fn sample(bp: &Blueprint, seed: u64, cfg: &SamplerConfig) -> Result<Self, InstanceError> {
        let n = bp.params().n;
        if n >= u32::MAX as u64 {
            return Err(InstanceError::TooLarge(n));
        }
        let sizes = bp.sizes();
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        offsets.push(0u64);
        for &s in sizes {
            offsets.push(offsets.last().unwrap() + s);
        }
        debug_assert_eq!(*offsets.last().unwrap(), n);

        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut stream_rng(seed, 0));

        let mut adj: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
        for c in bp.clusters() {
            let cap = if c == bp.dummy() { 0 } else { bp.degree(c)? as usize };
            for _ in 0..sizes[c.index()] {
                adj.push(Vec::with_capacity(cap));
            }
        }
        // adj is indexed by internal id until the relabelling at the end
        let mut dummy_offset = 0usize;
        for (bi, e) in bp.edges().iter().enumerate() {
            let (nx, ny) = (sizes[e.from.index()] as usize, sizes[e.to.index()] as usize);
            let left = vec![e.label_forward as u32; nx];
            let right = match e.kind {
                EdgeKind::Dummy => dummy_side_degrees(nx as u64 * e.label_forward, ny, &mut dummy_offset),
                EdgeKind::Tree | EdgeKind::Matching => vec![e.label_backward as u32; ny],
            };
            let mut rng = stream_rng(seed, bi as u64 + 1);
            let block = sample_bipartite(&left, &right, &mut rng, cfg).map_err(|source| InstanceError::Sample { block: bi, source })?;
            let (ox, oy) = (offsets[e.from.index()] as u32, offsets[e.to.index()] as u32);
            for a in 0..nx as u32 {
                for &b in block.left_neighbors(a) {
                    adj[(ox + a) as usize].push(oy + b);
                    adj[(oy + b) as usize].push(ox + a);
                }
            }
        }

        let mut hidden = vec![BpCluster(0); n as usize];
        let mut public: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
        let mut list_rng = stream_rng(seed, u64::MAX);
        let mut cluster = 0usize;
        for (internal, mut list) in adj.into_iter().enumerate() {
            while internal as u64 >= offsets[cluster + 1] {
                cluster += 1;
            }
            for x in list.iter_mut() {
                *x = perm[*x as usize];
            }
            list.shuffle(&mut list_rng);
            let p = perm[internal] as usize;
            hidden[p] = BpCluster(cluster as u32);
            public[p] = list;
        }
        Ok(Self { graph: CsrGraph::from_adjacency(public), hidden, seed, blueprint_hash: bp.content_hash() })
    }

    pub(crate) fn from_parts(graph: CsrGraph, hidden: Vec<BpCluster>, seed: u64, blueprint_hash: u64) -> Self {
        Self { graph, hidden, seed, blueprint_hash }
    }

    pub(crate) fn hidden_map(&self) -> &[BpCluster] {
        &self.hidden
    }

    /// The graph as a local algorithm sees it.
    pub fn graph(&self) -> &CsrGraph {
        &self.graph
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn blueprint_hash(&self) -> u64 {
        self.blueprint_hash
    }

    pub fn evaluation(&self) -> Evaluation<'_> {
        Evaluation { instance: self }
    }

    /// Same graph under fresh ids and fresh neighbour orders.
    pub fn relabel(&self, seed: u64) -> Self {
        self.relabel_with_map(seed).0
    }

    /// As [`relabel`](Self::relabel), also returning `old id → new id`.
    pub fn relabel_with_map(&self, seed: u64) -> (Self, Vec<u32>) {
        let n = self.graph.n();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(&mut stream_rng(seed, 0));
        let mut list_rng = stream_rng(seed, 1);
        let mut adj = vec![Vec::new(); n];
        let mut hidden = vec![BpCluster(0); n];
        for v in 0..n as u32 {
            let mut list: Vec<u32> = self.graph.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
            list.shuffle(&mut list_rng);
            adj[perm[v as usize] as usize] = list;
            hidden[perm[v as usize] as usize] = self.hidden[v as usize];
        }
        (Self { graph: CsrGraph::from_adjacency(adj), hidden, seed, blueprint_hash: self.blueprint_hash }, perm)
    }
}

/// Access to the hidden cluster map. Only the harness should hold one;
/// decision rules get an [`Adjacency`](crate::graph::Adjacency) view.
#[derive(Clone, Copy)]
pub struct Evaluation<'a> {
    instance: &'a InstanceGraph,
}

impl<'a> Evaluation<'a> {
    pub fn graph(&self) -> &'a CsrGraph {
        &self.instance.graph
    }

    pub fn cluster_of(&self, v: u32) -> BpCluster {
        self.instance.hidden[v as usize]
    }

    pub fn vertices_in(&self, c: BpCluster) -> Vec<u32> {
        (0..self.instance.hidden.len() as u32).filter(|&v| self.instance.hidden[v as usize] == c).collect()
    }

    pub fn classify_edge(&self, bp: &Blueprint, u: u32, v: u32) -> EdgeClass {
        let pair = |(a, b): (BpCluster, BpCluster)| {
            let (x, y) = (self.cluster_of(u), self.cluster_of(v));
            (x == a && y == b) || (x == b && y == a)
        };
        if pair(bp.significant_pair()) {
            EdgeClass::Significant
        } else if pair(bp.misleading_pair()) {
            EdgeClass::Misleading
        } else {
            EdgeClass::Other
        }
    }

    /// Edges of a class, oriented so the first endpoint lies in `C0^(0)`.
    pub fn class_edges(&self, bp: &Blueprint, class: EdgeClass) -> Vec<(u32, u32)> {
        let (root, other) = match class {
            EdgeClass::Significant => bp.significant_pair(),
            EdgeClass::Misleading => bp.misleading_pair(),
            EdgeClass::Other => return Vec::new(),
        };
        let mut out = Vec::new();
        for u in self.vertices_in(root) {
            for &v in self.instance.graph.neighbors(u) {
                if self.cluster_of(v) == other {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Every vertex's neighbour count into every cluster, against the
    /// blueprint: exact on tree clusters, `floor`/`ceil` of the block
    /// average on the dummy side, zero where the blueprint has no block.
    /// Returns the first few offending `(vertex, cluster, count)` triples.
    pub fn degree_audit(&self, bp: &Blueprint) -> Vec<(u32, BpCluster, u64)> {
        let k = bp.num_clusters();
        let sizes = bp.sizes();
        let d = bp.dummy();
        // allowed[x][y] = admissible counts from a vertex in x into y
        let mut allowed: Vec<Vec<(u64, u64)>> = vec![vec![(0, 0); k]; k];
        for e in bp.edges() {
            let (x, y) = (e.from.index(), e.to.index());
            allowed[x][y] = (e.label_forward, e.label_forward);
            allowed[y][x] = if e.to == d {
                let total = sizes[x] * e.label_forward;
                let ny = sizes[y];
                (total / ny, total.div_ceil(ny))
            } else {
                (e.label_backward, e.label_backward)
            };
        }
        let g = &self.instance.graph;
        let mut bad = Vec::new();
        let mut counts = vec![0u64; k];
        for v in 0..g.n() as u32 {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in g.neighbors(v) {
                counts[self.cluster_of(w).index()] += 1;
            }
            let x = self.cluster_of(v).index();
            for (y, &c) in counts.iter().enumerate() {
                let (lo, hi) = allowed[x][y];
                if (c < lo || c > hi) && bad.len() < 16 {
                    bad.push((v, BpCluster(y as u32), c));
                }
            }
        }
        bad
    }
}

/// Line graph with the endpoints of every line-graph vertex kept hidden.
#[derive(Debug, Clone)]
pub struct LineGraph {
    graph: CsrGraph,
    endpoints: Vec<(u32, u32)>,
}

impl LineGraph {
    /// `L(G)` under a random relabelling of its vertices and neighbour
    /// lists. The result has `Σ_v C(deg v, 2)` edges, so keep `G` small.
    pub fn build(g: &CsrGraph, seed: u64) -> Self {
        let edges: Vec<(u32, u32)> = g.edges().collect();
        let mut perm: Vec<u32> = (0..edges.len() as u32).collect();
        perm.shuffle(&mut stream_rng(seed, 0));
        let mut endpoints = vec![(0, 0); edges.len()];
        let mut incident: Vec<Vec<u32>> = vec![Vec::new(); g.n()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            let id = perm[i];
            endpoints[id as usize] = (u, v);
            incident[u as usize].push(id);
            incident[v as usize].push(id);
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); edges.len()];
        for inc in &incident {
            for (i, &a) in inc.iter().enumerate() {
                for &b in &inc[i + 1..] {
                    adj[a as usize].push(b);
                    adj[b as usize].push(a);
                }
            }
        }
        let mut rng = stream_rng(seed, 1);
        for list in &mut adj {
            list.shuffle(&mut rng);
        }
        Self { graph: CsrGraph::from_adjacency(adj), endpoints }
    }

    pub fn graph(&self) -> &CsrGraph {
        &self.graph
    }

    /// Endpoints in `G` of line-graph vertex `x` (evaluation only).
    pub fn endpoints(&self, x: u32) -> (u32, u32) {
        self.endpoints[x as usize]
    }

    pub fn vertex_of_edge(&self, u: u32, v: u32) -> Option<u32> {
        let key = (u.min(v), u.max(v));
        self.endpoints.iter().position(|&e| e == key).map(|i| i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::{parse_rational, Params, Regime};
    use crate::graph::Adjacency;

    fn small() -> Blueprint {
        let p = Params::derive(parse_rational("0.9").unwrap(), 1, 3, 27, Regime::Desk).unwrap();
        Blueprint::build(p, true).unwrap()
    }

    #[test]
    fn degrees_match_blueprint() {
        let bp = small();
        let inst = InstanceGraph::sample(&bp, 11, &SamplerConfig::default()).unwrap();
        let g = inst.graph();
        assert_eq!(g.n() as u64, bp.params().n);
        assert!(g.is_simple());
        let ev = inst.evaluation();
        let dummy_total: u64 = bp.sizes()[..bp.num_clusters() - 1].iter().sum::<u64>() * (bp.params().big_delta_r() + 1);
        let mean = dummy_total as f64 / bp.params().dummy_size as f64;
        for v in 0..g.n() as u32 {
            let c = ev.cluster_of(v);
            if c == bp.dummy() {
                assert!((g.degree(v) as f64 - mean).abs() < 1.0 + 1e-9);
            } else {
                assert_eq!(g.degree(v) as u64, bp.degree(c).unwrap());
            }
        }
    }

    #[test]
    fn reproducible_and_relabel_preserves_structure() {
        let bp = small();
        let a = InstanceGraph::sample(&bp, 5, &SamplerConfig::default()).unwrap();
        let b = InstanceGraph::sample(&bp, 5, &SamplerConfig::default()).unwrap();
        assert_eq!(a, b);
        let r = a.relabel(9);
        let mut da: Vec<usize> = (0..a.graph().n() as u32).map(|v| a.graph().degree(v)).collect();
        let mut dr: Vec<usize> = (0..r.graph().n() as u32).map(|v| r.graph().degree(v)).collect();
        da.sort_unstable();
        dr.sort_unstable();
        assert_eq!(da, dr);
        assert_eq!(
            a.evaluation().class_edges(&bp, EdgeClass::Significant).len(),
            r.evaluation().class_edges(&bp, EdgeClass::Significant).len()
        );
    }

    #[test]
    fn class_edges_have_expected_counts() {
        let bp = small();
        let inst = InstanceGraph::sample(&bp, 2, &SamplerConfig::default()).unwrap();
        let ev = inst.evaluation();
        // perfect matching between the roots; C1 hangs off C0 with label 1 downward
        assert_eq!(ev.class_edges(&bp, EdgeClass::Significant).len(), 27);
        assert_eq!(ev.class_edges(&bp, EdgeClass::Misleading).len(), 27);
        for (u, v) in ev.class_edges(&bp, EdgeClass::Misleading) {
            assert_eq!(ev.classify_edge(&bp, v, u), EdgeClass::Misleading);
        }
    }

    #[test]
    fn line_graph_of_small_graphs() {
        // path a-b-c-d → L is a path on 3 vertices
        let g = CsrGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let l = LineGraph::build(&g, 1);
        assert_eq!(l.graph().n(), 3);
        assert_eq!(l.graph().m(), 2);
        // triangle → triangle; star K_{1,3} → triangle
        let t = LineGraph::build(&CsrGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]), 2);
        assert_eq!((t.graph().n(), t.graph().m()), (3, 3));
        let s = LineGraph::build(&CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]), 3);
        assert_eq!((s.graph().n(), s.graph().m()), (3, 3));
        let x = s.vertex_of_edge(2, 0).unwrap();
        assert_eq!(s.endpoints(x), (0, 2));
    }
}
