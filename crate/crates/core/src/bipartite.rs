//! Uniform-ish sampling of simple bipartite graphs with prescribed degrees:
//! configuration model, two-switch repair of parallel edges, then a
//! two-switch Markov chain to mix.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::rng::rng_from_seed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("degree sums differ: left {left}, right {right}")]
    DegreeSumMismatch { left: u64, right: u64 },
    #[error("degree {degree} exceeds the {other} vertices on the other side")]
    DegreeTooLarge { degree: u32, other: usize },
    #[error("biregular block {nx}x{ny} with degrees {dx}/{dy} is inconsistent")]
    Inconsistent { nx: usize, ny: usize, dx: u32, dy: u32 },
    #[error("could not remove parallel edges after {attempts} attempts")]
    RepairFailed { attempts: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwitchError {
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(u32, u32),
    #[error("switch would create existing edge ({0}, {1})")]
    WouldDuplicate(u32, u32),
    #[error("switch endpoints are not distinct")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    /// The chain runs `mixing_factor · m · ln m` proposals.
    pub mixing_factor: f64,
    /// Attempts per parallel edge before giving up.
    pub repair_attempts: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { mixing_factor: 10.0, repair_attempts: 1_000_000 }
    }
}

/// A bipartite multigraph between `0..nx` (left) and `0..ny` (right).
/// Adjacency lists are kept sorted so membership is a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteBlock {
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    /// `stub_prefix[a]` = total left degree before `a`; picks a uniform edge.
    stub_prefix: Vec<u64>,
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    let pos = v.partition_point(|&y| y < x);
    v.insert(pos, x);
}

fn remove_sorted(v: &mut Vec<u32>, x: u32) -> bool {
    match v.binary_search(&x) {
        Ok(pos) => {
            v.remove(pos);
            true
        }
        Err(_) => false,
    }
}

impl BipartiteBlock {
    pub fn from_edges(nx: usize, ny: usize, edges: &[(u32, u32)]) -> Self {
        let mut left = vec![Vec::new(); nx];
        let mut right = vec![Vec::new(); ny];
        for &(a, b) in edges {
            left[a as usize].push(b);
            right[b as usize].push(a);
        }
        left.iter_mut().for_each(|v| v.sort_unstable());
        right.iter_mut().for_each(|v| v.sort_unstable());
        let mut stub_prefix = Vec::with_capacity(nx + 1);
        let mut acc = 0u64;
        stub_prefix.push(0);
        for v in &left {
            acc += v.len() as u64;
            stub_prefix.push(acc);
        }
        Self { left, right, stub_prefix }
    }

    pub fn nx(&self) -> usize {
        self.left.len()
    }

    pub fn ny(&self) -> usize {
        self.right.len()
    }

    pub fn edge_count(&self) -> u64 {
        *self.stub_prefix.last().unwrap_or(&0)
    }

    pub fn left_degree(&self, a: u32) -> usize {
        self.left[a as usize].len()
    }

    pub fn right_degree(&self, b: u32) -> usize {
        self.right[b as usize].len()
    }

    pub fn left_neighbors(&self, a: u32) -> &[u32] {
        &self.left[a as usize]
    }

    pub fn right_neighbors(&self, b: u32) -> &[u32] {
        &self.right[b as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let (la, rb) = (&self.left[a as usize], &self.right[b as usize]);
        if la.len() <= rb.len() {
            la.binary_search(&b).is_ok()
        } else {
            rb.binary_search(&a).is_ok()
        }
    }

    pub fn multiplicity(&self, a: u32, b: u32) -> usize {
        let la = &self.left[a as usize];
        la.partition_point(|&y| y <= b) - la.partition_point(|&y| y < b)
    }

    /// Edges with multiplicity, ordered by left endpoint.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count() as usize);
        for (a, nbrs) in self.left.iter().enumerate() {
            out.extend(nbrs.iter().map(|&b| (a as u32, b)));
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.left.iter().all(|v| v.windows(2).all(|w| w[0] != w[1]))
    }

    /// Replace `(a,b), (c,d)` by `(a,d), (c,b)`.
    pub fn two_switch(&mut self, (a, b): (u32, u32), (c, d): (u32, u32)) -> Result<(), SwitchError> {
        if a == c || b == d {
            return Err(SwitchError::Degenerate);
        }
        if !self.has_edge(a, b) {
            return Err(SwitchError::MissingEdge(a, b));
        }
        if !self.has_edge(c, d) {
            return Err(SwitchError::MissingEdge(c, d));
        }
        if self.has_edge(a, d) {
            return Err(SwitchError::WouldDuplicate(a, d));
        }
        if self.has_edge(c, b) {
            return Err(SwitchError::WouldDuplicate(c, b));
        }
        self.apply_switch((a, b), (c, d));
        Ok(())
    }

    fn apply_switch(&mut self, (a, b): (u32, u32), (c, d): (u32, u32)) {
        debug_assert!(self.has_edge(a, b) && self.has_edge(c, d));
        remove_sorted(&mut self.left[a as usize], b);
        remove_sorted(&mut self.right[b as usize], a);
        remove_sorted(&mut self.left[c as usize], d);
        remove_sorted(&mut self.right[d as usize], c);
        insert_sorted(&mut self.left[a as usize], d);
        insert_sorted(&mut self.right[d as usize], a);
        insert_sorted(&mut self.left[c as usize], b);
        insert_sorted(&mut self.right[b as usize], c);
    }

    fn random_edge<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        let stub = rng.gen_range(0..self.edge_count());
        let a = self.stub_prefix.partition_point(|&p| p <= stub) - 1;
        let nbrs = &self.left[a];
        (a as u32, nbrs[rng.gen_range(0..nbrs.len())])
    }

    /// One chain step: propose a switch of two uniform edges, apply it if
    /// legal. Returns whether the graph changed.
    pub fn switch_step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        if self.edge_count() < 2 {
            return false;
        }
        let (a, b) = self.random_edge(rng);
        let (c, d) = self.random_edge(rng);
        if a == c || b == d || self.has_edge(a, d) || self.has_edge(c, b) {
            return false;
        }
        self.apply_switch((a, b), (c, d));
        true
    }
}

fn mixing_steps(m: u64, factor: f64) -> u64 {
    if m < 2 {
        return 0;
    }
    (factor * m as f64 * (m as f64).ln()).ceil() as u64
}

/// Sample a simple bipartite graph with the given degree sequences.
pub fn sample_bipartite<R: Rng + ?Sized>(
    left_deg: &[u32],
    right_deg: &[u32],
    rng: &mut R,
    cfg: &SamplerConfig,
) -> Result<BipartiteBlock, SampleError> {
    let ls: u64 = left_deg.iter().map(|&d| d as u64).sum();
    let rs: u64 = right_deg.iter().map(|&d| d as u64).sum();
    if ls != rs {
        return Err(SampleError::DegreeSumMismatch { left: ls, right: rs });
    }
    if let Some(&d) = left_deg.iter().find(|&&d| d as usize > right_deg.len()) {
        return Err(SampleError::DegreeTooLarge { degree: d, other: right_deg.len() });
    }
    if let Some(&d) = right_deg.iter().find(|&&d| d as usize > left_deg.len()) {
        return Err(SampleError::DegreeTooLarge { degree: d, other: left_deg.len() });
    }

    // Dense requests are sampled through their complement, which is
    // sparse; complementing is a bijection so uniformity carries over.
    let cells = left_deg.len() as u64 * right_deg.len() as u64;
    if 2 * ls > cells {
        let lc: Vec<u32> = left_deg.iter().map(|&d| right_deg.len() as u32 - d).collect();
        let rc: Vec<u32> = right_deg.iter().map(|&d| left_deg.len() as u32 - d).collect();
        let comp = sample_bipartite(&lc, &rc, rng, cfg)?;
        let mut edges = Vec::with_capacity(ls as usize);
        for a in 0..left_deg.len() as u32 {
            let missing = comp.left_neighbors(a);
            edges.extend((0..right_deg.len() as u32).filter(|b| missing.binary_search(b).is_err()).map(|b| (a, b)));
        }
        return Ok(BipartiteBlock::from_edges(left_deg.len(), right_deg.len(), &edges));
    }

    let mut attempts = 0u64;
    let block = loop {
        if let Some(b) = configuration_attempt(left_deg, right_deg, rng, cfg, &mut attempts) {
            break b;
        }
        if attempts > cfg.repair_attempts {
            return Err(SampleError::RepairFailed { attempts });
        }
    };
    let mut block = block;
    debug_assert!(block.is_simple());

    for _ in 0..mixing_steps(block.edge_count(), cfg.mixing_factor) {
        block.switch_step(rng);
    }
    Ok(block)
}

/// One configuration-model draw followed by switch repair. Gives up
/// (returns `None`) if a surplus edge cannot be switched away quickly.
fn configuration_attempt<R: Rng + ?Sized>(
    left_deg: &[u32],
    right_deg: &[u32],
    rng: &mut R,
    cfg: &SamplerConfig,
    attempts: &mut u64,
) -> Option<BipartiteBlock> {
    let mut right_stubs: Vec<u32> = Vec::new();
    for (b, &d) in right_deg.iter().enumerate() {
        right_stubs.extend(std::iter::repeat(b as u32).take(d as usize));
    }
    right_stubs.shuffle(rng);
    let mut edges = Vec::with_capacity(right_stubs.len());
    let mut it = right_stubs.into_iter();
    for (a, &d) in left_deg.iter().enumerate() {
        for _ in 0..d {
            edges.push((a as u32, it.next().expect("stub counts agree")));
        }
    }
    let mut block = BipartiteBlock::from_edges(left_deg.len(), right_deg.len(), &edges);
    drop(edges);

    // Parallel copies beyond the first, one entry per surplus copy.
    let mut surplus = Vec::new();
    for (a, nbrs) in block.left.iter().enumerate() {
        for w in nbrs.windows(2) {
            if w[0] == w[1] {
                surplus.push((a as u32, w[0]));
            }
        }
    }
    let per_edge = 200 + 4 * block.edge_count();
    for (a, b) in surplus {
        // an earlier repair may already have switched this copy away
        if block.multiplicity(a, b) < 2 {
            continue;
        }
        let mut tries = 0;
        loop {
            *attempts += 1;
            tries += 1;
            if tries > per_edge || *attempts > cfg.repair_attempts {
                return None;
            }
            let (c, d) = block.random_edge(rng);
            if c != a && d != b && !block.has_edge(a, d) && !block.has_edge(c, b) {
                block.apply_switch((a, b), (c, d));
                break;
            }
        }
    }
    Some(block)
}

/// Sample a `(dx, dy)`-biregular bipartite graph on `nx + ny` vertices.
pub fn sample_biregular(nx: usize, ny: usize, dx: u32, dy: u32, seed: u64, cfg: &SamplerConfig) -> Result<BipartiteBlock, SampleError> {
    if nx as u64 * dx as u64 != ny as u64 * dy as u64 {
        return Err(SampleError::Inconsistent { nx, ny, dx, dy });
    }
    let mut rng = rng_from_seed(seed);
    sample_bipartite(&vec![dx; nx], &vec![dy; ny], &mut rng, cfg)
}
