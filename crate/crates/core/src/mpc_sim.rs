//! Sequential simulation of the sparsify-then-cover matching algorithm in
//! the sublinear-memory MPC model, with symbolic round and space
//! accounting. All logarithms are base 2.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;
use thiserror::Error;

use crate::graph::CsrGraph;
use crate::rng::{derive_seed, rng_from_seed, stream_rng, Rng};
use crate::Rational;

#[derive(Debug, Error)]
pub enum MpcError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("iteration {iteration}: oracle set misses sampled edge ({u}, {v})\n{dump}")]
    NotACover { iteration: u32, u: u32, v: u32, dump: String },
    #[error("iteration {iteration}: oracle matching is invalid: {reason}\n{dump}")]
    NotAMatching { iteration: u32, reason: String, dump: String },
    #[error("iteration {iteration}: |M| = {matched} < (c/2)|A| with |A| = {cover}\n{dump}")]
    Certificate { iteration: u32, matched: usize, cover: usize, dump: String },
    #[error("iteration {iteration}: {what}\n{dump}")]
    Invariant { iteration: u32, what: String, dump: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpcConfig {
    /// Per-machine memory is `n^mem_exponent`.
    pub mem_exponent: Rational,
    /// The `ε` in the hypothetical query bound `Q(Δ) = Δ^{(log Δ)^{1−ε}}`.
    pub eps_lca: Rational,
    /// Depth of the hypothetical LCA; the query tree is gathered in
    /// `⌈log D⌉` doubling phases.
    pub lca_depth: u32,
    /// Replaces `log² n` as the switch to the terminal step. Lets small
    /// graphs exercise the sampling branch.
    pub terminal_threshold: Option<f64>,
}

impl MpcConfig {
    pub fn new(mem_exponent: Rational, eps_lca: Rational, lca_depth: u32) -> Result<Self, MpcError> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if mem_exponent <= zero || mem_exponent >= one {
            return Err(MpcError::Config(format!("memory exponent {mem_exponent} must lie in (0, 1)")));
        }
        if eps_lca <= zero || eps_lca >= one {
            return Err(MpcError::Config(format!("eps {eps_lca} must lie in (0, 1)")));
        }
        if lca_depth == 0 {
            return Err(MpcError::Config("LCA depth must be positive".into()));
        }
        Ok(Self { mem_exponent, eps_lca, lca_depth, terminal_threshold: None })
    }

    fn mem(&self) -> f64 {
        *self.mem_exponent.numer() as f64 / *self.mem_exponent.denom() as f64
    }

    fn eps(&self) -> f64 {
        *self.eps_lca.numer() as f64 / *self.eps_lca.denom() as f64
    }

    /// `log Q(x) = (log x)^{2−ε}`, with `Q(x) = 1` for `x ≤ 1`.
    pub fn log_query_budget(&self, x: f64) -> f64 {
        if x <= 1.0 {
            0.0
        } else {
            x.log2().powf(2.0 - self.eps())
        }
    }

    /// `((mem/2)·log n)^{1/(2−ε)}`: the log of `10·p_i·Δ_i`.
    pub fn log_sampled_degree(&self, n: usize) -> f64 {
        (self.mem() / 2.0 * (n as f64).log2()).powf(1.0 / (2.0 - self.eps()))
    }

    pub fn sampling_probability(&self, n: usize, max_degree: usize) -> f64 {
        (self.log_sampled_degree(n).exp2() / (10.0 * max_degree as f64)).min(1.0)
    }

    pub fn terminal_threshold(&self, n: usize) -> f64 {
        self.terminal_threshold.unwrap_or_else(|| log2n(n).powi(2))
    }

    /// Iteration bound from the degree-decay argument:
    /// `log n / ((mem/2)·log n)^{1/(2−ε)} + 1`.
    pub fn iteration_bound(&self, n: usize) -> f64 {
        log2n(n) / self.log_sampled_degree(n) + 1.0
    }
}

fn log2n(n: usize) -> f64 {
    (n.max(2) as f64).log2()
}

/// Rounds charged per sampling iteration beyond the `⌈log D⌉` gathering
/// phases: sampling, running the LCA, deleting, filtering.
pub const ROUNDS_PER_ITERATION: u64 = 4;

/// A vertex-cover LCA together with the matching that certifies it.
pub trait VcOracle: Sync {
    fn name(&self) -> &str;
    /// The fraction `c` of the cover guaranteed to be matched.
    fn constant(&self) -> Rational;
    /// Returns `(A, M)` for the graph with the given edges on `n`
    /// vertices: `A` a vertex cover, `M ⊆ edges` a matching.
    fn cover(&self, n: usize, edges: &[(u32, u32)], rng: &mut Rng) -> (Vec<u32>, Vec<(u32, u32)>);
}

/// Greedy maximal matching in a random edge order; the cover is its
/// endpoints, so `c = 1`.
pub struct GreedyOracle;

impl VcOracle for GreedyOracle {
    fn name(&self) -> &str {
        "greedy-maximal"
    }
    fn constant(&self) -> Rational {
        Rational::from_integer(1)
    }
    fn cover(&self, n: usize, edges: &[(u32, u32)], rng: &mut Rng) -> (Vec<u32>, Vec<(u32, u32)>) {
        let m = random_greedy_matching(n, edges, rng);
        let mut a: Vec<u32> = m.iter().flat_map(|&(u, v)| [u, v]).collect();
        a.sort_unstable();
        (a, m)
    }
}

pub fn random_greedy_matching(n: usize, edges: &[(u32, u32)], rng: &mut Rng) -> Vec<(u32, u32)> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(rng);
    let mut used = vec![false; n];
    let mut m = Vec::new();
    for i in order {
        let (u, v) = edges[i];
        if !used[u as usize] && !used[v as usize] {
            used[u as usize] = true;
            used[v as usize] = true;
            m.push((u.min(v), u.max(v)));
        }
    }
    m.sort_unstable();
    m
}

/// Keeps each edge independently with probability `p`.
pub fn sample_subgraph(edges: &[(u32, u32)], p: f64, rng: &mut Rng) -> Vec<(u32, u32)> {
    if p >= 1.0 {
        return edges.to_vec();
    }
    edges.iter().copied().filter(|_| rng.gen_bool(p.max(0.0))).collect()
}

/// Vertices whose degree in the edge set exceeds `threshold`.
pub fn high_degree_filter(n: usize, edges: &[(u32, u32)], threshold: f64) -> Vec<u32> {
    let deg = degrees(n, edges);
    (0..n as u32).filter(|&v| deg[v as usize] as f64 > threshold).collect()
}

fn degrees(n: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut d = vec![0u32; n];
    for &(u, v) in edges {
        d[u as usize] += 1;
        d[v as usize] += 1;
    }
    d
}

/// `G(n, p)` with `p = avg_degree/(n−1)`, by geometric skipping.
pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> CsrGraph {
    let p = if n > 1 { (avg_degree / (n - 1) as f64).clamp(0.0, 1.0) } else { 0.0 };
    let mut edges = Vec::new();
    if p > 0.0 {
        let mut rng = rng_from_seed(seed);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1i64, -1i64);
        while (v as usize) < n {
            let r: f64 = 1.0 - rng.gen::<f64>();
            w += 1 + if p >= 1.0 { 0 } else { (r.ln() / log_q).floor() as i64 };
            while w >= v && (v as usize) < n {
                w -= v;
                v += 1;
            }
            if (v as usize) < n {
                edges.push((w as u32, v as u32));
            }
        }
    }
    CsrGraph::from_edges(n, &edges)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: u32,
    pub terminal: bool,
    pub residual_vertices: usize,
    pub residual_edges: usize,
    pub max_degree: usize,
    pub p: f64,
    pub sampled_edges: usize,
    pub sampled_max_degree: usize,
    /// `10·p·Δ`: the sampled-degree cap the space bound assumes.
    pub sampled_degree_cap: f64,
    pub cover: usize,
    pub matched: usize,
    /// Edges of `G_i` left after deleting `A ∪ V(M)`.
    pub residual_after_cover: usize,
    pub degree_threshold: f64,
    pub high_degree: usize,
    pub rounds: u64,
    /// `log₂ Q(10·p·Δ)²`
    pub log_space: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpcTrace {
    pub n: usize,
    pub m: usize,
    pub log_base: u32,
    pub oracle: String,
    pub config: MpcConfig,
    pub seed: u64,
    pub iterations: Vec<IterationRecord>,
    pub matching: Vec<(u32, u32)>,
    /// `|⋃ (A_j ∪ V(M_j))|`
    pub touched: usize,
    /// `|⋃ D_j|`
    pub extra_deleted: usize,
    pub total_rounds: u64,
    /// `log₂` of `max(Q², n^mem)` over iterations.
    pub log_peak_space: f64,
    /// `log₂ (n·Q² + m)` for the largest `Q` used.
    pub log_total_space: f64,
    pub iteration_bound: f64,
    /// Sampled graphs whose max degree exceeded `10·p·Δ`.
    pub sampled_degree_excess: u32,
    /// `|M| ≥ (c/6)·|V ∖ D|` (counts isolated vertices, so may fail).
    pub vertex_ratio_holds: bool,
    pub warnings: Vec<String>,
}

fn dump(rec: &IterationRecord) -> String {
    serde_json::to_string(rec).unwrap_or_default()
}

/// Simulates the algorithm on `g`, checking every per-iteration invariant
/// and failing hard on a broken oracle.
pub fn run_algorithm(g: &CsrGraph, cfg: &MpcConfig, oracle: &dyn VcOracle, seed: u64) -> Result<MpcTrace, MpcError> {
    let n = g.n();
    let logn = log2n(n);
    let c = oracle.constant();
    let c_f = *c.numer() as f64 / *c.denom() as f64;
    let mut alive = vec![true; n];
    let mut matched = vec![false; n];
    let mut touched = vec![false; n];
    let mut extra = vec![false; n];
    let mut matching: Vec<(u32, u32)> = Vec::new();
    let mut iterations = Vec::new();
    let mut sampled_degree_excess = 0;
    let mut log_peak = cfg.mem() * logn;
    let mut log_q_max: f64 = 0.0;
    let mut warnings = Vec::new();

    for i in 1u32.. {
        let edges: Vec<(u32, u32)> = g.edges().filter(|&(u, v)| alive[u as usize] && alive[v as usize]).collect();
        if edges.is_empty() {
            break;
        }
        let deg = degrees(n, &edges);
        let delta = *deg.iter().max().unwrap() as usize;
        let residual_vertices = deg.iter().filter(|&&d| d > 0).count();
        let mut rng = stream_rng(seed, i as u64);
        let mut rec = IterationRecord {
            iteration: i,
            terminal: false,
            residual_vertices,
            residual_edges: edges.len(),
            max_degree: delta,
            p: 1.0,
            sampled_edges: 0,
            sampled_max_degree: 0,
            sampled_degree_cap: 0.0,
            cover: 0,
            matched: 0,
            residual_after_cover: 0,
            degree_threshold: f64::INFINITY,
            high_degree: 0,
            rounds: 0,
            log_space: 0.0,
        };

        if delta as f64 <= cfg.terminal_threshold(n) {
            let m = random_greedy_matching(n, &edges, &mut rng);
            let loglog = logn.log2().max(0.0).ceil();
            rec.terminal = true;
            rec.matched = m.len();
            rec.cover = 2 * m.len();
            rec.rounds = (delta as f64).log2().ceil().max(0.0) as u64 + (loglog * loglog) as u64;
            for &(u, v) in &m {
                for w in [u, v] {
                    matched[w as usize] = true;
                    touched[w as usize] = true;
                }
            }
            let maximal = edges.iter().all(|&(u, v)| matched[u as usize] || matched[v as usize]);
            matching.extend(m);
            iterations.push(rec.clone());
            if !maximal {
                return Err(MpcError::Invariant { iteration: i, what: "terminal matching is not maximal".into(), dump: dump(&rec) });
            }
            break;
        }

        let p = cfg.sampling_probability(n, delta);
        let h = sample_subgraph(&edges, p, &mut rng);
        let hdeg = degrees(n, &h);
        rec.p = p;
        rec.sampled_edges = h.len();
        rec.sampled_max_degree = hdeg.iter().copied().max().unwrap_or(0) as usize;
        rec.sampled_degree_cap = 10.0 * p * delta as f64;
        if rec.sampled_max_degree as f64 > rec.sampled_degree_cap {
            sampled_degree_excess += 1;
        }
        rec.log_space = 2.0 * cfg.log_query_budget(rec.sampled_degree_cap);
        log_q_max = log_q_max.max(rec.log_space / 2.0);
        log_peak = log_peak.max(rec.log_space);
        if rec.log_space > cfg.mem() * logn * (1.0 + 1e-9) {
            return Err(MpcError::Invariant {
                iteration: i,
                what: format!("space 2^{} exceeds n^mem = 2^{}", rec.log_space, cfg.mem() * logn),
                dump: dump(&rec),
            });
        }

        let (a, m) = oracle.cover(n, &h, &mut rng);
        rec.cover = a.len();
        rec.matched = m.len();
        let mut in_a = vec![false; n];
        for &v in &a {
            in_a[v as usize] = true;
        }
        if let Some(&(u, v)) = h.iter().find(|&&(u, v)| !in_a[u as usize] && !in_a[v as usize]) {
            return Err(MpcError::NotACover { iteration: i, u, v, dump: dump(&rec) });
        }
        let mut h_sorted: Vec<(u32, u32)> = h.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        h_sorted.sort_unstable();
        let mut used = vec![false; n];
        for &(u, v) in &m {
            if h_sorted.binary_search(&(u.min(v), u.max(v))).is_err() {
                return Err(MpcError::NotAMatching { iteration: i, reason: format!("({u}, {v}) is not a sampled edge"), dump: dump(&rec) });
            }
            if used[u as usize] || used[v as usize] || u == v {
                return Err(MpcError::NotAMatching { iteration: i, reason: format!("({u}, {v}) reuses a vertex"), dump: dump(&rec) });
            }
            used[u as usize] = true;
            used[v as usize] = true;
        }
        // |M| ≥ (c/2)|A|, in exact arithmetic
        if Rational::from_integer(2 * m.len() as i64) < c * Rational::from_integer(a.len() as i64) {
            return Err(MpcError::Certificate { iteration: i, matched: m.len(), cover: a.len(), dump: dump(&rec) });
        }

        for v in a.iter().copied().chain(m.iter().flat_map(|&(u, v)| [u, v])) {
            alive[v as usize] = false;
            touched[v as usize] = true;
        }
        for &(u, v) in &m {
            matched[u as usize] = true;
            matched[v as usize] = true;
        }
        matching.extend(m);

        let rest: Vec<(u32, u32)> = edges.iter().copied().filter(|&(u, v)| alive[u as usize] && alive[v as usize]).collect();
        rec.residual_after_cover = rest.len();
        rec.degree_threshold = logn / p;
        let high = high_degree_filter(n, &rest, rec.degree_threshold);
        rec.high_degree = high.len();
        if high.len() as f64 > 2.0 * rest.len() as f64 / rec.degree_threshold + 1e-9 {
            return Err(MpcError::Invariant { iteration: i, what: "high-degree set exceeds the handshake bound".into(), dump: dump(&rec) });
        }
        for &v in &high {
            alive[v as usize] = false;
            extra[v as usize] = true;
        }
        let after: Vec<(u32, u32)> = rest.iter().copied().filter(|&(u, v)| alive[u as usize] && alive[v as usize]).collect();
        let next_max = degrees(n, &after).into_iter().max().unwrap_or(0);
        if next_max as f64 > rec.degree_threshold {
            return Err(MpcError::Invariant { iteration: i, what: format!("next max degree {next_max} above the cap"), dump: dump(&rec) });
        }
        rec.rounds = (cfg.lca_depth as f64).log2().ceil() as u64 + ROUNDS_PER_ITERATION;
        iterations.push(rec);
    }

    let touched_count = touched.iter().filter(|&&t| t).count();
    let extra_count = extra.iter().filter(|&&t| t).count();
    // |M_j| / |A_j ∪ V(M_j)| ≥ c/6 per iteration, summed
    if (matching.len() as f64) < c_f / 6.0 * touched_count as f64 - 1e-9 {
        return Err(MpcError::Invariant {
            iteration: iterations.len() as u32,
            what: format!("|M| = {} below (c/6)·{touched_count}", matching.len()),
            dump: String::new(),
        });
    }
    if extra_count > 0 {
        warnings.push(format!("{extra_count} high-degree vertices deleted"));
    }
    let total_rounds = iterations.iter().map(|r| r.rounds).sum();
    Ok(MpcTrace {
        n,
        m: g.m(),
        log_base: 2,
        oracle: oracle.name().to_string(),
        config: cfg.clone(),
        seed,
        vertex_ratio_holds: matching.len() as f64 >= c_f / 6.0 * (n - extra_count) as f64,
        iterations,
        touched: touched_count,
        extra_deleted: extra_count,
        total_rounds,
        log_peak_space: log_peak,
        log_total_space: (n as f64 * (2.0 * log_q_max).exp2() + g.m() as f64).log2(),
        iteration_bound: cfg.iteration_bound(n),
        sampled_degree_excess,
        matching,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub p: f64,
    pub n: usize,
    pub bound: f64,
    pub residual: Vec<usize>,
    pub max: usize,
    pub within: usize,
}

/// Samples `H` with edge probability `p`, covers it with the endpoints of
/// a maximal matching, and counts the edges of `g` the cover misses.
pub fn residual_after_sampled_cover(g: &CsrGraph, p: f64, trials: usize, seed: u64) -> ResidualReport {
    use rayon::prelude::*;
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let n = g.n();
    let residual: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(derive_seed(seed, 85), t as u64);
            let h = sample_subgraph(&edges, p, &mut rng);
            let (a, _) = GreedyOracle.cover(n, &h, &mut rng);
            let mut in_a = vec![false; n];
            a.iter().for_each(|&v| in_a[v as usize] = true);
            edges.iter().filter(|&&(u, v)| !in_a[u as usize] && !in_a[v as usize]).count()
        })
        .collect();
    let bound = n as f64 / p;
    ResidualReport {
        p,
        n,
        bound,
        max: residual.iter().copied().max().unwrap_or(0),
        within: residual.iter().filter(|&&r| r as f64 <= bound).count(),
        residual,
    }
}
