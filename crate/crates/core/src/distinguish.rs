//! Vertex-level experiments: can a fixed plan tell a significant edge
//! from a misleading one by the degrees it sees?

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::SamplerConfig;
use crate::blueprint::Blueprint;
use crate::instance::{EdgeClass, InstanceError, InstanceGraph, LineGraph};
use crate::lca_engine::{execute_plan, execute_random_neighbor, first_cycle_position, EngineError, ExecOptions, Prompt, PromptKind, QueryPlan};
use crate::graph::Adjacency;
use crate::matching::{matching_size, max_matching_size};
use crate::rng::{derive_seed, stream_rng};
use crate::rules::DecisionRule;
use crate::stats::{histogram, mean_sd, total_variation, wilson_interval, Z95};

#[derive(Debug, Error)]
pub enum DistinguishError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("instance has no {0:?} edges")]
    NoPrompts(EdgeClass),
    #[error("{0}")]
    Invalid(String),
}

/// Where the graphs come from.
#[derive(Clone, Copy)]
pub enum InstanceSource<'a> {
    /// Reuse these instances, trial `t` on instance `t mod k`.
    Fixed(&'a [InstanceGraph]),
    /// A fresh instance for every `batch` trials.
    Fresh { sampler: SamplerConfig, batch: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Executor {
    /// Follow the plan's neighbour indices.
    Positional,
    /// Keep the plan's shape but draw each neighbour index uniformly.
    RandomNeighbor,
}

/// What part of the degree sequence is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    Full,
    /// Cut the sequence at the first degree `≥ threshold`, which is
    /// replaced by a marker.
    AbsorptionPrefix { threshold: u32 },
}

impl Statistic {
    pub fn reduce(&self, degrees: &[Option<u32>]) -> Vec<Option<u32>> {
        match *self {
            Statistic::Full => degrees.to_vec(),
            Statistic::AbsorptionPrefix { threshold } => {
                let mut out = Vec::new();
                for &d in degrees {
                    if matches!(d, Some(x) if x >= threshold) {
                        out.push(Some(u32::MAX));
                        break;
                    }
                    out.push(d);
                }
                out
            }
        }
    }
}

/// A scalar summary of a degree sequence, used as a classifier input.
pub trait SequenceFeature: Sync + Send {
    fn name(&self) -> String;
    fn value(&self, degrees: &[Option<u32>], parents: &[u32]) -> i64;
}

/// Smallest degree seen.
pub struct MinDegree;

impl SequenceFeature for MinDegree {
    fn name(&self) -> String {
        "min-degree".into()
    }
    fn value(&self, degrees: &[Option<u32>], _: &[u32]) -> i64 {
        degrees.iter().flatten().min().map_or(-1, |&d| d as i64)
    }
}

/// Number of positions whose degree differs from the prompt's but is less
/// than twice it: on these instances, leaves.
pub struct LeafVisits;

impl SequenceFeature for LeafVisits {
    fn name(&self) -> String {
        "leaf-visits".into()
    }
    fn value(&self, degrees: &[Option<u32>], _: &[u32]) -> i64 {
        let Some(Some(d0)) = degrees.first() else { return 0 };
        degrees.iter().flatten().filter(|&&d| d != *d0 && d < 2 * d0).count() as i64
    }
}

/// Among the light children of position 2 (degree at most half the largest
/// seen, which rules out dummy vertices whatever their rounding), count
/// those with a child of the smallest degree seen.
pub struct LightGrandchildren;

impl SequenceFeature for LightGrandchildren {
    fn name(&self) -> String {
        "light-grandchildren".into()
    }
    fn value(&self, degrees: &[Option<u32>], parents: &[u32]) -> i64 {
        let (Some(&lo), Some(&hi)) = (degrees.iter().flatten().min(), degrees.iter().flatten().max()) else { return 0 };
        let mut has_light_child = HashSet::new();
        for (i, &p) in parents.iter().enumerate() {
            if degrees[i] == Some(lo) && p > 0 {
                has_light_child.insert(p);
            }
        }
        (0..parents.len())
            .filter(|&i| parents[i] == 2 && matches!(degrees[i], Some(d) if 2 * d <= hi) && has_light_child.contains(&(i as u32 + 1)))
            .count() as i64
    }
}

pub fn default_features() -> Vec<Box<dyn SequenceFeature>> {
    vec![Box::new(MinDegree), Box::new(LeafVisits), Box::new(LightGrandchildren)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequenceSample {
    pub class: EdgeClass,
    pub trial: u64,
    pub instance: u64,
    pub prompt: (u32, u32),
    /// Hash of the reduced statistic.
    pub key: u64,
    pub features: Vec<i64>,
    /// The raw sequence, kept for short plans only.
    pub degrees: Option<Vec<Option<u32>>>,
    pub tree: Option<bool>,
}

#[derive(Clone, Copy)]
pub struct SampleConfig {
    pub trials_per_class: u64,
    pub seed: u64,
    pub executor: Executor,
    pub statistic: Statistic,
    pub check_tree: bool,
    /// Keep raw sequences when the plan has at most this many positions.
    pub keep_limit: usize,
}

fn sequence_key(seq: &[Option<u32>]) -> u64 {
    let mut h = DefaultHasher::new();
    seq.hash(&mut h);
    h.finish()
}

fn one_sample(
    inst: &InstanceGraph,
    class: EdgeClass,
    prompts: &[(u32, u32)],
    plan: &QueryPlan,
    cfg: &SampleConfig,
    features: &[Box<dyn SequenceFeature>],
    trial: u64,
    instance: u64,
) -> Result<DegreeSequenceSample, DistinguishError> {
    let mut rng = stream_rng(derive_seed(cfg.seed, class as u64 + 1), trial);
    let &(u, v) = prompts.choose(&mut rng).ok_or(DistinguishError::NoPrompts(class))?;
    let prompt = match plan.kind() {
        PromptKind::Edge => Prompt::Edge(u, v),
        PromptKind::Vertex => Prompt::Vertex(v),
    };
    let expl = match cfg.executor {
        Executor::Positional => execute_plan(inst.graph(), prompt, plan, ExecOptions::default())?,
        Executor::RandomNeighbor => execute_random_neighbor(inst.graph(), prompt, plan, &mut rng, ExecOptions::default())?,
    };
    let reduced = cfg.statistic.reduce(expl.degrees());
    let feats = features.iter().map(|f| f.value(expl.degrees(), expl.parents())).collect();
    Ok(DegreeSequenceSample {
        class,
        trial,
        instance,
        prompt: (u, v),
        key: sequence_key(&reduced),
        features: feats,
        degrees: (expl.len() <= cfg.keep_limit).then(|| expl.degrees().to_vec()),
        tree: cfg.check_tree.then(|| first_cycle_position(inst.graph(), &expl).is_none()),
    })
}

/// Degree sequences for both classes, significant first, each in trial
/// order.
pub fn collect_samples(
    bp: &Blueprint,
    source: InstanceSource<'_>,
    plan: &QueryPlan,
    cfg: &SampleConfig,
    features: &[Box<dyn SequenceFeature>],
) -> Result<Vec<DegreeSequenceSample>, DistinguishError> {
    let classes = [EdgeClass::Significant, EdgeClass::Misleading];
    let t = cfg.trials_per_class;
    match source {
        InstanceSource::Fixed(instances) => {
            if instances.is_empty() {
                return Err(DistinguishError::Invalid("no instances given".into()));
            }
            let prompts: Vec<[Vec<(u32, u32)>; 2]> = instances
                .iter()
                .map(|i| classes.map(|c| i.evaluation().class_edges(bp, c)))
                .collect();
            let mut out = Vec::with_capacity(2 * t as usize);
            for (ci, &class) in classes.iter().enumerate() {
                let part: Vec<_> = (0..t)
                    .into_par_iter()
                    .map(|trial| {
                        let k = (trial % instances.len() as u64) as usize;
                        one_sample(&instances[k], class, &prompts[k][ci], plan, cfg, features, trial, k as u64)
                    })
                    .collect::<Result<_, _>>()?;
                out.extend(part);
            }
            Ok(out)
        }
        InstanceSource::Fresh { sampler, batch } => {
            let batch = batch.max(1);
            let batches = t.div_ceil(batch);
            let per_batch: Vec<Vec<DegreeSequenceSample>> = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let inst = InstanceGraph::sample(bp, derive_seed(cfg.seed, (1 << 40) | b), &sampler)?;
                    let prompts = classes.map(|c| inst.evaluation().class_edges(bp, c));
                    let mut v = Vec::new();
                    for (ci, &class) in classes.iter().enumerate() {
                        for trial in b * batch..((b + 1) * batch).min(t) {
                            v.push(one_sample(&inst, class, &prompts[ci], plan, cfg, features, trial, b)?);
                        }
                    }
                    Ok::<_, DistinguishError>(v)
                })
                .collect::<Result<_, _>>()?;
            let mut out: Vec<DegreeSequenceSample> = per_batch.into_iter().flatten().collect();
            out.sort_by_key(|s| (s.class != EdgeClass::Significant, s.trial));
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvEstimate {
    /// Plug-in TV over the joint empirical support.
    pub raw: f64,
    /// Mean plug-in TV after shuffling class labels: the bias floor.
    pub null_mean: f64,
    pub null_sd: f64,
    /// `max(0, raw − null_mean)`
    pub debiased: f64,
    pub bootstrap_sd: f64,
    pub ci95: (f64, f64),
    /// Largest single-position TV, when sequences were kept.
    pub max_marginal: Option<f64>,
    pub support: usize,
}

fn tv_from_ids(ids0: &[u32], ids1: &[u32], support: usize) -> f64 {
    let mut c0 = vec![0u32; support];
    let mut c1 = vec![0u32; support];
    ids0.iter().for_each(|&i| c0[i as usize] += 1);
    ids1.iter().for_each(|&i| c1[i as usize] += 1);
    let (n0, n1) = (ids0.len() as f64, ids1.len() as f64);
    c0.iter().zip(&c1).map(|(&a, &b)| (a as f64 / n0 - b as f64 / n1).abs()).sum::<f64>() / 2.0
}

pub fn estimate_tv(keys0: &[u64], keys1: &[u64], bootstrap: usize, permutations: usize, seed: u64) -> TvEstimate {
    let mut index: HashMap<u64, u32> = HashMap::new();
    let mut intern = |k: u64| {
        let next = index.len() as u32;
        *index.entry(k).or_insert(next)
    };
    let ids0: Vec<u32> = keys0.iter().map(|&k| intern(k)).collect();
    let ids1: Vec<u32> = keys1.iter().map(|&k| intern(k)).collect();
    let support = index.len();
    let raw = tv_from_ids(&ids0, &ids1, support);

    let nulls: Vec<f64> = (0..permutations)
        .into_par_iter()
        .map(|p| {
            let mut rng = stream_rng(derive_seed(seed, 1), p as u64);
            let mut pool: Vec<u32> = ids0.iter().chain(&ids1).copied().collect();
            pool.shuffle(&mut rng);
            let (a, b) = pool.split_at(ids0.len());
            tv_from_ids(a, b, support)
        })
        .collect();
    let (null_mean, null_sd) = if nulls.is_empty() { (0.0, 0.0) } else { mean_sd(&nulls) };

    let boots: Vec<f64> = (0..bootstrap)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(derive_seed(seed, 2), b as u64);
            let a: Vec<u32> = (0..ids0.len()).map(|_| ids0[rng.gen_range(0..ids0.len())]).collect();
            let c: Vec<u32> = (0..ids1.len()).map(|_| ids1[rng.gen_range(0..ids1.len())]).collect();
            tv_from_ids(&a, &c, support)
        })
        .collect();
    let bootstrap_sd = if boots.len() > 1 { mean_sd(&boots).1 } else { 0.0 };
    let debiased = (raw - null_mean).max(0.0);
    TvEstimate {
        raw,
        null_mean,
        null_sd,
        debiased,
        bootstrap_sd,
        ci95: ((debiased - Z95 * bootstrap_sd).max(0.0), (debiased + Z95 * bootstrap_sd).min(1.0)),
        max_marginal: None,
        support,
    }
}

/// Largest TV between the per-position marginals.
pub fn max_marginal_tv(seqs0: &[&[Option<u32>]], seqs1: &[&[Option<u32>]]) -> f64 {
    let len = seqs0.iter().chain(seqs1).map(|s| s.len()).max().unwrap_or(0);
    (0..len)
        .map(|j| {
            let h0 = histogram(seqs0.iter().map(|s| s.get(j).copied().flatten()));
            let h1 = histogram(seqs1.iter().map(|s| s.get(j).copied().flatten()));
            total_variation(&h0, &h1)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierResult {
    pub name: String,
    pub accuracy: f64,
    pub ci95: (f64, f64),
    pub test_size: u64,
}

/// Lookup-table classifier: learn the majority class per feature value on
/// even trials, score on odd trials. Unseen values are called significant.
pub fn holdout_accuracy(name: &str, values0: &[i64], values1: &[i64]) -> ClassifierResult {
    let mut table: BTreeMap<i64, (u64, u64)> = BTreeMap::new();
    for &v in values0.iter().step_by(2) {
        table.entry(v).or_default().0 += 1;
    }
    for &v in values1.iter().step_by(2) {
        table.entry(v).or_default().1 += 1;
    }
    let predict_significant = |v: i64| table.get(&v).is_none_or(|&(a, b)| a >= b);
    let mut correct = 0u64;
    let mut total = 0u64;
    for &v in values0.iter().skip(1).step_by(2) {
        correct += u64::from(predict_significant(v));
        total += 1;
    }
    for &v in values1.iter().skip(1).step_by(2) {
        correct += u64::from(!predict_significant(v));
        total += 1;
    }
    ClassifierResult {
        name: name.to_string(),
        accuracy: correct as f64 / total.max(1) as f64,
        ci95: wilson_interval(correct, total, Z95),
        test_size: total,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinguishReport {
    pub plan: String,
    pub trials_per_class: u64,
    pub statistic: Statistic,
    pub tv: TvEstimate,
    /// `(1 + TV)/2` from the debiased estimate and its upper bound.
    pub plugin_accuracy: f64,
    pub plugin_accuracy_upper: f64,
    pub classifiers: Vec<ClassifierResult>,
    /// Explorations whose induced subgraph was not a tree, out of checked.
    pub non_tree: Option<(u64, u64)>,
}

pub fn analyse(
    samples: &[DegreeSequenceSample],
    features: &[Box<dyn SequenceFeature>],
    plan_descriptor: &str,
    statistic: Statistic,
    bootstrap: usize,
    permutations: usize,
    seed: u64,
) -> DistinguishReport {
    let (s0, s1): (Vec<_>, Vec<_>) = samples.iter().partition(|s| s.class == EdgeClass::Significant);
    let k0: Vec<u64> = s0.iter().map(|s| s.key).collect();
    let k1: Vec<u64> = s1.iter().map(|s| s.key).collect();
    let mut tv = estimate_tv(&k0, &k1, bootstrap, permutations, seed);
    if s0.iter().chain(&s1).all(|s| s.degrees.is_some()) {
        let q0: Vec<&[Option<u32>]> = s0.iter().map(|s| s.degrees.as_deref().unwrap()).collect();
        let q1: Vec<&[Option<u32>]> = s1.iter().map(|s| s.degrees.as_deref().unwrap()).collect();
        tv.max_marginal = Some(max_marginal_tv(&q0, &q1));
    }
    let mut classifiers = vec![holdout_accuracy(
        "plug-in",
        &k0.iter().map(|&k| k as i64).collect::<Vec<_>>(),
        &k1.iter().map(|&k| k as i64).collect::<Vec<_>>(),
    )];
    for (i, f) in features.iter().enumerate() {
        let v0: Vec<i64> = s0.iter().map(|s| s.features[i]).collect();
        let v1: Vec<i64> = s1.iter().map(|s| s.features[i]).collect();
        classifiers.push(holdout_accuracy(&f.name(), &v0, &v1));
    }
    let checked: Vec<bool> = samples.iter().filter_map(|s| s.tree).collect();
    DistinguishReport {
        plan: plan_descriptor.to_string(),
        trials_per_class: s0.len() as u64,
        statistic,
        plugin_accuracy: (1.0 + tv.debiased) / 2.0,
        plugin_accuracy_upper: (1.0 + tv.ci95.1) / 2.0,
        tv,
        classifiers,
        non_tree: (!checked.is_empty()).then(|| (checked.iter().filter(|&&t| !t).count() as u64, checked.len() as u64)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleRatePoint {
    pub n0: u64,
    pub trials: u64,
    pub non_tree: u64,
    pub rate: f64,
    pub ci95: (f64, f64),
    /// Position at which the first cycle closed, for non-tree explorations.
    pub first_cycle_positions: BTreeMap<usize, u64>,
}

/// Fraction of explorations from significant prompts whose induced
/// subgraph is not a tree.
pub fn cycle_rate(
    bp: &Blueprint,
    instances: &[InstanceGraph],
    plan: &QueryPlan,
    trials: u64,
    seed: u64,
    executor: Executor,
) -> Result<CycleRatePoint, DistinguishError> {
    let prompts: Vec<Vec<(u32, u32)>> = instances.iter().map(|i| i.evaluation().class_edges(bp, EdgeClass::Significant)).collect();
    let firsts: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let k = (t % instances.len() as u64) as usize;
            let mut rng = stream_rng(seed, t);
            let &(u, v) = prompts[k].choose(&mut rng).ok_or(DistinguishError::NoPrompts(EdgeClass::Significant))?;
            let prompt = match plan.kind() {
                PromptKind::Edge => Prompt::Edge(u, v),
                PromptKind::Vertex => Prompt::Vertex(v),
            };
            let g = instances[k].graph();
            let e = match executor {
                Executor::Positional => execute_plan(g, prompt, plan, ExecOptions::default())?,
                Executor::RandomNeighbor => execute_random_neighbor(g, prompt, plan, &mut rng, ExecOptions::default())?,
            };
            Ok(first_cycle_position(g, &e))
        })
        .collect::<Result<_, DistinguishError>>()?;
    let non_tree = firsts.iter().filter(|f| f.is_some()).count() as u64;
    Ok(CycleRatePoint {
        n0: bp.params().n0,
        trials,
        non_tree,
        rate: non_tree as f64 / trials.max(1) as f64,
        ci95: wilson_interval(non_tree, trials, Z95),
        first_cycle_positions: histogram(firsts.into_iter().flatten()),
    })
}

/// Up to `k` distinct edges between the root-level set (`C0` of either
/// tree) and the next level (`C1` of the same tree), as `(u ∈ C0, v ∈ C1)`.
pub fn cover_pairs(bp: &Blueprint, inst: &InstanceGraph, k: usize, seed: u64) -> Vec<(u32, u32)> {
    let ev = inst.evaluation();
    let tree = bp.tree();
    let mut edges = Vec::new();
    for copy in 0..2u8 {
        let (s0, s1) = (bp.cluster(copy, tree.root()), bp.cluster(copy, tree.base_child()));
        for u in ev.vertices_in(s0) {
            for &v in inst.graph().neighbors(u) {
                if ev.cluster_of(v) == s1 {
                    edges.push((u, v));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.shuffle(&mut stream_rng(seed, 0xc0));
    edges.truncate(k);
    edges
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEstimate {
    pub target: (u32, u32),
    pub included: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci95: (f64, f64),
}

/// Inclusion frequency of each target over fresh ids and neighbour
/// orders of one fixed instance. Vertex targets use the second entry.
pub fn estimate_output_probability<R: DecisionRule + ?Sized>(
    rule: &R,
    inst: &InstanceGraph,
    targets: &[(u32, u32)],
    trials: u64,
    seed: u64,
) -> Result<Vec<OutputEstimate>, DistinguishError> {
    let plan = rule.plan(inst.graph().max_degree() as u32)?;
    let opts = ExecOptions { reveal_ids: rule.reveal_ids() };
    let per_trial: Vec<Vec<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (g, map) = inst.relabel_with_map(derive_seed(seed, t));
            targets
                .iter()
                .map(|&(u, v)| {
                    let prompt = match rule.kind() {
                        PromptKind::Edge => Prompt::Edge(map[u as usize], map[v as usize]),
                        PromptKind::Vertex => Prompt::Vertex(map[v as usize]),
                    };
                    Ok(rule.decide(&execute_plan(g.graph(), prompt, &plan, opts)?)?)
                })
                .collect::<Result<Vec<bool>, DistinguishError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(targets
        .iter()
        .enumerate()
        .map(|(i, &target)| {
            let included = per_trial.iter().filter(|row| row[i]).count() as u64;
            OutputEstimate {
                target,
                included,
                trials,
                estimate: included as f64 / trials.max(1) as f64,
                ci95: wilson_interval(included, trials, Z95),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MisReport {
    pub report: DistinguishReport,
    /// Endpoint degrees (in `G`) of the prompted line-graph vertex, per
    /// class, as a histogram keyed `"low-high"`.
    pub endpoint_degrees: BTreeMap<String, BTreeMap<String, u64>>,
    pub greedy_matching: usize,
    pub maximum_matching: usize,
    pub greedy_is_maximal: bool,
}

/// Largest line graph `mis_experiment` will build.
pub const LINE_GRAPH_EDGE_LIMIT: u64 = 50_000_000;

/// The distinguishing experiment on `L(G)`: prompts are line-graph
/// vertices standing for significant or misleading edges.
pub fn mis_experiment(
    bp: &Blueprint,
    inst: &InstanceGraph,
    plan: &QueryPlan,
    cfg: &SampleConfig,
    bootstrap: usize,
    permutations: usize,
) -> Result<MisReport, DistinguishError> {
    if plan.kind() != PromptKind::Vertex {
        return Err(DistinguishError::Invalid("line-graph prompts are vertices".into()));
    }
    let g = inst.graph();
    let line_edges: u64 = (0..g.n() as u32).map(|v| (g.neighbors(v).len() as u64).pow(2) / 2).sum();
    if line_edges > LINE_GRAPH_EDGE_LIMIT {
        return Err(DistinguishError::Invalid(format!("line graph would have ~{line_edges} edges")));
    }
    let lg = LineGraph::build(g, derive_seed(cfg.seed, 7));
    let ev = inst.evaluation();
    let line_index: HashMap<(u32, u32), u32> = (0..lg.graph().n() as u32).map(|x| (lg.endpoints(x), x)).collect();
    let mut endpoint_degrees = BTreeMap::new();
    let mut samples = Vec::new();
    let features = default_features();
    for class in [EdgeClass::Significant, EdgeClass::Misleading] {
        let xs: Vec<u32> = ev
            .class_edges(bp, class)
            .iter()
            .map(|&(u, v)| line_index[&(u.min(v), u.max(v))])
            .collect();
        let mut hist = BTreeMap::new();
        for t in 0..cfg.trials_per_class {
            let mut rng = stream_rng(derive_seed(cfg.seed, class as u64 + 1), t);
            let &x = xs.choose(&mut rng).ok_or(DistinguishError::NoPrompts(class))?;
            let (a, b) = lg.endpoints(x);
            let (da, db) = (g.neighbors(a).len() as u32, g.neighbors(b).len() as u32);
            *hist.entry(format!("{}-{}", da.min(db), da.max(db))).or_insert(0) += 1;
            let e = match cfg.executor {
                Executor::Positional => execute_plan(lg.graph(), Prompt::Vertex(x), plan, ExecOptions::default())?,
                Executor::RandomNeighbor => execute_random_neighbor(lg.graph(), Prompt::Vertex(x), plan, &mut rng, ExecOptions::default())?,
            };
            let reduced = cfg.statistic.reduce(e.degrees());
            samples.push(DegreeSequenceSample {
                class,
                trial: t,
                instance: 0,
                prompt: (a, b),
                key: sequence_key(&reduced),
                features: features.iter().map(|f| f.value(e.degrees(), e.parents())).collect(),
                degrees: (e.len() <= cfg.keep_limit).then(|| e.degrees().to_vec()),
                tree: None,
            });
        }
        endpoint_degrees.insert(format!("{class:?}").to_lowercase(), hist);
    }
    let report = analyse(&samples, &features, "line-graph", cfg.statistic, bootstrap, permutations, cfg.seed);

    // A greedy independent set of L(G) is a maximal matching of G.
    let mut chosen = vec![false; lg.graph().n()];
    let mut blocked = vec![false; lg.graph().n()];
    for x in 0..lg.graph().n() as u32 {
        if !blocked[x as usize] {
            chosen[x as usize] = true;
            for &y in lg.graph().neighbors(x) {
                blocked[y as usize] = true;
            }
        }
    }
    let mut mate = vec![u32::MAX; g.n()];
    for (x, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
        let (a, b) = lg.endpoints(x as u32);
        mate[a as usize] = b;
        mate[b as usize] = a;
    }
    let greedy_is_maximal = g.edges().all(|(u, v)| mate[u as usize] != u32::MAX || mate[v as usize] != u32::MAX);
    Ok(MisReport {
        report,
        endpoint_degrees,
        greedy_matching: matching_size(&mate),
        maximum_matching: max_matching_size(g),
        greedy_is_maximal,
    })
}
