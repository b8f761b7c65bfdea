use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use lcaforge_core::bipartite::SamplerConfig;
use lcaforge_core::blueprint::{min_feasible_n0, parse_rational, BlueprintError};
use lcaforge_core::coupling::{estimate_failure_probability, CouplingConfig, WalkStatus};
use lcaforge_core::coupling_dp::exact_coupled_walk;
use lcaforge_core::distinguish::{
    cover_pairs,
    analyse, collect_samples, cycle_rate, default_features, estimate_output_probability, mis_experiment, Executor, InstanceSource,
    SampleConfig, Statistic,
};
use lcaforge_core::graph::{Adjacency, CsrGraph};
use lcaforge_core::graph_io::{edge_list_json, load_instance, save_instance};
use lcaforge_core::instance::InstanceGraph;
use lcaforge_core::lca_engine::{ball_plan, execute_plan, execute_random_neighbor, walk_plan, ExecOptions, Prompt, PromptKind, QueryPlan, DEFAULT_BUDGET};
use lcaforge_core::matching::max_matching_size;
use lcaforge_core::mpc_sim::{erdos_renyi, residual_after_sampled_cover, run_algorithm, GreedyOracle, MpcConfig};
use lcaforge_core::rng::{derive_seed, stream_rng};
use lcaforge_core::rules::{DecisionRule, DegreeDominance, IncludeAll, LocalMinimumExclusion};
use lcaforge_core::verify::{critical_subsequence_sweep, verify_all, Mutation};
use lcaforge_core::{Blueprint, ClusterId, ClusterTree, LabelExp, Params, Regime};

use crate::args::{BlueprintArgs, Cli, Command, ExecutorArg, Format, KindArg, PlanArgs, RegimeArg, RuleArg, SamplerArgs, StatisticArg};
use crate::output::{emit, Table};
use crate::{usage, CliError};

/// Instruction budget from `LCAFORGE_BUDGET`, else the engine default.
pub fn budget() -> Result<u64> {
    match std::env::var("LCAFORGE_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("LCAFORGE_BUDGET = {v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn seed(cli: &Cli) -> Result<u64> {
    cli.seed.ok_or_else(|| usage("this command is stochastic: pass --seed"))
}

fn blueprint_error(e: BlueprintError) -> anyhow::Error {
    match e {
        BlueprintError::InvalidParameter(_) | BlueprintError::Regime(_) | BlueprintError::Infeasible(_) | BlueprintError::Tree(_) => usage(e),
        other => other.into(),
    }
}

impl BlueprintArgs {
    pub fn params(&self) -> Result<Params> {
        let c = parse_rational(&self.c).map_err(blueprint_error)?;
        let n0 = match self.n0 {
            Some(n) => n,
            None => min_feasible_n0(c, self.r, self.delta).map_err(blueprint_error)?,
        };
        let regime = match self.regime {
            RegimeArg::Desk => Regime::Desk,
            RegimeArg::Asymptotic => Regime::Asymptotic,
        };
        let p = Params::derive(c, self.r, self.delta, n0, regime).map_err(blueprint_error)?;
        match self.kappa {
            Some(k) => p.with_kappa(k).map_err(blueprint_error),
            None => Ok(p),
        }
    }

    pub fn build(&self) -> Result<Blueprint> {
        Blueprint::build(self.params()?, !self.no_main_matching).map_err(blueprint_error)
    }
}

impl SamplerArgs {
    fn config(&self) -> Result<SamplerConfig> {
        if !(self.mixing_factor >= 0.0) {
            return Err(usage("--mixing-factor must be non-negative"));
        }
        Ok(SamplerConfig { mixing_factor: self.mixing_factor, ..SamplerConfig::default() })
    }
}

fn kind(k: KindArg) -> PromptKind {
    match k {
        KindArg::Edge => PromptKind::Edge,
        KindArg::Vertex => PromptKind::Vertex,
    }
}

fn executor(e: ExecutorArg) -> Executor {
    match e {
        ExecutorArg::Positional => Executor::Positional,
        ExecutorArg::RandomNeighbor => Executor::RandomNeighbor,
    }
}

/// `walk:L`, `ball:R`, `ball:R:W` (W defaults to `default_width`) or
/// `file:PATH`.
pub fn parse_plan(spec: &str, kind: PromptKind, default_width: u32, budget: u64) -> Result<QueryPlan> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    let num = |s: &str| s.parse::<u64>().map_err(|_| usage(format!("bad number {s:?} in plan {spec:?}")));
    let plan = match parts.as_slice() {
        ["walk", l] => {
            let l = num(l)?;
            if l > budget {
                return Err(usage(format!("walk of {l} steps exceeds the budget {budget}")));
            }
            walk_plan(l as usize, kind)
        }
        ["ball", r] => ball_plan(default_width, num(r)? as u32, kind, budget).map_err(usage)?,
        ["ball", r, w] => ball_plan(num(w)? as u32, num(r)? as u32, kind, budget).map_err(usage)?,
        ["file", path] => {
            let s = std::fs::read_to_string(path).with_context(|| format!("reading plan {path}"))?;
            let p = QueryPlan::from_json(kind, &s).map_err(usage)?;
            if p.len() as u64 > budget {
                return Err(usage(format!("plan has {} instructions, budget {budget}", p.len())));
            }
            p
        }
        _ => return Err(usage(format!("unknown plan {spec:?}; expected walk:L, ball:R[:W] or file:PATH"))),
    };
    Ok(plan)
}

fn parse_rat(s: &str, what: &str) -> Result<lcaforge_core::Rational> {
    parse_rational(s).map_err(|e| usage(format!("{what}: {e}")))
}

fn load_graph(graph: &Option<std::path::PathBuf>, er: &Option<String>, seed: Option<u64>) -> Result<(CsrGraph, Value)> {
    match (graph, er) {
        (Some(p), None) => {
            let inst = load_instance(p).with_context(|| format!("loading {}", p.display()))?;
            Ok((inst.graph().clone(), json!({"graph": p.display().to_string()})))
        }
        (None, Some(spec)) => {
            let (n, d) = spec.split_once(',').ok_or_else(|| usage("--er expects n,avg_degree"))?;
            let n: usize = n.trim().parse().map_err(|_| usage("--er: bad n"))?;
            let d: f64 = d.trim().parse().map_err(|_| usage("--er: bad degree"))?;
            let s = seed.ok_or_else(|| usage("--er needs --seed"))?;
            Ok((erdos_renyi(n, d, derive_seed(s, 0x6572)), json!({"er": {"n": n, "avg_degree": d}})))
        }
        _ => Err(usage("pass exactly one of --graph and --er")),
    }
}

/// What a command produced.
enum Output {
    /// Emitted verbatim (tree and blueprint documents).
    Raw(String),
    /// Printed to stdout even when `--out` names a file.
    Stdout(String),
    Report { table: Option<Table>, result: Value, failed: Option<String> },
}

#[derive(Serialize)]
struct Echo<'a> {
    version: &'a str,
    seed: Option<u64>,
    #[serde(flatten)]
    command: &'a Command,
}

pub fn run(cli: &Cli) -> Result<()> {
    let out = dispatch(cli)?;
    let echo = Echo { version: env!("CARGO_PKG_VERSION"), seed: cli.seed, command: &cli.cmd };
    let path = cli.out.as_deref();
    match out {
        Output::Raw(s) => emit(path, s.as_bytes()),
        Output::Stdout(s) => emit(None, s.as_bytes()),
        Output::Report { table, result, failed } => {
            let bytes = match (cli.format.unwrap_or(Format::Csv), table) {
                (Format::Csv, Some(t)) => t.render(&echo)?,
                (Format::Csv, None) => return Err(usage("this command only produces JSON; pass --format json")),
                (Format::Json, _) => {
                    let mut s = serde_json::to_string_pretty(&json!({"config": echo, "result": result}))?;
                    s.push('\n');
                    s.into_bytes()
                }
            };
            emit(path, &bytes)?;
            match failed {
                Some(why) => Err(CliError::Verification(why).into()),
                None => Ok(()),
            }
        }
    }
}

fn report(table: Table, result: impl Serialize) -> Result<Output> {
    Ok(Output::Report { table: Some(table), result: serde_json::to_value(result)?, failed: None })
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Command::Tree { r, delta } => {
            let t = ClusterTree::build(*r, *delta).map_err(usage)?;
            Ok(Output::Raw(t.to_json() + "\n"))
        }
        Command::Blueprint { bp } => Ok(Output::Raw(bp.build()?.to_json() + "\n")),
        Command::Gen { bp, sampler, edge_list } => {
            let seed = seed(cli)?;
            let path = cli.out.as_deref().ok_or_else(|| usage("gen writes a binary file: pass --out"))?;
            let b = bp.build()?;
            let inst = InstanceGraph::sample(&b, seed, &sampler.config()?)?;
            save_instance(&inst, path)?;
            if let Some(p) = edge_list {
                crate::output::write_atomic(p, edge_list_json(&inst, true).as_bytes())?;
            }
            let g = inst.graph();
            let summary = json!({"path": path.display().to_string(), "n": g.n(), "m": g.m(), "max_degree": g.max_degree(), "seed": seed, "blueprint_hash": format!("{:016x}", b.content_hash())});
            Ok(Output::Stdout(serde_json::to_string_pretty(&summary)? + "\n"))
        }
        Command::Explore { graph, plan, prompt, reveal_ids, executor: ex } => explore(cli, graph, plan, prompt, *reveal_ids, *ex),
        Command::Couple { bp, length, back_steps, trials, exact } => {
            let seed = seed(cli)?;
            let b = bp.build()?;
            let cfg = CouplingConfig { length: *length, back_steps: *back_steps, trials: *trials, seed, ell: b.params().ell() };
            let (est, outcomes) = estimate_failure_probability(&b, &cfg)?;
            let dp = if *exact { Some(exact_coupled_walk::<f64>(&b, *length, *back_steps)?) } else { None };
            let mut t = Table::new(["step", "mc_failures", "mc_rate", "exact_rate"]);
            for s in 1..=*length {
                let k = est.failure_steps.get(&s).copied().unwrap_or(0);
                let e = dp.as_ref().map_or(String::new(), |d| f(d.failure_by_step[s as usize]));
                t.push([s.to_string(), k.to_string(), f(k as f64 / *trials as f64), e]);
            }
            let not_failed = outcomes.iter().filter(|o| !matches!(o.status, WalkStatus::Failed(_))).count();
            eprintln!("failure rate {:.6} ({} / {}), CI {:?}", est.rate, est.failures, est.trials, est.ci95);
            report(t, json!({"estimate": est, "exact": dp, "not_failed": not_failed}))
        }
        Command::Tv { bp, sampler, plan, trials, instances, fresh_batch, executor: ex, statistic, bootstrap, permutations } => {
            let seed = seed(cli)?;
            let b = bp.build()?;
            let p = parse_plan(&plan.plan, kind(plan.prompt_kind), b.non_leaf_degree() as u32, budget()?)?;
            let stat = statistic_for(&b, *statistic);
            let scfg = sampler.config()?;
            let cfg = SampleConfig {
                trials_per_class: *trials,
                seed,
                executor: executor(*ex),
                statistic: stat,
                check_tree: false,
                keep_limit: 64,
            };
            let features = default_features();
            let fixed: Vec<InstanceGraph>;
            let source = match fresh_batch {
                Some(batch) => InstanceSource::Fresh { sampler: scfg, batch: *batch },
                None => {
                    fixed = (0..*instances.max(&1))
                        .map(|k| InstanceGraph::sample(&b, derive_seed(seed, 1000 + k), &scfg))
                        .collect::<Result<_, _>>()?;
                    InstanceSource::Fixed(&fixed)
                }
            };
            let samples = collect_samples(&b, source, &p, &cfg, &features)?;
            let rep = analyse(&samples, &features, &plan.plan, stat, *bootstrap, *permutations, seed);
            let mut t = Table::new(["metric", "value", "ci_lo", "ci_hi"]);
            t.push(["tv_raw".into(), f(rep.tv.raw), String::new(), String::new()]);
            t.push(["tv_null".into(), f(rep.tv.null_mean), String::new(), String::new()]);
            t.push(["tv_debiased".into(), f(rep.tv.debiased), f(rep.tv.ci95.0), f(rep.tv.ci95.1)]);
            if let Some(m) = rep.tv.max_marginal {
                t.push(["tv_max_marginal".into(), f(m), String::new(), String::new()]);
            }
            for c in &rep.classifiers {
                t.push([format!("accuracy:{}", c.name), f(c.accuracy), f(c.ci95.0), f(c.ci95.1)]);
            }
            report(t, rep)
        }
        Command::Cycles { bp, sampler, plan, n0_grid, trials, instances, executor: ex } => {
            let seed = seed(cli)?;
            if n0_grid.is_empty() {
                return Err(usage("--n0-grid is empty"));
            }
            let scfg = sampler.config()?;
            let mut t = Table::new(["n0", "n", "trials", "non_tree", "rate", "ci_lo", "ci_hi"]);
            let mut points = Vec::new();
            for &n0 in n0_grid {
                let b = BlueprintArgs { n0: Some(n0), ..bp.clone() }.build()?;
                let p = parse_plan(&plan.plan, kind(plan.prompt_kind), b.non_leaf_degree() as u32, budget()?)?;
                let insts: Vec<InstanceGraph> = (0..*instances.max(&1))
                    .map(|k| InstanceGraph::sample(&b, derive_seed(seed, n0 ^ (k << 48)), &scfg))
                    .collect::<Result<_, _>>()?;
                let pt = cycle_rate(&b, &insts, &p, *trials, derive_seed(seed, n0), executor(*ex))?;
                t.push([n0.to_string(), b.params().n.to_string(), pt.trials.to_string(), pt.non_tree.to_string(), f(pt.rate), f(pt.ci95.0), f(pt.ci95.1)]);
                points.push(pt);
            }
            report(t, points)
        }
        Command::Xprob { bp, sampler, rule, pairs, trials } => {
            let seed = seed(cli)?;
            let b = BlueprintArgs { no_main_matching: true, ..bp.clone() }.build()?;
            let inst = InstanceGraph::sample(&b, seed, &sampler.config()?)?;
            let targets = cover_pairs(&b, &inst, *pairs, seed);
            let rule: Box<dyn DecisionRule> = match rule {
                RuleArg::IncludeAll => Box::new(IncludeAll),
                RuleArg::LocalMinimumExclusion => Box::new(LocalMinimumExclusion),
                RuleArg::DegreeDominance => Box::new(DegreeDominance),
            };
            let flat: Vec<(u32, u32)> = targets.iter().flat_map(|&(u, v)| [(u, u), (v, v)]).collect();
            let est = estimate_output_probability(rule.as_ref(), &inst, &flat, *trials, derive_seed(seed, 2))?;
            let mut t = Table::new(["pair", "u", "v", "y_u", "y_v", "sum", "abs_diff"]);
            let mut rows = Vec::new();
            for (i, (&(u, v), ys)) in targets.iter().zip(est.chunks(2)).enumerate() {
                let (yu, yv) = (ys[0].estimate, ys[1].estimate);
                t.push([i.to_string(), u.to_string(), v.to_string(), f(yu), f(yv), f(yu + yv), f((yu - yv).abs())]);
                rows.push(json!({"u": u, "v": v, "y_u": ys[0], "y_v": ys[1]}));
            }
            report(t, json!({"rule": rule.name(), "pairs": rows}))
        }
        Command::Mis { bp, sampler, plan, trials, executor: ex, statistic } => {
            let seed = seed(cli)?;
            let b = bp.build()?;
            let inst = InstanceGraph::sample(&b, seed, &sampler.config()?)?;
            let lg_degree = 2 * (inst.graph().max_degree() as u32).saturating_sub(1);
            let p = parse_plan(plan, PromptKind::Vertex, lg_degree, budget()?)?;
            let stat = statistic_for(&b, *statistic);
            let cfg = SampleConfig { trials_per_class: *trials, seed, executor: executor(*ex), statistic: stat, check_tree: false, keep_limit: 64 };
            let rep = mis_experiment(&b, &inst, &p, &cfg, 200, 20)?;
            let mut t = Table::new(["metric", "value", "ci_lo", "ci_hi"]);
            t.push(["tv_debiased".into(), f(rep.report.tv.debiased), f(rep.report.tv.ci95.0), f(rep.report.tv.ci95.1)]);
            for c in &rep.report.classifiers {
                t.push([format!("accuracy:{}", c.name), f(c.accuracy), f(c.ci95.0), f(c.ci95.1)]);
            }
            t.push(["greedy_matching".into(), rep.greedy_matching.to_string(), String::new(), String::new()]);
            t.push(["maximum_matching".into(), rep.maximum_matching.to_string(), String::new(), String::new()]);
            report(t, rep)
        }
        Command::Mpc { graph, er, mem_exp, eps, lca_depth, terminal_threshold, exact } => {
            let seed = seed(cli)?;
            let (g, source) = load_graph(graph, er, Some(seed))?;
            let mut cfg = MpcConfig::new(parse_rat(mem_exp, "--mem-exp")?, parse_rat(eps, "--eps")?, *lca_depth).map_err(usage)?;
            cfg.terminal_threshold = *terminal_threshold;
            let trace = run_algorithm(&g, &cfg, &GreedyOracle, seed)?;
            let mu = exact.then(|| max_matching_size(&g));
            let mut t = Table::new(["iteration", "terminal", "max_degree", "p", "sampled_edges", "cover", "matched", "high_degree", "rounds"]);
            for r in &trace.iterations {
                t.push([
                    r.iteration.to_string(),
                    r.terminal.to_string(),
                    r.max_degree.to_string(),
                    f(r.p),
                    r.sampled_edges.to_string(),
                    r.cover.to_string(),
                    r.matched.to_string(),
                    r.high_degree.to_string(),
                    r.rounds.to_string(),
                ]);
            }
            eprintln!(
                "matching {} in {} iterations, {} rounds{}",
                trace.matching.len(),
                trace.iterations.len(),
                trace.total_rounds,
                mu.map_or(String::new(), |m| format!(", maximum {m}"))
            );
            if let Some(m) = mu {
                if m * 10 < g.n() {
                    eprintln!("warning: maximum matching {m} is small relative to n = {}", g.n());
                }
            }
            report(t, json!({"source": source, "trace": trace, "maximum_matching": mu}))
        }
        Command::Residual { graph, er, p, trials } => {
            let seed = seed(cli)?;
            let (g, source) = load_graph(graph, er, Some(seed))?;
            if p.is_empty() || p.iter().any(|&x| !(0.0..=1.0).contains(&x) || x == 0.0) {
                return Err(usage("--p needs values in (0, 1]"));
            }
            let mut t = Table::new(["p", "bound", "trials", "max_residual", "within_bound"]);
            let mut reps = Vec::new();
            for (i, &pi) in p.iter().enumerate() {
                let r = residual_after_sampled_cover(&g, pi, *trials, derive_seed(seed, i as u64));
                t.push([f(pi), f(r.bound), trials.to_string(), r.max.to_string(), r.within.to_string()]);
                reps.push(r);
            }
            report(t, json!({"source": source, "reports": reps}))
        }
        Command::Verify { r_min, r_max, delta_min, delta_max, c, mutate, critical_len } => {
            let c = parse_rat(c, "--c")?;
            if r_min > r_max || delta_min > delta_max || *delta_min < 2 {
                return Err(usage("empty or invalid ranges"));
            }
            if *r_max > 4 || *delta_max > 8 {
                return Err(usage("verify is exhaustive; ranges are capped at r ≤ 4, delta ≤ 8"));
            }
            let m = mutate.as_deref().map(parse_mutation).transpose()?;
            let rep = verify_all(*r_min..=*r_max, *delta_min..=*delta_max, c, m).map_err(usage)?;
            let mut t = Table::new(["claim", "r", "delta", "examined", "violations", "first_locus", "first_detail"]);
            for ch in &rep.checks {
                let first = ch.violations.first();
                t.push([
                    ch.claim.to_string(),
                    ch.r.to_string(),
                    ch.delta.to_string(),
                    ch.examined.to_string(),
                    ch.violations.len().to_string(),
                    first.map_or(String::new(), |v| v.locus.clone()),
                    first.map_or(String::new(), |v| v.detail.clone()),
                ]);
            }
            let mut sweeps = Vec::new();
            if let Some(len) = critical_len {
                for r in *r_min..=(*r_max).min(3) {
                    for d in *delta_min..=*delta_max {
                        let s = critical_subsequence_sweep(r, d, *len).map_err(usage)?;
                        let ok = s.counterexamples.is_empty() && s.greedy_mismatches.is_empty();
                        t.push([
                            "critical-subsequence".into(),
                            r.to_string(),
                            d.to_string(),
                            s.sequences.to_string(),
                            (s.counterexamples.len() + s.greedy_mismatches.len()).to_string(),
                            if ok { String::new() } else { "sequence".into() },
                            s.counterexamples.first().or(s.greedy_mismatches.first()).map_or(String::new(), |x| format!("{x:?}")),
                        ]);
                        sweeps.push(s);
                    }
                }
            }
            let sweep_failed = sweeps.iter().any(|s| !s.counterexamples.is_empty() || !s.greedy_mismatches.is_empty());
            let failed = (!rep.passed() || sweep_failed).then(|| {
                let ids: Vec<String> = rep.failures().map(|c| format!("{} (r={}, δ={})", c.claim, c.r, c.delta)).collect();
                format!("{} failing checks: {}", ids.len(), ids.join(", "))
            });
            eprintln!("{} checks over {} claim ids", rep.checks.len(), rep.claim_ids().len());
            Ok(Output::Report { table: Some(t), result: json!({"report": rep, "critical": sweeps}), failed })
        }
    }
}

fn statistic_for(bp: &Blueprint, s: StatisticArg) -> Statistic {
    match s {
        StatisticArg::Full => Statistic::Full,
        StatisticArg::Prefix => {
            let top = bp.clusters().filter(|&c| c != bp.dummy()).filter_map(|c| bp.degree(c).ok()).max().unwrap_or(0);
            Statistic::AbsorptionPrefix { threshold: top as u32 + 1 }
        }
    }
}

fn parse_mutation(s: &str) -> Result<Mutation> {
    let v: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| usage(format!("--mutate expects r,delta,cluster,exp; got {s:?}"))))
        .collect::<Result<_>>()?;
    let [r, delta, cluster, up] = v[..] else { return Err(usage("--mutate expects four numbers")) };
    Ok(Mutation { r: r as u32, delta, cluster: ClusterId(cluster as u32), up: LabelExp(up as u32) })
}

fn explore(cli: &Cli, graph: &Path, plan: &PlanArgs, prompt: &str, reveal_ids: bool, ex: ExecutorArg) -> Result<Output> {
    let inst = load_instance(graph).with_context(|| format!("loading {}", graph.display()))?;
    let g = inst.graph();
    let k = kind(plan.prompt_kind);
    let p = parse_plan(&plan.plan, k, g.max_degree() as u32, budget()?)?;
    let ids: Vec<u32> = prompt
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| usage(format!("bad prompt {prompt:?}"))))
        .collect::<Result<_>>()?;
    let pr = match (k, ids.as_slice()) {
        (PromptKind::Edge, &[u, v]) => Prompt::Edge(u, v),
        (PromptKind::Vertex, &[v]) => Prompt::Vertex(v),
        _ => bail!(usage("prompt does not match --prompt-kind")),
    };
    let opts = ExecOptions { reveal_ids };
    let e = match ex {
        ExecutorArg::Positional => execute_plan(g, pr, &p, opts).map_err(usage)?,
        ExecutorArg::RandomNeighbor => {
            let s = seed(cli)?;
            execute_random_neighbor(g, pr, &p, &mut stream_rng(s, 0), opts).map_err(usage)?
        }
    };
    let mut t = Table::new(["position", "parent", "degree", "id"]);
    let mut rows = Vec::new();
    for pos in 1..=e.len() {
        let id = if reveal_ids { e.id(pos)? } else { None };
        let d = e.degree(pos);
        t.push([
            pos.to_string(),
            e.parents()[pos - 1].to_string(),
            d.map_or("null".into(), |d| d.to_string()),
            id.map_or(String::new(), |v| v.to_string()),
        ]);
        rows.push(json!({"position": pos, "parent": e.parents()[pos - 1], "degree": d, "id": id}));
    }
    report(t, rows)
}
