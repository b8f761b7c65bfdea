//! Acceptance suite. One line per criterion; every threshold is pinned
//! below. Run with `cargo test --test acceptance -- --nocapture` to see the
//! report.

use std::process::Command;
use std::time::{Duration, Instant};

use lcaforge_core::bipartite::{sample_biregular, SamplerConfig};
use lcaforge_core::blueprint::min_feasible_n0;
use lcaforge_core::coupling::{estimate_failure_probability, CouplingConfig, FailureEstimate};
use lcaforge_core::coupling_dp::exact_coupled_walk;
use lcaforge_core::distinguish::{
    analyse, collect_samples, cover_pairs, cycle_rate, default_features, estimate_output_probability, Executor, InstanceSource,
    SampleConfig, Statistic,
};
use lcaforge_core::graph::CsrGraph;
use lcaforge_core::instance::InstanceGraph;
use lcaforge_core::lca_engine::{ball_plan, walk_plan, PromptKind, DEFAULT_BUDGET};
use lcaforge_core::matching::max_matching_size;
use lcaforge_core::mpc_sim::{erdos_renyi, residual_after_sampled_cover, run_algorithm, GreedyOracle, MpcConfig};
use lcaforge_core::rng::derive_seed;
use lcaforge_core::rules::{is_vertex_cover, vertex_outputs, DecisionRule, DegreeDominance, IncludeAll, LocalMinimumExclusion};
use lcaforge_core::stats::{chi_square_p_value, chi_square_statistic};
use lcaforge_core::verify::{critical_subsequence_sweep, verify_all};
use lcaforge_core::{Blueprint, Params, Rational, Regime};

const SEED: u64 = 20_241_016;

// 1
const STRUCT_MAX_SECS: u64 = 60;
// 2
const CRITICAL_MAX_LEN: usize = 6;
const CRITICAL_MAX_SECS: u64 = 300;
// 3
const GOF_SAMPLES: u64 = 10_000;
const GOF_ALPHA: f64 = 0.01;
const AUDIT_INSTANCES: u64 = 100;
// 4
const MATCHING_INSTANCES: u64 = 20;
const MATCHING_MAX_N: u64 = 10_000;
// 5
const CYCLE_KAPPA_WIDTH: u32 = 100;
const CYCLE_N0: [u64; 3] = [1_000, 10_000, 100_000];
const CYCLE_TRIALS: u64 = 10_000;
const CYCLE_RATIO_FACTOR: f64 = 3.0;
// 6, 7
const COUPLING_TRIALS: u64 = 100_000;
const SIGMAS: f64 = 3.0;
// 8
const TV_KAPPA: u64 = 64;
const TV_N0: u64 = 32_768;
const TV_TRIALS: u64 = 10_000;
const TV_BOOTSTRAP: usize = 200;
const TV_PERMUTATIONS: usize = 20;
const CONTROL_TRIALS: u64 = 100;
const CONTROL_RADIUS: u32 = 2;
const CONTROL_ACCURACY: f64 = 0.7;
// 9
const COVER_PAIRS: usize = 20;
const COVER_TRIALS: u64 = 2_000;
const COVER_SLACK: f64 = 0.02;
const SYMMETRY_TOL: f64 = 0.05;
// 10, 11
const ER_N: usize = 10_000;
const ER_DEGREE: f64 = 20.0;
const RESIDUAL_PS: [f64; 2] = [0.01, 0.1];
const RESIDUAL_TRIALS: usize = 100;
const MPC_RUNS: u64 = 10;
const MPC_RATIO: f64 = 1.0 / 6.0 - 0.05;
/// Forces the sampling branch on a graph whose max degree is below log² n.
const MPC_OVERRIDE_THRESHOLD: f64 = 8.0;

type Verdict = Result<(bool, String), String>;

fn c(s: &str) -> Rational {
    lcaforge_core::blueprint::parse_rational(s).unwrap()
}

fn blueprint(cc: &str, r: u32, delta: u64, n0: Option<u64>, kappa: Option<u64>, mm: bool) -> Result<Blueprint, String> {
    let cc = c(cc);
    let n0 = match n0 {
        Some(n) => n,
        None => min_feasible_n0(cc, r, delta).map_err(|e| e.to_string())?,
    };
    let mut p = Params::derive(cc, r, delta, n0, Regime::Desk).map_err(|e| e.to_string())?;
    if let Some(k) = kappa {
        p = p.with_kappa(k).map_err(|e| e.to_string())?;
    }
    Blueprint::build(p, mm).map_err(|e| e.to_string())
}

fn within(t: Instant, secs: u64) -> bool {
    t.elapsed() < Duration::from_secs(secs)
}

fn se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn c1_structure() -> Verdict {
    let t = Instant::now();
    let rep = verify_all(0..=4, 3..=8, c("9/10"), None).map_err(|e| e.to_string())?;
    let violations: usize = rep.checks.iter().map(|c| c.violations.len()).sum();
    let ok = rep.passed() && rep.skipped.is_empty() && within(t, STRUCT_MAX_SECS);
    Ok((
        ok,
        format!(
            "{} checks over {} properties, {violations} violations, {} skipped, {:.2}s",
            rep.checks.len(),
            rep.claim_ids().len(),
            rep.skipped.len(),
            t.elapsed().as_secs_f64()
        ),
    ))
}

fn c2_critical() -> Verdict {
    let t = Instant::now();
    let (mut seqs, mut dist, mut bad) = (0, 0, 0);
    for r in 0..=3 {
        for delta in [3, 4] {
            let s = critical_subsequence_sweep(r, delta, CRITICAL_MAX_LEN).map_err(|e| e.to_string())?;
            seqs += s.sequences;
            dist += s.distinguishing;
            bad += s.counterexamples.len() + s.greedy_mismatches.len();
        }
    }
    Ok((
        bad == 0 && dist > 0 && within(t, CRITICAL_MAX_SECS),
        format!("{seqs} sequences, {dist} distinguishing, {bad} counterexamples or greedy mismatches, {:.2}s", t.elapsed().as_secs_f64()),
    ))
}

fn c3_sampler() -> Verdict {
    let cfg = SamplerConfig::default();
    let mut counts = std::collections::BTreeMap::new();
    for s in 0..GOF_SAMPLES {
        let b = sample_biregular(3, 3, 1, 1, derive_seed(SEED, s), &cfg).map_err(|e| e.to_string())?;
        *counts.entry(b.edges()).or_insert(0u64) += 1;
    }
    let obs: Vec<u64> = counts.values().copied().collect();
    let p = if obs.len() == 6 { chi_square_p_value(chi_square_statistic(&obs, &[GOF_SAMPLES as f64 / 6.0; 6]), 5.0) } else { 0.0 };

    let mut audited = 0;
    let mut exact = 0;
    for (r, delta) in [(0, 2), (0, 3), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3)] {
        for mm in [true, false] {
            let bp = blueprint("9/10", r, delta, None, None, mm)?;
            for s in 0..AUDIT_INSTANCES {
                let inst = InstanceGraph::sample(&bp, derive_seed(SEED ^ 3, s), &cfg).map_err(|e| e.to_string())?;
                audited += 1;
                if inst.graph().is_simple() && inst.evaluation().degree_audit(&bp).is_empty() {
                    exact += 1;
                }
            }
        }
    }
    Ok((
        p > GOF_ALPHA && exact == audited,
        format!("6-outcome counts {obs:?}, χ² p = {p:.4}; degrees exact in {exact}/{audited} instances over 14 blueprints"),
    ))
}

fn c4_matching_floor() -> Verdict {
    let cfg = SamplerConfig::default();
    let mut ok = 0;
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for (r, delta) in [(2, 3), (2, 4)] {
        let bp = blueprint("9/10", r, delta, None, None, true)?;
        if bp.params().n > MATCHING_MAX_N {
            return Err(format!("blueprint ({r},{delta}) has n = {} > {MATCHING_MAX_N}", bp.params().n));
        }
        for s in 0..MATCHING_INSTANCES / 2 {
            let inst = InstanceGraph::sample(&bp, derive_seed(SEED ^ 4, s), &cfg).map_err(|e| e.to_string())?;
            let mu = max_matching_size(inst.graph()) as u64;
            let n = bp.params().tree_vertices;
            worst = worst.min(mu as f64 / n as f64);
            ok += u64::from(mu >= n);
            count += 1;
        }
    }
    Ok((ok == MATCHING_INSTANCES, format!("μ(G) ≥ N in {ok}/{count}; smallest μ/N = {worst:.4}")))
}

fn c5_cycles() -> Verdict {
    let cfg = SamplerConfig { mixing_factor: 0.0, ..SamplerConfig::default() };
    let mut rates = Vec::new();
    let mut parts = Vec::new();
    for &n0 in &CYCLE_N0 {
        let bp = blueprint("3/10", 1, 2, Some(n0), Some(2 * CYCLE_KAPPA_WIDTH as u64), true)?;
        let plan = ball_plan(CYCLE_KAPPA_WIDTH, 1, PromptKind::Edge, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let insts: Vec<InstanceGraph> = (0..4u64)
            .map(|k| InstanceGraph::sample(&bp, derive_seed(SEED, n0 ^ (k << 48)), &cfg))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let pt = cycle_rate(&bp, &insts, &plan, CYCLE_TRIALS, derive_seed(SEED, n0), Executor::Positional).map_err(|e| e.to_string())?;
        parts.push(format!("N0={n0}: {:.4}", pt.rate));
        rates.push(pt.rate);
    }
    let mut ok = true;
    let mut ratios = Vec::new();
    for i in 0..rates.len() - 1 {
        let size_ratio = CYCLE_N0[i + 1] as f64 / CYCLE_N0[i] as f64;
        let ratio = if rates[i + 1] > 0.0 { rates[i] / rates[i + 1] } else { f64::INFINITY };
        ok &= rates[i + 1] < rates[i];
        ok &= ratio >= size_ratio / CYCLE_RATIO_FACTOR && ratio <= size_ratio * CYCLE_RATIO_FACTOR;
        ratios.push(format!("{ratio:.2}"));
    }
    Ok((ok, format!("non-tree rates {}; consecutive ratios {} vs size ratio 10", parts.join(", "), ratios.join(", "))))
}

fn coupling(back_steps: bool, length: u32) -> Result<FailureEstimate, String> {
    let bp = blueprint("9/10", 2, 8, Some(TV_N0), Some(TV_KAPPA), true)?;
    let cfg = CouplingConfig { length, back_steps, trials: COUPLING_TRIALS, seed: derive_seed(SEED, back_steps as u64), ell: bp.params().ell() };
    estimate_failure_probability(&bp, &cfg).map(|x| x.0).map_err(|e| e.to_string())
}

fn walk_length() -> u32 {
    2 * (TV_KAPPA as f64).log2().round() as u32
}

fn c6_absorption(plain: &FailureEstimate, back: &FailureEstimate) -> Verdict {
    let ok = plain.post_dummy_mismatches == 0
        && back.post_dummy_mismatches == 0
        && plain.failures_not_distinguishing == 0
        && plain.failures_without_critical == 0
        && plain.failures > 0;
    Ok((
        ok,
        format!(
            "post-absorption mismatches {} (plain) / {} (back steps); {} plain failures, {} not distinguishing, {} with < r critical labels",
            plain.post_dummy_mismatches, back.post_dummy_mismatches, plain.failures, plain.failures_not_distinguishing, plain.failures_without_critical
        ),
    ))
}

fn c7_exact(plain: &FailureEstimate, back: &FailureEstimate) -> Verdict {
    let bp = blueprint("9/10", 2, 8, Some(TV_N0), Some(TV_KAPPA), true)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, est, b) in [("plain", plain, false), ("back steps", back, true)] {
        let dp = exact_coupled_walk::<f64>(&bp, walk_length(), b).map_err(|e| e.to_string())?;
        let sigma = se(dp.failure, COUPLING_TRIALS);
        let z = (est.rate - dp.failure) / sigma;
        ok &= z.abs() <= SIGMAS;
        parts.push(format!("{name}: MC {:.5} vs exact {:.5} (z = {z:+.2})", est.rate, dp.failure));
    }
    Ok((ok, parts.join("; ")))
}

fn c8_gap(back: &FailureEstimate) -> Verdict {
    let bp = blueprint("9/10", 2, 8, Some(TV_N0), Some(TV_KAPPA), true)?;
    let inst = InstanceGraph::sample(&bp, derive_seed(SEED, 8), &SamplerConfig { mixing_factor: 0.0, ..SamplerConfig::default() })
        .map_err(|e| e.to_string())?;
    let insts = [inst];
    let features = default_features();
    let walk = walk_plan(walk_length() as usize, PromptKind::Edge);
    let top = bp.clusters().filter(|&c| c != bp.dummy()).filter_map(|c| bp.degree(c).ok()).max().unwrap_or(0) as u32;
    let coupling_se = se(back.rate, back.trials);

    let mut ok = true;
    let mut parts = Vec::new();
    for stat in [Statistic::Full, Statistic::AbsorptionPrefix { threshold: top + 1 }] {
        let cfg = SampleConfig {
            trials_per_class: TV_TRIALS,
            seed: derive_seed(SEED, 80),
            executor: Executor::RandomNeighbor,
            statistic: stat,
            check_tree: false,
            keep_limit: 64,
        };
        let samples = collect_samples(&bp, InstanceSource::Fixed(&insts), &walk, &cfg, &features).map_err(|e| e.to_string())?;
        let rep = analyse(&samples, &features, "walk", stat, TV_BOOTSTRAP, TV_PERMUTATIONS, derive_seed(SEED, 81));
        let sigma = (coupling_se.powi(2) + rep.tv.bootstrap_sd.powi(2)).sqrt();
        let tv_ok = rep.tv.debiased <= back.rate + SIGMAS * sigma;
        let acc_cap = 0.5 + rep.tv.ci95.1 / 2.0;
        let worst = rep.classifiers.iter().max_by(|a, b| a.ci95.0.total_cmp(&b.ci95.0)).unwrap();
        let acc_ok = rep.classifiers.iter().all(|c| c.ci95.0 <= acc_cap);
        ok &= tv_ok && acc_ok;
        let name = if matches!(stat, Statistic::Full) { "full" } else { "prefix" };
        parts.push(format!(
            "{name}: TV {:.4} (CI {:.4}–{:.4}) vs coupling {:.4} + 3σ; best {} accuracy {:.3} (lower {:.3}) vs cap {:.3}",
            rep.tv.debiased, rep.tv.ci95.0, rep.tv.ci95.1, back.rate, worst.name, worst.accuracy, worst.ci95.0, acc_cap
        ));
    }

    // full neighbourhoods do distinguish
    let ball = ball_plan(bp.non_leaf_degree() as u32, CONTROL_RADIUS, PromptKind::Edge, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let cfg = SampleConfig {
        trials_per_class: CONTROL_TRIALS,
        seed: derive_seed(SEED, 82),
        executor: Executor::Positional,
        statistic: Statistic::Full,
        check_tree: false,
        keep_limit: 0,
    };
    let samples = collect_samples(&bp, InstanceSource::Fixed(&insts), &ball, &cfg, &features).map_err(|e| e.to_string())?;
    let rep = analyse(&samples, &features, "ball", Statistic::Full, 50, 5, derive_seed(SEED, 83));
    let best = rep.classifiers.iter().max_by(|a, b| a.accuracy.total_cmp(&b.accuracy)).unwrap();
    ok &= best.accuracy >= CONTROL_ACCURACY;
    parts.push(format!("control ball radius {CONTROL_RADIUS}: {} accuracy {:.3}", best.name, best.accuracy));
    Ok((ok, parts.join("; ")))
}

fn c9_cover() -> Verdict {
    let bp = blueprint("9/10", 1, 3, None, None, false)?;
    let inst = InstanceGraph::sample(&bp, derive_seed(SEED, 9), &SamplerConfig::default()).map_err(|e| e.to_string())?;
    let targets = cover_pairs(&bp, &inst, COVER_PAIRS, SEED);
    if targets.is_empty() {
        return Err("no adjacent root-level pairs".into());
    }
    let flat: Vec<(u32, u32)> = targets.iter().flat_map(|&(u, v)| [(u, u), (v, v)]).collect();
    let rules: [&dyn DecisionRule; 3] = [&IncludeAll, &LocalMinimumExclusion, &DegreeDominance];
    let mut ok = true;
    let mut parts = Vec::new();
    for rule in rules {
        // only rules that really output covers are in scope
        let valid = (0..5).all(|s| {
            let g = inst.relabel(derive_seed(SEED, 90 + s));
            vertex_outputs(rule, g.graph()).map(|out| is_vertex_cover(g.graph(), &out)).unwrap_or(false)
        });
        let est = estimate_output_probability(rule, &inst, &flat, COVER_TRIALS, derive_seed(SEED, 91)).map_err(|e| e.to_string())?;
        let pairs: Vec<(f64, f64)> = est.chunks(2).map(|y| (y[0].estimate, y[1].estimate)).collect();
        let min_sum = pairs.iter().map(|(a, b)| a + b).fold(f64::INFINITY, f64::min);
        let max_diff = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ok &= valid && min_sum >= 1.0 - COVER_SLACK;
        if rule.name() == LocalMinimumExclusion.name() {
            ok &= max_diff <= SYMMETRY_TOL;
        }
        parts.push(format!("{}: cover {valid}, min ŷ_u+ŷ_v {min_sum:.3}, max |ŷ_u−ŷ_v| {max_diff:.3}", rule.name()));
    }
    Ok((ok, format!("{} pairs; {}", targets.len(), parts.join("; "))))
}

fn er(k: u64) -> CsrGraph {
    erdos_renyi(ER_N, ER_DEGREE, derive_seed(SEED, 1000 + k))
}

fn c10_residual() -> Verdict {
    let g = er(0);
    let mut ok = true;
    let mut parts = Vec::new();
    for (i, &p) in RESIDUAL_PS.iter().enumerate() {
        let r = residual_after_sampled_cover(&g, p, RESIDUAL_TRIALS, derive_seed(SEED, 100 + i as u64));
        ok &= r.within == RESIDUAL_TRIALS;
        parts.push(format!("p={p}: max residual {} ≤ {:.0} in {}/{}", r.max, r.bound, r.within, RESIDUAL_TRIALS));
    }
    Ok((ok, parts.join("; ")))
}

fn valid_matching(g: &CsrGraph, m: &[(u32, u32)]) -> bool {
    let mut used = vec![false; g.n()];
    m.iter().all(|&(u, v)| {
        let fresh = g.has_edge(u, v) && !used[u as usize] && !used[v as usize];
        used[u as usize] = true;
        used[v as usize] = true;
        fresh
    })
}

fn c11_mpc() -> Verdict {
    let cfg = MpcConfig::new(c("1/2"), c("1/10"), 16).map_err(|e| e.to_string())?;
    let mut passed = 0;
    let mut worst = f64::INFINITY;
    let mut max_iter = 0;
    for k in 0..MPC_RUNS {
        let g = er(k);
        let mu = max_matching_size(&g);
        match run_algorithm(&g, &cfg, &GreedyOracle, derive_seed(SEED, 200 + k)) {
            Ok(t) => {
                let ratio = t.matching.len() as f64 / mu as f64;
                worst = worst.min(ratio);
                max_iter = max_iter.max(t.iterations.len());
                let good = valid_matching(&g, &t.matching) && ratio >= MPC_RATIO && t.iterations.len() as f64 <= cfg.iteration_bound(g.n());
                passed += u64::from(good);
            }
            Err(e) => return Ok((false, format!("run {k}: {e}"))),
        }
    }
    let bound = cfg.iteration_bound(ER_N);

    // sampling branch, same invariants
    let mut forced = cfg.clone();
    forced.terminal_threshold = Some(MPC_OVERRIDE_THRESHOLD);
    let g = er(0);
    let mu = max_matching_size(&g);
    let (forced_ok, forced_note) = match run_algorithm(&g, &forced, &GreedyOracle, derive_seed(SEED, 300)) {
        Ok(t) => {
            let ratio = t.matching.len() as f64 / mu as f64;
            (
                valid_matching(&g, &t.matching) && ratio >= MPC_RATIO,
                format!("forced sampling: {} iterations (bound {bound:.2}, not asserted), |M|/μ = {ratio:.3}", t.iterations.len()),
            )
        }
        Err(e) => (false, format!("forced sampling failed: {e}")),
    };
    Ok((
        passed == MPC_RUNS && forced_ok,
        format!("{passed}/{MPC_RUNS} runs valid with |M|/μ ≥ {MPC_RATIO:.3} (worst {worst:.3}), ≤ {max_iter} iterations vs bound {bound:.2}; {forced_note}"),
    ))
}

fn body(args: &[&str], workers: &str) -> Result<String, String> {
    let mut full = vec!["--workers", workers];
    full.extend_from_slice(args);
    let o = Command::new(env!("CARGO_BIN_EXE_lcaforge")).args(&full).output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
    }
    Ok(String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n"))
}

fn c12_reproducible() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let g = dir.path().join("g.bin");
    let gs = g.to_str().unwrap();
    let mk = |out: &str| body(&["--seed", "4", "--out", out, "gen", "--r", "1", "--delta", "3"], "1");
    mk(gs)?;
    let g2 = dir.path().join("g2.bin");
    mk(g2.to_str().unwrap())?;
    let same_gen = std::fs::read(&g).map_err(|e| e.to_string())? == std::fs::read(&g2).map_err(|e| e.to_string())?;

    let bp = ["--r", "1", "--delta", "3"];
    let cmds: Vec<Vec<&str>> = vec![
        [&["couple"][..], &bp, &["--length", "8", "--trials", "5000", "--back-steps"]].concat(),
        [&["tv"][..], &bp, &["--plan", "walk:6", "--trials", "500", "--executor", "random-neighbor", "--bootstrap", "20"]].concat(),
        [&["cycles"][..], &bp, &["--plan", "ball:1", "--n0-grid", "27,270", "--trials", "500"]].concat(),
        [&["xprob"][..], &bp, &["--rule", "local-minimum-exclusion", "--pairs", "5", "--trials", "200"]].concat(),
        [&["mis"][..], &bp, &["--plan", "walk:4", "--trials", "300"]].concat(),
        vec!["mpc", "--er", "2000,10", "--terminal-threshold", "4"],
        vec!["residual", "--er", "2000,10", "--p", "0.1", "--trials", "10"],
        vec!["explore", "--graph", gs, "--prompt", "0", "--prompt-kind", "vertex", "--plan", "walk:6", "--executor", "random-neighbor"],
    ];
    let mut diffs = Vec::new();
    for cmd in &cmds {
        let mut a = vec!["--seed", "12"];
        a.extend(cmd.iter().copied());
        let first = body(&a, "1")?;
        let second = body(&a, "2")?;
        if first != second || first.is_empty() {
            diffs.push(cmd[0].to_string());
        }
    }
    Ok((
        same_gen && diffs.is_empty(),
        format!("gen bytes identical: {same_gen}; {} commands re-run with 1 and 2 workers, differing: {diffs:?}", cmds.len()),
    ))
}

#[test]
fn acceptance() {
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &dyn Fn() -> Verdict| {
        let t = Instant::now();
        let v = f();
        eprintln!("  [criterion {id} took {:.1}s]", t.elapsed().as_secs_f64());
        results.push((id, name, v));
    };
    run(1, "structural suite", &c1_structure);
    run(2, "critical subsequences", &c2_critical);
    run(3, "sampler uniformity and degree exactness", &c3_sampler);
    run(4, "matching floor", &c4_matching_floor);
    run(5, "tree explorations", &c5_cycles);
    let plain = coupling(false, walk_length());
    let back = coupling(true, walk_length());
    let pair = match (&plain, &back) {
        (Ok(p), Ok(b)) => Ok((p.clone(), b.clone())),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    run(6, "coupling absorption", &|| pair.as_ref().map_err(Clone::clone).and_then(|(p, b)| c6_absorption(p, b)));
    run(7, "coupling vs exact", &|| pair.as_ref().map_err(Clone::clone).and_then(|(p, b)| c7_exact(p, b)));
    run(8, "indistinguishability gap", &|| pair.as_ref().map_err(Clone::clone).and_then(|(_, b)| c8_gap(b)));
    run(9, "vertex-cover variant", &c9_cover);
    run(10, "residual after sampled cover", &c10_residual);
    run(11, "MPC matching end to end", &c11_mpc);
    run(12, "reproducibility", &c12_reproducible);

    let mut failed = Vec::new();
    for (id, name, v) in &results {
        let (pass, detail) = match v {
            Ok((p, d)) => (*p, d.clone()),
            Err(e) => (false, format!("error: {e}")),
        };
        println!("criterion {id:>2} {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
