//! Property tests across modules, each against a direct oracle.

use lcaforge_core::bipartite::SamplerConfig;
use lcaforge_core::blueprint::min_feasible_n0;
use lcaforge_core::cluster_tree::find_critical_subsequence;
use lcaforge_core::coupling_dp::exact_coupled_walk;
use lcaforge_core::graph::CsrGraph;
use lcaforge_core::graph_io::{read_instance, write_instance};
use lcaforge_core::instance::InstanceGraph;
use lcaforge_core::lca_engine::{ball_plan, execute_plan, first_cycle_position, walk_plan, ExecOptions, Prompt, PromptKind, QueryPlan};
use lcaforge_core::matching::{greedy_maximal_matching, is_valid_matching, matching_size, maximum_matching};
use lcaforge_core::stats::{wilson_interval, Z95};
use lcaforge_core::verify::critical_subsequence_exhaustive;
use lcaforge_core::{Blueprint, ClusterTree, ExactProb, LabelExp, Params, Rational, Regime};
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn small_bp(r: u32, delta: u64, mm: bool) -> Blueprint {
    let c = Rational::new(9, 10);
    let p = Params::derive(c, r, delta, min_feasible_n0(c, r, delta).unwrap(), Regime::Desk).unwrap();
    Blueprint::build(p, mm).unwrap()
}

/// Maximum matching by trying every edge subset.
fn brute_matching(n: usize, edges: &[(u32, u32)]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << edges.len()) {
        let mut used = vec![false; n];
        let mut ok = true;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used[u as usize] || used[v as usize] {
                    ok = false;
                    break;
                }
                used[u as usize] = true;
                used[v as usize] = true;
            }
        }
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

fn simple_graph() -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (2usize..9).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len().min(12)).prop_map(move |e| (n, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tree_degrees(r in 0u32..5, delta in 2u64..10) {
        let t = ClusterTree::build(r, delta).unwrap();
        let dbar: u64 = (0..=r).map(|i| delta.pow(i)).sum();
        let mut max = 0;
        for id in t.ids() {
            let d = t.tree_degree(id).unwrap();
            max = max.max(d);
            if !t.is_leaf(id).unwrap() {
                prop_assert_eq!(d, dbar);
            }
        }
        prop_assert_eq!(max, delta.pow(r + 1));
    }

    #[test]
    fn greedy_critical_is_exact(r in 0u32..5, seq in proptest::collection::vec(0u32..6, 0..14)) {
        let labels: Vec<LabelExp> = seq.iter().map(|&l| LabelExp(l)).collect();
        prop_assert_eq!(find_critical_subsequence(&labels, r).is_some(), critical_subsequence_exhaustive(&labels, r));
    }

    #[test]
    fn hopcroft_karp_matches_brute_force((n, edges) in simple_graph()) {
        let g = CsrGraph::from_edges(n, &edges);
        let mate = maximum_matching(&g);
        prop_assert!(is_valid_matching(&g, &mate));
        prop_assert_eq!(matching_size(&mate), brute_matching(n, &edges));
        let greedy = greedy_maximal_matching(&g);
        prop_assert!(is_valid_matching(&g, &greedy));
        prop_assert!(2 * matching_size(&greedy) >= matching_size(&mate));
    }

    #[test]
    fn walks_follow_edges(seed in any::<u64>(), len in 1usize..20) {
        let bp = small_bp(1, 3, true);
        let inst = InstanceGraph::sample(&bp, seed, &SamplerConfig { mixing_factor: 0.0, ..Default::default() }).unwrap();
        let g = inst.graph();
        let plan = walk_plan(len, PromptKind::Vertex);
        let v0 = (seed % g.n() as u64) as u32;
        let ex = execute_plan(g, Prompt::Vertex(v0), &plan, ExecOptions::default()).unwrap();
        let again = execute_plan(g, Prompt::Vertex(v0), &plan, ExecOptions::default()).unwrap();
        prop_assert_eq!(&ex, &again);
        let verts = ex.vertices(&inst.evaluation());
        for (i, w) in verts.windows(2).enumerate() {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                prop_assert!(g.has_edge(a, b), "step {}", i);
                // walk plans always take the first neighbour
                prop_assert_eq!(g.neighbors(a)[0], b);
            }
        }
    }

    #[test]
    fn relabel_preserves_structure(seed in any::<u64>(), s2 in any::<u64>()) {
        let bp = small_bp(1, 2, false);
        let inst = InstanceGraph::sample(&bp, seed, &SamplerConfig { mixing_factor: 0.0, ..Default::default() }).unwrap();
        let (re, map) = inst.relabel_with_map(s2);
        let (g, h) = (inst.graph(), re.graph());
        prop_assert_eq!(g.m(), h.m());
        for (u, v) in g.edges() {
            prop_assert!(h.has_edge(map[u as usize], map[v as usize]));
            prop_assert_eq!(inst.evaluation().cluster_of(u), re.evaluation().cluster_of(map[u as usize]));
        }
        prop_assert!(re.evaluation().degree_audit(&bp).is_empty());
    }

    /// On a tree exploration with no revisits, the induced subgraph on the
    /// positions is exactly the parent-link tree, so `(parent, degree)`
    /// pairs describe everything that was seen.
    #[test]
    fn tree_explorations_are_described_by_parents(seed in any::<u64>(), width in 1u32..4, radius in 1u32..4) {
        let bp = small_bp(2, 3, true);
        let inst = InstanceGraph::sample(&bp, seed, &SamplerConfig { mixing_factor: 0.0, ..Default::default() }).unwrap();
        let g = inst.graph();
        let plan = ball_plan(width, radius, PromptKind::Vertex, 10_000).unwrap();
        let ex = execute_plan(g, Prompt::Vertex((seed % g.n() as u64) as u32), &plan, ExecOptions::default()).unwrap();
        let verts: Vec<u32> = ex.vertices(&inst.evaluation()).iter().flatten().copied().collect();
        let mut distinct = verts.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assume!(first_cycle_position(g, &ex).is_none() && distinct.len() == verts.len() && verts.len() == ex.len());
        let parents = ex.parents();
        for i in 0..verts.len() {
            prop_assert_eq!(ex.degrees()[i], Some(g.neighbors(verts[i]).len() as u32));
            for j in 0..i {
                let linked = parents[i] as usize == j + 1 || parents[j] as usize == i + 1;
                prop_assert_eq!(g.has_edge(verts[i], verts[j]), linked, "positions {} {}", i + 1, j + 1);
            }
        }
    }

    #[test]
    fn wilson_contains_point_estimate(k in 0u64..500, extra in 0u64..500) {
        let n = k + extra + 1;
        let (lo, hi) = wilson_interval(k, n, Z95);
        let p = k as f64 / n as f64;
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }
}

#[test]
fn ball_plan_sizes() {
    for (d, r) in [(2u32, 1u32), (3, 2), (4, 3)] {
        let p = ball_plan(d, r, PromptKind::Vertex, 1_000_000).unwrap();
        let want: u64 = (1..=r).map(|i| (d as u64).pow(i)).sum();
        assert_eq!(p.len() as u64, want);
    }
    assert!(ball_plan(10, 10, PromptKind::Vertex, 1000).is_err());
}

#[test]
fn exact_dp_conserves_mass() {
    for (r, delta) in [(1, 3), (2, 3), (1, 4)] {
        for back in [false, true] {
            let bp = small_bp(r, delta, true);
            let dp = exact_coupled_walk::<ExactProb>(&bp, 6, back).unwrap();
            let total = dp.failure.clone() + dp.converged.clone() + dp.running.clone();
            assert!(total.is_one(), "r={r} δ={delta} back={back}: {total}");
            let by_step: ExactProb = dp.failure_by_step.iter().cloned().sum();
            assert_eq!(by_step, dp.failure);
            let fl = exact_coupled_walk::<f64>(&bp, 6, back).unwrap();
            assert!((fl.failure - dp.failure.to_f64().unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn json_round_trips() {
    let t = ClusterTree::build(3, 4).unwrap();
    assert_eq!(ClusterTree::from_json(&t.to_json()).unwrap(), t);

    let bp = small_bp(2, 3, true);
    let back = Blueprint::from_json(&bp.to_json()).unwrap();
    assert_eq!(back.content_hash(), bp.content_hash());
    assert_eq!(back.to_json(), bp.to_json());

    let plan = ball_plan(3, 2, PromptKind::Edge, 1000).unwrap();
    assert_eq!(QueryPlan::from_json(PromptKind::Edge, &plan.to_json()).unwrap(), plan);
}

#[test]
fn instance_binary_round_trip() {
    let bp = small_bp(1, 3, true);
    let inst = InstanceGraph::sample(&bp, 11, &SamplerConfig::default()).unwrap();
    let mut buf = Vec::new();
    write_instance(&inst, &mut buf).unwrap();
    let back = read_instance(buf.as_slice()).unwrap();
    assert_eq!(back, inst);
    buf[0] ^= 0xff;
    assert!(read_instance(buf.as_slice()).is_err());
}
