//! Exhaustive structural checks on cluster trees and blueprints. Every
//! check reports where it failed, so a corrupted tree points at the broken
//! property.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::blueprint::{min_feasible_n0, Blueprint, BlueprintError, EdgeKind, Params, Regime};
use crate::cluster_tree::{find_critical_subsequence, ClusterId, ClusterTree, LabelExp, TreeError};
use crate::{BpCluster, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub locus: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub claim: &'static str,
    pub r: u32,
    pub delta: u64,
    /// Number of objects (clusters, pairs, edges) examined.
    pub examined: u64,
    pub violations: Vec<Violation>,
}

impl CheckResult {
    fn new(claim: &'static str, r: u32, delta: u64) -> Self {
        Self { claim, r, delta, examined: 0, violations: Vec::new() }
    }

    fn expect(&mut self, ok: bool, locus: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.examined += 1;
        if !ok {
            self.violations.push(Violation { locus: locus(), detail: detail() });
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    /// `(r, δ)` pairs whose blueprint checks were skipped, with the reason.
    pub skipped: Vec<(u32, u64, String)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn claim_ids(&self) -> Vec<&'static str> {
        let mut ids: Vec<_> = self.checks.iter().map(|c| c.claim).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Checks that only look at the tree.
pub fn verify_tree(tree: &ClusterTree) -> Vec<CheckResult> {
    let (r, delta) = (tree.r(), tree.delta());
    let mut out = Vec::new();
    let deg = |id| tree.tree_degree(id).unwrap_or(u64::MAX);
    let nodes = tree.nodes();
    let loc = |id: ClusterId| move || format!("C{}", id.0);

    let mut c = CheckResult::new("upward-label", r, delta);
    for n in nodes {
        for &(l, child) in &n.children {
            let up = nodes[child.index()].up;
            c.expect(up == Some(LabelExp(l.0 + 1)), loc(child), || format!("down δ^{} but up {up:?}", l.0));
        }
    }
    out.push(c);

    let mut c = CheckResult::new("parent-label-bound", r, delta);
    for n in nodes.iter().filter(|n| n.parent.is_some()) {
        let up = n.up.map_or(u32::MAX, |l| l.0);
        c.expect(up <= n.color + 1, loc(n.id), || format!("d_p = δ^{up} > δ^{}", n.color + 1));
    }
    out.push(c);

    let mut c = CheckResult::new("non-leaf-degree", r, delta);
    for n in nodes.iter().filter(|n| !n.children.is_empty()) {
        c.expect(deg(n.id) == tree.non_leaf_degree(), loc(n.id), || format!("degree {} ≠ {}", deg(n.id), tree.non_leaf_degree()));
    }
    out.push(c);

    let mut c = CheckResult::new("max-degree", r, delta);
    let max = nodes.iter().map(|n| deg(n.id)).max().unwrap_or(0);
    c.expect(max == tree.max_tree_degree(), || "tree".into(), || format!("max degree {max} ≠ δ^(r+1) = {}", tree.max_tree_degree()));
    out.push(c);

    let mut c = CheckResult::new("equal-degree-same-labels", r, delta);
    let mut by_degree: BTreeMap<u64, Vec<ClusterId>> = BTreeMap::new();
    for n in nodes {
        by_degree.entry(deg(n.id)).or_default().push(n.id);
    }
    for (d, ids) in &by_degree {
        let first = tree.label_multiset(ids[0]).unwrap_or_default();
        for &id in &ids[1..] {
            let m = tree.label_multiset(id).unwrap_or_default();
            c.expect(m == first, || format!("C{} vs C{}", ids[0].0, id.0), || format!("degree {d}: labels {first:?} vs {m:?}"));
        }
    }
    out.push(c);

    let mut c = CheckResult::new("child-color", r, delta);
    for n in nodes {
        for &(l, child) in &n.children {
            if n.id == tree.root() && child == tree.base_child() {
                continue;
            }
            let want = l.0.max(n.color + 1);
            let got = nodes[child.index()].color;
            c.expect(got == want, loc(child), || format!("color {got}, expected max({}, {}) = {want}", l.0, n.color + 1));
        }
    }
    out.push(c);

    let mut c = CheckResult::new("subtree-by-color-and-parent-label", r, delta);
    let mut classes: BTreeMap<(u32, Option<LabelExp>), Vec<ClusterId>> = BTreeMap::new();
    for n in nodes.iter().filter(|n| n.id != tree.root() && n.id != tree.base_child()) {
        classes.entry((n.color, n.up)).or_default().push(n.id);
    }
    for ids in classes.values() {
        for &id in &ids[1..] {
            let same = tree.subtree_identical(ids[0], id).unwrap_or(false);
            c.expect(same, || format!("C{} vs C{}", ids[0].0, id.0), || "subtrees differ".into());
        }
    }
    out.push(c);

    let mut c = CheckResult::new("large-label-subtree", r, delta);
    for a in nodes {
        for b in nodes {
            let tau = a.color.max(b.color) + 2;
            let out_a = tree.outgoing(a.id).unwrap_or_default();
            let out_b = tree.outgoing(b.id).unwrap_or_default();
            for &(l, x) in out_a.iter().filter(|(l, _)| l.0 >= tau) {
                if let Some(&(_, y)) = out_b.iter().find(|(m, _)| *m == l) {
                    let same = tree.subtree_identical(x, y).unwrap_or(false);
                    c.expect(same, || format!("C{} -δ^{}-> C{} vs C{} -> C{}", a.id.0, l.0, x.0, b.id.0, y.0), || "subtrees differ".into());
                }
            }
        }
    }
    out.push(c);
    out
}

/// Checks on a built blueprint (sizes, labels, degrees, balance).
pub fn verify_blueprint(bp: &Blueprint) -> Vec<CheckResult> {
    let p = bp.params();
    let tree = bp.tree();
    let (r, delta) = (p.r, p.delta);
    let big = p.big_delta_r();
    let mut out = Vec::new();
    let deg = |c: BpCluster| bp.degree(c).unwrap_or(u64::MAX);
    let loc = |c: BpCluster| move || format!("B{}", c.0);
    let non_dummy: Vec<BpCluster> = bp.clusters().filter(|&c| c != bp.dummy()).collect();

    let mut c = CheckResult::new("blueprint-non-leaf-degree", r, delta);
    let want = tree.non_leaf_degree() + big + 1 + u64::from(bp.include_main_matching());
    for &x in &non_dummy {
        let (_, node) = bp.tree_coordinate(x).expect("tree cluster");
        if !tree.is_leaf(node).unwrap_or(true) {
            c.expect(deg(x) == want, loc(x), || format!("degree {} ≠ {want}", deg(x)));
        }
    }
    out.push(c);

    let mut c = CheckResult::new("blueprint-equal-degree-same-labels", r, delta);
    let mut by_degree: BTreeMap<u64, Vec<BpCluster>> = BTreeMap::new();
    for x in bp.clusters() {
        by_degree.entry(deg(x)).or_default().push(x);
    }
    let labels = |x: BpCluster| {
        let mut v: Vec<u64> = bp.outgoing(x).map(|o| o.iter().map(|o| o.label).collect()).unwrap_or_default();
        v.sort_unstable();
        v
    };
    for ids in by_degree.values() {
        for &x in &ids[1..] {
            c.expect(labels(x) == labels(ids[0]), || format!("B{} vs B{}", ids[0].0, x.0), || format!("{:?} vs {:?}", labels(ids[0]), labels(x)));
        }
    }
    out.push(c);

    let mut c = CheckResult::new("dummy-degree", r, delta);
    let dd = deg(bp.dummy());
    // each D-side label is a rounded average, off by at most 1/2
    let exact = Rational::new((big as i64 + 1) * 2 * p.tree_vertices as i64, p.dummy_size as i64);
    let slack = Rational::new(non_dummy.len() as i64, 2);
    let off = (Rational::from_integer(dd as i64) - exact).abs();
    c.expect(off <= slack, || "D".into(), || format!("d(D) = {dd}, exact {exact}, slack {slack}"));
    for &x in &non_dummy {
        c.expect(deg(x) < dd, loc(x), || format!("degree {} not below d(D) = {dd}", deg(x)));
        let to_d = bp.outgoing(x).ok().and_then(|o| o.iter().find(|o| o.to == bp.dummy()).map(|o| o.label));
        c.expect(to_d == Some(big + 1), loc(x), || format!("d(C, D) = {to_d:?}"));
    }
    out.push(c);

    let mut c = CheckResult::new("block-balance", r, delta);
    for e in bp.edges() {
        let (sx, sy) = (bp.size(e.from).unwrap_or(0), bp.size(e.to).unwrap_or(0));
        let (fx, fy) = (sx as u128 * e.label_forward as u128, sy as u128 * e.label_backward as u128);
        match e.kind {
            EdgeKind::Dummy => {
                // |D|·d(D, C) within |D|/2 of |C|·d(C, D)
                let gap = fx.abs_diff(fy);
                c.expect(2 * gap <= sy as u128, || format!("B{}-D", e.from.0), || format!("{fx} vs {fy}"));
            }
            _ => c.expect(fx == fy, || format!("B{}-B{}", e.from.0, e.to.0), || format!("{fx} vs {fy}")),
        }
        if e.kind == EdgeKind::Matching {
            c.expect(e.label_forward == 1 && e.label_backward == 1, || format!("B{}-B{}", e.from.0, e.to.0), || "matching label ≠ 1".into());
        }
    }
    let matching = bp.edges().iter().filter(|e| e.kind == EdgeKind::Matching).count();
    let want = if bp.include_main_matching() { tree.len() } else { 0 };
    c.expect(matching == want, || "matching".into(), || format!("{matching} matching edges, expected {want}"));
    out.push(c);

    let mut c = CheckResult::new("cluster-sizes", r, delta);
    for &x in &non_dummy {
        let (copy, node) = bp.tree_coordinate(x).expect("tree cluster");
        let n = &tree.nodes()[node.index()];
        let size = bp.size(x).unwrap_or(0);
        match n.parent {
            None => c.expect(size == p.n0, loc(x), || format!("root size {size} ≠ N0")),
            Some(par) => {
                let ps = bp.size(bp.cluster(copy, par)).unwrap_or(0);
                c.expect(size * delta == ps, loc(x), || format!("size {size}, parent {ps}"));
            }
        }
    }
    let n_one: u64 = non_dummy.iter().filter(|&&x| bp.tree_coordinate(x).map(|t| t.0) == Some(1)).map(|&x| bp.size(x).unwrap_or(0)).sum();
    c.expect(n_one == p.tree_vertices, || "tree 1".into(), || format!("Σ|C| = {n_one} ≠ N = {}", p.tree_vertices));
    let d_target = p.epsilon * Rational::from_integer(p.tree_vertices as i64);
    let dsz = p.dummy_size as i64;
    c.expect(
        dsz % 2 == 0 && (Rational::from_integer(dsz / 2) - d_target).abs() <= Rational::new(1, 2) || dsz == 2,
        || "D".into(),
        || format!("|D| = {dsz}, 2εN = {}", d_target * Rational::from_integer(2)),
    );
    out.push(c);

    let mut c = CheckResult::new("tree-size-bound", r, delta);
    let n = BigRational::from_integer((p.tree_vertices as i64).into());
    let finite: BigRational = p.tree_vertex_bound();
    c.expect(n <= finite, || "N".into(), || format!("N = {n} > {finite}"));
    if let Some(closed) = p.tree_vertex_closed_bound::<BigRational>() {
        c.expect(n <= closed, || "N".into(), || format!("N = {n} > closed form {closed}"));
    }
    out.push(c);

    let mut c = CheckResult::new("matching-toggle", r, delta);
    if let Ok(other) = Blueprint::build(p.clone(), !bp.include_main_matching()) {
        let strip = |b: &Blueprint| b.edges().iter().filter(|e| e.kind != EdgeKind::Matching).cloned().collect::<Vec<_>>();
        c.expect(strip(bp) == strip(&other) && bp.sizes() == other.sizes(), || "blueprint".into(), || "non-matching structure differs".into());
    }
    out.push(c);
    out
}

/// Tree checks for every `(r, δ)` in range, and blueprint checks (both
/// variants) at the smallest feasible `N0`. `mutate` corrupts one upward
/// label of the named tree before checking.
pub fn verify_all(
    rs: RangeInclusive<u32>,
    deltas: RangeInclusive<u64>,
    c: Rational,
    mutate: Option<Mutation>,
) -> Result<VerifyReport, TreeError> {
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for r in rs {
        for delta in deltas.clone() {
            let mut tree = ClusterTree::build(r, delta)?;
            if let Some(m) = mutate.filter(|m| m.r == r && m.delta == delta) {
                tree = tree.with_upward_label(m.cluster, m.up)?;
            }
            checks.extend(verify_tree(&tree));
            let params = min_feasible_n0(c, r, delta).and_then(|n0| Params::derive(c, r, delta, n0, Regime::Desk));
            match params {
                Ok(params) => {
                    for mm in [true, false] {
                        match Blueprint::build(params.clone(), mm) {
                            Ok(bp) => checks.extend(verify_blueprint(&bp)),
                            Err(e) => skipped.push((r, delta, e.to_string())),
                        }
                    }
                }
                Err(BlueprintError::Tree(e)) => return Err(e),
                Err(e) => skipped.push((r, delta, e.to_string())),
            }
        }
    }
    Ok(VerifyReport { checks, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mutation {
    pub r: u32,
    pub delta: u64,
    pub cluster: ClusterId,
    pub up: LabelExp,
}

/// Whether positions `i_1 < … < i_r` with `ℓ_{i_j} ≤ δ^j` exist, by trying
/// every subset.
pub fn critical_subsequence_exhaustive(labels: &[LabelExp], r: u32) -> bool {
    fn go(labels: &[LabelExp], from: usize, j: u32, r: u32) -> bool {
        if j > r {
            return true;
        }
        (from..labels.len()).any(|i| labels[i].0 <= j && go(labels, i + 1, j + 1, r))
    }
    go(labels, 0, 1, r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalSweep {
    pub r: u32,
    pub delta: u64,
    pub max_len: usize,
    pub sequences: u64,
    pub distinguishing: u64,
    /// Distinguishing sequences without a critical subsequence.
    pub counterexamples: Vec<Vec<u32>>,
    /// Sequences where greedy and exhaustive search disagree.
    pub greedy_mismatches: Vec<Vec<u32>>,
}

/// All label sequences of length ≤ `max_len` over exponents `0..=r+1`:
/// every one that distinguishes `C0` from `C1` must contain a critical
/// subsequence.
pub fn critical_subsequence_sweep(r: u32, delta: u64, max_len: usize) -> Result<CriticalSweep, TreeError> {
    let tree = ClusterTree::build(r, delta)?;
    let k = r + 2;
    let mut sweep = CriticalSweep {
        r,
        delta,
        max_len,
        sequences: 0,
        distinguishing: 0,
        counterexamples: Vec::new(),
        greedy_mismatches: Vec::new(),
    };
    for len in 0..=max_len {
        let total = (k as u64).pow(len as u32);
        for code in 0..total {
            let mut x = code;
            let labels: Vec<LabelExp> = (0..len)
                .map(|_| {
                    let l = LabelExp((x % k as u64) as u32);
                    x /= k as u64;
                    l
                })
                .collect();
            sweep.sequences += 1;
            let greedy = find_critical_subsequence(&labels, r).is_some();
            if greedy != critical_subsequence_exhaustive(&labels, r) {
                sweep.greedy_mismatches.push(labels.iter().map(|l| l.0).collect());
            }
            if tree.is_distinguishing(&labels, tree.root(), tree.base_child())? {
                sweep.distinguishing += 1;
                if !greedy {
                    sweep.counterexamples.push(labels.iter().map(|l| l.0).collect());
                }
            }
        }
    }
    Ok(sweep)
}
