//! Label-based coupling of two random walks on the blueprint.
//!
//! One walk starts on a significant edge (`C0^(0)` → `C0^(1)`), the other
//! on a misleading one (`C0^(0)` → `C1^(0)`). While the walks sit in
//! different clusters, edges with the same key (tree label, main matching,
//! dummy) are paired; once they share a cluster they move together. The
//! coupling fails when the walks reach clusters of different degree,
//! because then a degree sequence tells them apart.
//!
//! With back steps enabled each walk also remembers the cluster it came
//! from and may step back along the edge it used; when the two back edges
//! have different keys they are paired with each other ("special" slot).

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::blueprint::{Blueprint, BlueprintError, BpCluster, EdgeKey};
use crate::cluster_tree::{find_critical_subsequence, ClusterId, CriticalMatcher, LabelExp, TreeError};
use crate::rng::stream_rng;
use crate::stats::wilson_interval;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error(transparent)]
    Blueprint(#[from] BlueprintError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("step requested on a walk that already failed")]
    NotRunning,
    #[error("clusters {0:?} and {1:?} have equal degree but different label multisets")]
    KeyMismatch(BpCluster, BpCluster),
    #[error("cluster {0:?} has no edge to its predecessor {1:?}")]
    MissingBackEdge(BpCluster, BpCluster),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "step")]
pub enum WalkStatus {
    Running,
    Converged(u32),
    Failed(u32),
    Completed,
}

/// A joint move: where each walk goes, and under which key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub weight: u64,
    pub to: [BpCluster; 2],
    pub keys: [EdgeKey; 2],
    pub kind: SlotKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Common,
    Back,
    Special,
}

fn key_towards(bp: &Blueprint, from: BpCluster, to: BpCluster) -> Result<EdgeKey, CouplingError> {
    bp.outgoing(from)?
        .iter()
        .find(|o| o.to == to)
        .map(|o| o.key)
        .ok_or(CouplingError::MissingBackEdge(from, to))
}

/// All joint moves out of `(pos, prev)` with their multiplicities. The
/// weights sum to the common degree of the two positions.
pub fn joint_slots(
    bp: &Blueprint,
    pos: [BpCluster; 2],
    prev: [Option<BpCluster>; 2],
    back_steps: bool,
) -> Result<Vec<Slot>, CouplingError> {
    let back = match (back_steps, prev) {
        (true, [Some(p0), Some(p1)]) => Some(([p0, p1], [key_towards(bp, pos[0], p0)?, key_towards(bp, pos[1], p1)?])),
        _ => None,
    };
    let mut slots = Vec::new();
    if pos[0] == pos[1] {
        // identity coupling: pair edges by destination
        for o in bp.outgoing(pos[0])? {
            let mut w = o.label;
            if let Some((p, _)) = back {
                w = w.saturating_sub(u64::from(o.to == p[0]));
                if p[0] != p[1] {
                    w = w.saturating_sub(u64::from(o.to == p[1]));
                }
            }
            slots.push(Slot { weight: w, to: [o.to, o.to], keys: [o.key, o.key], kind: SlotKind::Common });
        }
        if let Some((p, k)) = back {
            slots.push(Slot { weight: 1, to: p, keys: k, kind: SlotKind::Back });
            if p[0] != p[1] {
                slots.push(Slot { weight: 1, to: [p[1], p[0]], keys: [k[1], k[0]], kind: SlotKind::Special });
            }
        }
    } else {
        let out1 = bp.outgoing(pos[1])?;
        for o in bp.outgoing(pos[0])? {
            let twin = out1
                .iter()
                .find(|x| x.key == o.key && x.label == o.label)
                .ok_or(CouplingError::KeyMismatch(pos[0], pos[1]))?;
            let mut w = o.label;
            if let Some((_, k)) = back {
                w = w.saturating_sub(u64::from(o.key == k[0]));
                if k[0] != k[1] {
                    w = w.saturating_sub(u64::from(o.key == k[1]));
                }
            }
            slots.push(Slot { weight: w, to: [o.to, twin.to], keys: [o.key, o.key], kind: SlotKind::Common });
        }
        if let Some((p, k)) = back {
            slots.push(Slot { weight: 1, to: p, keys: k, kind: SlotKind::Back });
            if k[0] != k[1] {
                let to0 = bp.neighbor_by_key(pos[0], k[1])?.ok_or(CouplingError::KeyMismatch(pos[0], pos[1]))?;
                let to1 = bp.neighbor_by_key(pos[1], k[0])?.ok_or(CouplingError::KeyMismatch(pos[0], pos[1]))?;
                slots.push(Slot { weight: 1, to: [to0, to1], keys: [k[1], k[0]], kind: SlotKind::Special });
            }
        }
    }
    Ok(slots)
}

#[derive(Debug, Clone)]
pub struct CoupledWalk<'a> {
    bp: &'a Blueprint,
    back_steps: bool,
    pos: [BpCluster; 2],
    prev: [Option<BpCluster>; 2],
    step: u32,
    failed_at: Option<u32>,
    converged_at: Option<u32>,
    critical: CriticalMatcher,
    critical_done_at: Option<u32>,
    labels: Vec<LabelExp>,
    dummy_at: Option<u32>,
    special_steps: u32,
    post_dummy_mismatches: u32,
}

impl<'a> CoupledWalk<'a> {
    /// Walk 0 is at `C0^(1)` having arrived from `C0^(0)` over the main
    /// matching; walk 1 is at `C1^(0)` having arrived from `C0^(0)` over
    /// the tree edge.
    pub fn start(bp: &'a Blueprint, back_steps: bool) -> Self {
        let (root, sig) = bp.significant_pair();
        let (_, mis) = bp.misleading_pair();
        let mut w = Self {
            bp,
            back_steps,
            pos: [sig, mis],
            prev: [Some(root), Some(root)],
            step: 0,
            failed_at: None,
            converged_at: None,
            critical: CriticalMatcher::new(bp.params().r),
            critical_done_at: None,
            labels: Vec::new(),
            dummy_at: None,
            special_steps: 0,
            post_dummy_mismatches: 0,
        };
        if w.bp.degree(sig).ok() != w.bp.degree(mis).ok() {
            w.failed_at = Some(0);
        }
        if w.critical.complete() {
            w.critical_done_at = Some(0);
        }
        w
    }

    pub fn positions(&self) -> [BpCluster; 2] {
        self.pos
    }

    pub fn previous(&self) -> [Option<BpCluster>; 2] {
        self.prev
    }

    pub fn step_count(&self) -> u32 {
        self.step
    }

    fn identical(&self) -> bool {
        self.pos[0] == self.pos[1] && (!self.back_steps || self.prev[0] == self.prev[1])
    }

    pub fn status(&self) -> WalkStatus {
        match (self.failed_at, self.converged_at) {
            (Some(s), _) => WalkStatus::Failed(s),
            (None, Some(s)) => WalkStatus::Converged(s),
            _ => WalkStatus::Running,
        }
    }

    /// Advance both walks by one coupled step.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Slot, CouplingError> {
        if self.failed_at.is_some() {
            return Err(CouplingError::NotRunning);
        }
        let slots = joint_slots(self.bp, self.pos, self.prev, self.back_steps)?;
        let total: u64 = slots.iter().map(|s| s.weight).sum();
        let mut x = rng.gen_range(0..total);
        let slot = *slots
            .iter()
            .find(|s| {
                if x < s.weight {
                    true
                } else {
                    x -= s.weight;
                    false
                }
            })
            .expect("weights cover the draw");
        let was_apart = self.pos[0] != self.pos[1];

        self.prev = [Some(self.pos[0]), Some(self.pos[1])];
        self.pos = slot.to;
        self.step += 1;

        let absorbed = self.dummy_at.is_some();
        if self.dummy_at.is_none() && slot.to == [self.bp.dummy(); 2] {
            self.dummy_at = Some(self.step);
        }
        if was_apart || slot.kind == SlotKind::Special {
            match (slot.kind, slot.keys[0]) {
                (SlotKind::Special, _) => {
                    self.special_steps += 1;
                    self.critical.feed_wildcard();
                }
                (SlotKind::Common, EdgeKey::Tree(l)) => {
                    self.labels.push(l);
                    self.critical.feed(l);
                }
                (SlotKind::Back, EdgeKey::Tree(l)) if slot.keys[1] == EdgeKey::Tree(l) => {
                    self.labels.push(l);
                    self.critical.feed(l);
                }
                _ => {}
            }
            if self.critical_done_at.is_none() && self.critical.complete() {
                self.critical_done_at = Some(self.step);
            }
        }
        if self.bp.degree(self.pos[0])? != self.bp.degree(self.pos[1])? {
            self.failed_at = Some(self.step);
            if absorbed {
                self.post_dummy_mismatches += 1;
            }
        } else if self.converged_at.is_none() && self.identical() {
            self.converged_at = Some(self.step);
        }
        Ok(slot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CouplingConfig {
    pub length: u32,
    pub back_steps: bool,
    pub trials: u64,
    pub seed: u64,
    /// Failures at steps `≤ ell` are counted separately from the tail.
    pub ell: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    pub status: WalkStatus,
    pub critical: u32,
    pub critical_done_at: Option<u32>,
    pub dummy_at: Option<u32>,
    pub special_steps: u32,
    /// Degree mismatch after both walks were in `D` together (0 or 1).
    pub post_dummy_mismatches: u32,
    /// Tree labels traversed while the walks were apart.
    #[serde(skip)]
    pub labels: Vec<LabelExp>,
}

pub fn run_trial(bp: &Blueprint, cfg: &CouplingConfig, trial: u64) -> Result<TrialOutcome, CouplingError> {
    let mut rng = stream_rng(cfg.seed, trial);
    let mut w = CoupledWalk::start(bp, cfg.back_steps);
    while w.failed_at.is_none() && w.step < cfg.length {
        w.step(&mut rng)?;
    }
    let status = match w.status() {
        WalkStatus::Running => WalkStatus::Completed,
        s => s,
    };
    Ok(TrialOutcome {
        trial,
        status,
        critical: w.critical.matched(),
        critical_done_at: w.critical_done_at,
        dummy_at: w.dummy_at,
        special_steps: w.special_steps,
        post_dummy_mismatches: w.post_dummy_mismatches,
        labels: w.labels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureEstimate {
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci95: (f64, f64),
    pub failures_within_ell: u64,
    pub failures_after_ell: u64,
    pub converged: u64,
    pub failure_steps: BTreeMap<u32, u64>,
    pub convergence_steps: BTreeMap<u32, u64>,
    pub critical_counts: BTreeMap<u32, u64>,
    /// Walks whose labels contain a full critical subsequence within `ell`.
    pub critical_within_ell: u64,
    /// Audits, meaningful without back steps; all should be zero.
    pub failures_not_distinguishing: u64,
    pub failures_without_critical: u64,
    pub post_dummy_mismatches: u64,
}

pub fn estimate_failure_probability(bp: &Blueprint, cfg: &CouplingConfig) -> Result<(FailureEstimate, Vec<TrialOutcome>), CouplingError> {
    let outcomes: Vec<TrialOutcome> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(bp, cfg, t)).collect::<Result<_, _>>()?;
    let tree = bp.tree();
    let mut est = FailureEstimate {
        trials: cfg.trials,
        failures: 0,
        rate: 0.0,
        ci95: (0.0, 1.0),
        failures_within_ell: 0,
        failures_after_ell: 0,
        converged: 0,
        failure_steps: BTreeMap::new(),
        convergence_steps: BTreeMap::new(),
        critical_counts: BTreeMap::new(),
        critical_within_ell: 0,
        failures_not_distinguishing: 0,
        failures_without_critical: 0,
        post_dummy_mismatches: 0,
    };
    for o in &outcomes {
        *est.critical_counts.entry(o.critical).or_default() += 1;
        est.post_dummy_mismatches += o.post_dummy_mismatches as u64;
        if matches!(o.critical_done_at, Some(s) if s <= cfg.ell) {
            est.critical_within_ell += 1;
        }
        match o.status {
            WalkStatus::Failed(s) => {
                est.failures += 1;
                *est.failure_steps.entry(s).or_default() += 1;
                if s <= cfg.ell {
                    est.failures_within_ell += 1;
                } else {
                    est.failures_after_ell += 1;
                }
                if !cfg.back_steps {
                    let idx = tree.distinguishing_index(&o.labels, ClusterId(0), ClusterId(1))?;
                    if idx != Some(o.labels.len()) {
                        est.failures_not_distinguishing += 1;
                    }
                    if o.critical < bp.params().r || find_critical_subsequence(&o.labels, bp.params().r).is_none() {
                        est.failures_without_critical += 1;
                    }
                }
            }
            WalkStatus::Converged(s) => {
                est.converged += 1;
                *est.convergence_steps.entry(s).or_default() += 1;
            }
            _ => {}
        }
    }
    est.rate = est.failures as f64 / cfg.trials.max(1) as f64;
    est.ci95 = wilson_interval(est.failures, cfg.trials, 1.959_963_984_540_054);
    Ok((est, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::{parse_rational, Params, Regime};
    use crate::rng::rng_from_seed;

    fn bp(r: u32, delta: u64) -> Blueprint {
        let c = parse_rational("0.9").unwrap();
        let n0 = crate::blueprint::min_feasible_n0(c, r, delta).unwrap();
        Blueprint::build(Params::derive(c, r, delta, n0, Regime::Desk).unwrap(), true).unwrap()
    }

    #[test]
    fn slot_weights_sum_to_degree() {
        let b = bp(2, 4);
        let (root, sig) = b.significant_pair();
        let (_, mis) = b.misleading_pair();
        for back in [false, true] {
            let slots = joint_slots(&b, [sig, mis], [Some(root), Some(root)], back).unwrap();
            let total: u64 = slots.iter().map(|s| s.weight).sum();
            assert_eq!(total, b.degree(sig).unwrap());
            assert_eq!(slots.iter().any(|s| s.kind == SlotKind::Special), back);
        }
    }

    #[test]
    fn first_special_step_swaps_matching_and_tree_edge() {
        let b = bp(2, 4);
        let (root, sig) = b.significant_pair();
        let (_, mis) = b.misleading_pair();
        let slots = joint_slots(&b, [sig, mis], [Some(root), Some(root)], true).unwrap();
        let special = slots.iter().find(|s| s.kind == SlotKind::Special).unwrap();
        assert_eq!(special.keys, [EdgeKey::Tree(LabelExp(1)), EdgeKey::Matching]);
    }

    #[test]
    fn walks_agree_until_failure_or_merge() {
        let b = bp(1, 3);
        let mut rng = rng_from_seed(1);
        for _ in 0..200 {
            let mut w = CoupledWalk::start(&b, false);
            for _ in 0..20 {
                if w.status() != WalkStatus::Running {
                    break;
                }
                w.step(&mut rng).unwrap();
                let p = w.positions();
                if w.status() == WalkStatus::Running {
                    assert_eq!(b.degree(p[0]).unwrap(), b.degree(p[1]).unwrap());
                }
            }
        }
    }

    #[test]
    fn r_zero_fails_immediately() {
        let b = bp(0, 3);
        let w = CoupledWalk::start(&b, false);
        assert_eq!(w.status(), WalkStatus::Failed(0));
    }
}
