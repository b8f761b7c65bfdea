//! Exact distribution of the coupled walk, by dynamic programming over
//! joint states. Serves as the oracle for the Monte Carlo estimate; the
//! transition table is rebuilt here from the blueprint rather than shared
//! with [`crate::coupling`].

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::blueprint::{Blueprint, BpCluster, EdgeKey};
use crate::coupling::CouplingError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingDp<S> {
    /// Probability of failing within the horizon.
    pub failure: S,
    pub converged: S,
    /// Mass still apart at the horizon.
    pub running: S,
    /// `failure_by_step[t]` = probability of failing at exactly step `t`.
    pub failure_by_step: Vec<S>,
    pub max_states: usize,
}

type State = (BpCluster, BpCluster, BpCluster, BpCluster);

fn back_key(bp: &Blueprint, from: BpCluster, to: BpCluster) -> Result<EdgeKey, CouplingError> {
    bp.outgoing(from)?.iter().find(|o| o.to == to).map(|o| o.key).ok_or(CouplingError::MissingBackEdge(from, to))
}

/// Destination pairs with integer multiplicities.
fn moves(bp: &Blueprint, (p0, p1, q0, q1): State, back: bool) -> Result<BTreeMap<(BpCluster, BpCluster), u64>, CouplingError> {
    let mut out: BTreeMap<(BpCluster, BpCluster), u64> = BTreeMap::new();
    if p0 == p1 {
        for o in bp.outgoing(p0)? {
            let mut c = o.label;
            if back {
                c -= u64::from(o.to == q0).min(c);
                if q0 != q1 {
                    c -= u64::from(o.to == q1).min(c);
                }
            }
            *out.entry((o.to, o.to)).or_default() += c;
        }
        if back {
            *out.entry((q0, q1)).or_default() += 1;
            if q0 != q1 {
                *out.entry((q1, q0)).or_default() += 1;
            }
        }
        return Ok(out);
    }
    let by_key: HashMap<EdgeKey, BpCluster> = bp.outgoing(p1)?.iter().map(|o| (o.key, o.to)).collect();
    let (k0, k1) = if back { (Some(back_key(bp, p0, q0)?), Some(back_key(bp, p1, q1)?)) } else { (None, None) };
    for o in bp.outgoing(p0)? {
        let to1 = *by_key.get(&o.key).ok_or(CouplingError::KeyMismatch(p0, p1))?;
        let mut c = o.label;
        if Some(o.key) == k0 {
            c -= 1.min(c);
        }
        if k0 != k1 && Some(o.key) == k1 {
            c -= 1.min(c);
        }
        *out.entry((o.to, to1)).or_default() += c;
    }
    if let (Some(k0), Some(k1)) = (k0, k1) {
        *out.entry((q0, q1)).or_default() += 1;
        if k0 != k1 {
            let a = bp.outgoing(p0)?.iter().find(|o| o.key == k1).map(|o| o.to).ok_or(CouplingError::KeyMismatch(p0, p1))?;
            let b = by_key.get(&k0).copied().ok_or(CouplingError::KeyMismatch(p0, p1))?;
            *out.entry((a, b)).or_default() += 1;
        }
    }
    Ok(out)
}

pub fn exact_coupled_walk<S: Scalar>(bp: &Blueprint, length: u32, back_steps: bool) -> Result<CouplingDp<S>, CouplingError> {
    let (root, sig) = bp.significant_pair();
    let (_, mis) = bp.misleading_pair();
    let mut failure_by_step = vec![S::zero(); length as usize + 1];
    let mut failure = S::zero();
    let mut converged = S::zero();
    if bp.degree(sig)? != bp.degree(mis)? {
        failure_by_step[0] = S::one();
        return Ok(CouplingDp { failure: S::one(), converged, running: S::zero(), failure_by_step, max_states: 1 });
    }
    let mut cur: BTreeMap<State, S> = BTreeMap::new();
    cur.insert((sig, mis, root, root), S::one());
    let mut max_states = 1;
    for t in 1..=length as usize {
        let mut next: BTreeMap<State, S> = BTreeMap::new();
        for (&st, mass) in &cur {
            let d = bp.degree(st.0)?;
            for (&(a, b), &c) in &moves(bp, st, back_steps)? {
                if c == 0 {
                    continue;
                }
                let p = mass.clone() * S::from_ratio(c as u128, d as u128);
                if bp.degree(a)? != bp.degree(b)? {
                    failure_by_step[t] = failure_by_step[t].clone() + p.clone();
                    failure = failure + p;
                } else if a == b && (!back_steps || st.0 == st.1) {
                    converged = converged + p;
                } else {
                    let key = if back_steps { (a, b, st.0, st.1) } else { (a, b, a, b) };
                    let e = next.entry(key).or_insert_with(S::zero);
                    *e = e.clone() + p;
                }
            }
        }
        max_states = max_states.max(next.len());
        cur = next;
    }
    let running = cur.into_values().fold(S::zero(), |acc, m| acc + m);
    Ok(CouplingDp { failure, converged, running, failure_by_step, max_states })
}
