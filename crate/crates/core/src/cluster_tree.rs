//! The labelled cluster tree `T_r`.
//!
//! Every edge carries two labels, both powers of `δ`: the downward label
//! `δ^i` (parent → child) and the upward label `δ^{i+1}` (child → parent).
//! Labels are stored as exponents; [`LabelExp::value`] turns them back into
//! integers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClusterId(pub u32);

impl ClusterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A label `δ^e`, stored as its exponent `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelExp(pub u32);

impl LabelExp {
    pub fn value(self, delta: u64) -> u64 {
        delta.pow(self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(u64),
    #[error("labels overflow u64 for r = {r}, delta = {delta}")]
    LabelOverflow { r: u32, delta: u64 },
    #[error("unknown cluster {0:?}")]
    UnknownCluster(ClusterId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterNode {
    pub id: ClusterId,
    pub parent: Option<ClusterId>,
    /// Exponent of the upward label `d(C, p_C)`.
    pub up: Option<LabelExp>,
    /// `(downward label, child)`, ascending by label.
    pub children: Vec<(LabelExp, ClusterId)>,
    /// Iteration in which the cluster was created (`τ`).
    pub color: u32,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterTree {
    r: u32,
    delta: u64,
    nodes: Vec<ClusterNode>,
}

impl ClusterTree {
    /// Build `T_r`. Node ids follow creation order: iteration, then the
    /// parent's id, then ascending label.
    pub fn build(r: u32, delta: u64) -> Result<Self, TreeError> {
        if delta < 2 {
            return Err(TreeError::DeltaTooSmall(delta));
        }
        // Largest label is the upward label δ^{r+1} of a leaf; degree sums
        // stay below 2·δ^{r+1}.
        delta
            .checked_pow(r + 1)
            .and_then(|v| v.checked_mul(4))
            .ok_or(TreeError::LabelOverflow { r, delta })?;

        let mut nodes = vec![
            ClusterNode {
                id: ClusterId(0),
                parent: None,
                up: None,
                children: vec![(LabelExp(0), ClusterId(1))],
                color: 0,
                depth: 0,
            },
            ClusterNode {
                id: ClusterId(1),
                parent: Some(ClusterId(0)),
                up: Some(LabelExp(1)),
                children: Vec::new(),
                color: 0,
                depth: 1,
            },
        ];

        for k in 1..=r {
            let existing = nodes.len();
            for idx in 0..existing {
                let labels: Vec<u32> = if nodes[idx].children.is_empty() {
                    // leaf: every exponent up to k except the one already
                    // used by the edge to the parent
                    let skip = nodes[idx].up.map(|e| e.0);
                    (0..=k).filter(|&i| Some(i) != skip).collect()
                } else {
                    vec![k]
                };
                for i in labels {
                    let id = ClusterId(nodes.len() as u32);
                    let depth = nodes[idx].depth + 1;
                    nodes[idx].children.push((LabelExp(i), id));
                    nodes.push(ClusterNode {
                        id,
                        parent: Some(ClusterId(idx as u32)),
                        up: Some(LabelExp(i + 1)),
                        children: Vec::new(),
                        color: k,
                        depth,
                    });
                }
            }
        }
        for n in &mut nodes {
            n.children.sort();
        }
        Ok(Self { r, delta, nodes })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> ClusterId {
        ClusterId(0)
    }

    /// `C_1`, the first child of the root.
    pub fn base_child(&self) -> ClusterId {
        ClusterId(1)
    }

    pub fn nodes(&self) -> &[ClusterNode] {
        &self.nodes
    }

    pub fn ids(&self) -> impl Iterator<Item = ClusterId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn node(&self, id: ClusterId) -> Result<&ClusterNode, TreeError> {
        self.nodes.get(id.index()).ok_or(TreeError::UnknownCluster(id))
    }

    pub fn is_leaf(&self, id: ClusterId) -> Result<bool, TreeError> {
        Ok(self.node(id)?.children.is_empty())
    }

    pub fn max_depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// All outgoing `(label, neighbour)` pairs: parent edge first, then
    /// children by ascending label.
    pub fn outgoing(&self, id: ClusterId) -> Result<Vec<(LabelExp, ClusterId)>, TreeError> {
        let node = self.node(id)?;
        let mut out = Vec::with_capacity(node.children.len() + 1);
        if let (Some(p), Some(up)) = (node.parent, node.up) {
            out.push((up, p));
        }
        out.extend(node.children.iter().copied());
        Ok(out)
    }

    /// Sorted multiset of outgoing label exponents.
    pub fn label_multiset(&self, id: ClusterId) -> Result<Vec<LabelExp>, TreeError> {
        let mut v: Vec<LabelExp> = self.outgoing(id)?.into_iter().map(|(l, _)| l).collect();
        v.sort();
        Ok(v)
    }

    pub fn neighbor_by_label(&self, id: ClusterId, label: LabelExp) -> Result<Option<ClusterId>, TreeError> {
        Ok(self.outgoing(id)?.into_iter().find(|&(l, _)| l == label).map(|(_, c)| c))
    }

    /// `d_T(C)`, the sum of outgoing labels.
    pub fn tree_degree(&self, id: ClusterId) -> Result<u64, TreeError> {
        Ok(self.outgoing(id)?.iter().map(|(l, _)| l.value(self.delta)).sum())
    }

    /// `d̄_r = Σ_{i=0}^{r} δ^i`, the degree of every non-leaf cluster.
    pub fn non_leaf_degree(&self) -> u64 {
        (0..=self.r).map(|i| self.delta.pow(i)).sum()
    }

    /// `Δ_r = δ^{r+1}`, the largest tree degree.
    pub fn max_tree_degree(&self) -> u64 {
        self.delta.pow(self.r + 1)
    }

    /// Walk `labels` from `start`. Stops early if a label is missing.
    pub fn follow_label_path(&self, start: ClusterId, labels: &[LabelExp]) -> Result<LabelPath, TreeError> {
        let mut clusters = vec![start];
        let mut cur = start;
        for &l in labels {
            match self.neighbor_by_label(cur, l)? {
                Some(next) => {
                    clusters.push(next);
                    cur = next;
                }
                None => return Ok(LabelPath { clusters, truncated: true }),
            }
        }
        Ok(LabelPath { clusters, truncated: false })
    }

    /// First index `i` at which the walks from `a` and `b` along `labels`
    /// reach clusters of different degree (index 0 compares `a` and `b`).
    /// A walk that runs out of matching labels before a mismatch is not
    /// distinguishing.
    pub fn distinguishing_index(&self, labels: &[LabelExp], a: ClusterId, b: ClusterId) -> Result<Option<usize>, TreeError> {
        let pa = self.follow_label_path(a, labels)?;
        let pb = self.follow_label_path(b, labels)?;
        for (i, (&x, &y)) in pa.clusters.iter().zip(pb.clusters.iter()).enumerate() {
            if self.tree_degree(x)? != self.tree_degree(y)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_distinguishing(&self, labels: &[LabelExp], a: ClusterId, b: ClusterId) -> Result<bool, TreeError> {
        Ok(self.distinguishing_index(labels, a, b)?.is_some())
    }

    /// Whether the subtrees rooted at `a` and `b` are identical as labelled
    /// rooted trees (the edge to the parent is ignored).
    pub fn subtree_identical(&self, a: ClusterId, b: ClusterId) -> Result<bool, TreeError> {
        let (na, nb) = (self.node(a)?, self.node(b)?);
        if na.children.len() != nb.children.len() {
            return Ok(false);
        }
        for (&(la, ca), &(lb, cb)) in na.children.iter().zip(nb.children.iter()) {
            if la != lb || !self.subtree_identical(ca, cb)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Overwrite an upward label. Used to build corrupted trees for
    /// negative controls of the verifier.
    pub fn with_upward_label(mut self, id: ClusterId, up: LabelExp) -> Result<Self, TreeError> {
        let node = self.nodes.get_mut(id.index()).ok_or(TreeError::UnknownCluster(id))?;
        node.up = Some(up);
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPath {
    pub clusters: Vec<ClusterId>,
    pub truncated: bool,
}

/// Greedy matcher for critical subsequences: positions `i_1 < … < i_r`
/// with `ℓ_{i_j} ≤ δ^j`. Taking the earliest admissible label is optimal,
/// so it can run online.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CriticalMatcher {
    r: u32,
    matched: u32,
}

impl CriticalMatcher {
    pub fn new(r: u32) -> Self {
        Self { r, matched: 0 }
    }

    /// Offer the next label; returns whether it was taken.
    pub fn feed(&mut self, label: LabelExp) -> bool {
        if self.matched < self.r && label.0 <= self.matched + 1 {
            self.matched += 1;
            true
        } else {
            false
        }
    }

    /// A step that matches any threshold.
    pub fn feed_wildcard(&mut self) -> bool {
        if self.matched < self.r {
            self.matched += 1;
            true
        } else {
            false
        }
    }

    pub fn matched(&self) -> u32 {
        self.matched
    }

    pub fn complete(&self) -> bool {
        self.matched >= self.r
    }
}

pub fn find_critical_subsequence(labels: &[LabelExp], r: u32) -> Option<Vec<usize>> {
    let mut m = CriticalMatcher::new(r);
    let mut picked = Vec::with_capacity(r as usize);
    for (i, &l) in labels.iter().enumerate() {
        if m.complete() {
            break;
        }
        if m.feed(l) {
            picked.push(i);
        }
    }
    m.complete().then_some(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_trees_by_hand() {
        let t0 = ClusterTree::build(0, 3).unwrap();
        assert_eq!(t0.len(), 2);
        assert_eq!(t0.tree_degree(ClusterId(0)).unwrap(), 1);
        assert_eq!(t0.tree_degree(ClusterId(1)).unwrap(), 3);

        let t1 = ClusterTree::build(1, 3).unwrap();
        // C0 -{0}- C1, C0 -{1}- C2, C1 -{0}- C3
        assert_eq!(t1.len(), 4);
        assert_eq!(t1.node(ClusterId(0)).unwrap().children, vec![(LabelExp(0), ClusterId(1)), (LabelExp(1), ClusterId(2))]);
        assert_eq!(t1.node(ClusterId(1)).unwrap().children, vec![(LabelExp(0), ClusterId(3))]);
        assert_eq!(t1.node(ClusterId(3)).unwrap().color, 1);
        assert_eq!(t1.tree_degree(ClusterId(1)).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_delta() {
        assert_eq!(ClusterTree::build(2, 1), Err(TreeError::DeltaTooSmall(1)));
        assert!(matches!(ClusterTree::build(40, 1000), Err(TreeError::LabelOverflow { .. })));
    }

    #[test]
    fn critical_matcher_examples() {
        let l = |v: &[u32]| v.iter().map(|&e| LabelExp(e)).collect::<Vec<_>>();
        assert_eq!(find_critical_subsequence(&l(&[2, 1, 2]), 2), Some(vec![1, 2]));
        assert_eq!(find_critical_subsequence(&l(&[3, 3, 3]), 1), None);
        assert_eq!(find_critical_subsequence(&[], 0), Some(vec![]));
    }

    #[test]
    fn truncated_paths_do_not_distinguish() {
        let t = ClusterTree::build(1, 4).unwrap();
        // C2 is a leaf reached by label 1 from C0; label 3 exists nowhere
        let labels = [LabelExp(3)];
        assert_eq!(t.distinguishing_index(&labels, ClusterId(0), ClusterId(1)).unwrap(), None);
    }
}
