//! Parameters and the cluster-level blueprint: two copies of `T_r`, a
//! dummy cluster `D` joined to every tree cluster, and the main matching
//! joining each cluster to its twin in the other copy.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cluster_tree::{ClusterId, ClusterTree, LabelExp, TreeError};
use crate::scalar::{from_rational, Scalar};
use crate::Rational;

#[derive(Debug, Error)]
pub enum BlueprintError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parameters violate the asymptotic regime: {0}")]
    Regime(String),
    #[error("infeasible sizes: {0}")]
    Infeasible(String),
    #[error("unknown blueprint cluster {0:?}")]
    UnknownCluster(BpCluster),
    #[error("malformed blueprint: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Enforce the growth conditions on `δ` and `N0`.
    Asymptotic,
    /// Accept small parameters; violated conditions are only flagged.
    Desk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeFlags {
    /// `δ ≥ (3/c + 1)(r + 1)`
    pub delta_large: bool,
    /// `κ²Δ² < N0`
    pub sparse: bool,
}

/// Parse `"0.3"`, `"3/10"` or `"1"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, BlueprintError> {
    let bad = || BlueprintError::InvalidParameter(format!("not a number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let neg = int.starts_with('-');
    let int_v: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
    let scale = 10i64.pow(frac.len() as u32);
    let frac_v: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let mag = int_v.abs() * scale + frac_v;
    Ok(Rational::new(if neg { -mag } else { mag }, scale))
}

fn round_half_up(q: Rational) -> i64 {
    (q + Rational::new(1, 2)).floor().to_integer()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Target approximation ratio `c`.
    pub c: Rational,
    pub r: u32,
    pub delta: u64,
    /// `ε = c / 6`
    pub epsilon: Rational,
    pub n0: u64,
    pub kappa: u64,
    pub kappa_derived: bool,
    /// `Δ = (Δ_r + 1)/ε`, the degree of the dummy cluster.
    pub max_degree: Rational,
    /// `N`, the number of vertices in one tree copy.
    pub tree_vertices: u64,
    pub dummy_size: u64,
    /// `2N + |D|`
    pub n: u64,
    pub regime: Regime,
    pub flags: RegimeFlags,
}

impl Params {
    pub fn derive(c: Rational, r: u32, delta: u64, n0: u64, regime: Regime) -> Result<Self, BlueprintError> {
        if c <= Rational::zero() || c >= Rational::from_integer(1) {
            return Err(BlueprintError::InvalidParameter(format!("c must lie in (0, 1), got {c}")));
        }
        let tree = ClusterTree::build(r, delta)?;
        let depth_scale = delta.pow(tree.max_depth());
        if n0 == 0 || n0 % depth_scale != 0 {
            return Err(BlueprintError::Infeasible(format!(
                "N0 = {n0} must be a positive multiple of delta^{} = {depth_scale}",
                tree.max_depth()
            )));
        }
        let epsilon = c / Rational::from_integer(6);
        let tree_vertices: u64 = tree.nodes().iter().map(|n| n0 / delta.pow(n.depth)).sum();
        let target = Rational::from_integer(2) * epsilon * Rational::from_integer(tree_vertices as i64);
        let dummy_size = (2 * round_half_up(target / Rational::from_integer(2))).max(2) as u64;
        let big_delta_r = tree.max_tree_degree();
        let max_degree = Rational::from_integer(big_delta_r as i64 + 1) / epsilon;
        let kappa = derive_kappa(max_degree.to_f64().unwrap_or(f64::MAX));

        let mut params = Self {
            c,
            r,
            delta,
            epsilon,
            n0,
            kappa,
            kappa_derived: true,
            max_degree,
            tree_vertices,
            dummy_size,
            n: 2 * tree_vertices + dummy_size,
            regime,
            flags: RegimeFlags { delta_large: false, sparse: false },
        };
        params.refresh_flags();
        params.check_feasible(&tree)?;
        params.check_regime()?;
        Ok(params)
    }

    /// Replace the derived `κ`.
    pub fn with_kappa(mut self, kappa: u64) -> Result<Self, BlueprintError> {
        if kappa < 2 {
            return Err(BlueprintError::InvalidParameter("kappa must be at least 2".into()));
        }
        self.kappa = kappa;
        self.kappa_derived = false;
        self.refresh_flags();
        self.check_regime()?;
        Ok(self)
    }

    /// `ℓ = ⌈2 log₂ κ⌉`, the walk length beyond which failures are
    /// attributed to the tail bound.
    pub fn ell(&self) -> u32 {
        (2.0 * (self.kappa as f64).log2()).ceil() as u32
    }

    pub fn big_delta_r(&self) -> u64 {
        self.delta.pow(self.r + 1)
    }

    fn refresh_flags(&mut self) {
        let rhs = (Rational::from_integer(3) / self.c + Rational::from_integer(1)) * Rational::from_integer(self.r as i64 + 1);
        self.flags.delta_large = Rational::from_integer(self.delta as i64) >= rhs;
        // κ²(Δ_r+1)² · den² < N0 · num², with ε = num/den
        let num = *self.epsilon.numer() as u128;
        let den = *self.epsilon.denom() as u128;
        let lhs = (self.kappa as u128)
            .checked_mul(self.big_delta_r() as u128 + 1)
            .and_then(|v| v.checked_mul(den))
            .and_then(|v| v.checked_mul(v));
        let rhs = (self.n0 as u128).checked_mul(num * num);
        self.flags.sparse = matches!((lhs, rhs), (Some(l), Some(r)) if l < r);
    }

    fn check_regime(&self) -> Result<(), BlueprintError> {
        if self.regime == Regime::Asymptotic {
            if !self.flags.delta_large {
                return Err(BlueprintError::Regime(format!("delta = {} < (3/c + 1)(r + 1)", self.delta)));
            }
            if !self.flags.sparse {
                return Err(BlueprintError::Regime("kappa^2 Delta^2 >= N0".into()));
            }
        }
        Ok(())
    }

    fn check_feasible(&self, tree: &ClusterTree) -> Result<(), BlueprintError> {
        let size = |id: ClusterId| self.n0 / self.delta.pow(tree.nodes()[id.index()].depth);
        for node in tree.nodes() {
            for &(l, child) in &node.children {
                let (down, up) = (l.value(self.delta), self.delta.pow(l.0 + 1));
                if down > size(child) || up > size(node.id) {
                    return Err(BlueprintError::Infeasible(format!(
                        "tree edge {:?} -> {:?} needs degrees {down}/{up} on clusters of size {}/{}",
                        node.id,
                        child,
                        size(node.id),
                        size(child)
                    )));
                }
            }
        }
        if self.big_delta_r() + 1 > self.dummy_size {
            return Err(BlueprintError::Infeasible(format!(
                "dummy cluster of size {} cannot absorb degree {}",
                self.dummy_size,
                self.big_delta_r() + 1
            )));
        }
        Ok(())
    }

    /// `N ≤ Σ_{i=0}^{r+1} N0 ((r+1)/δ)^i`: at most `r+1` children per
    /// cluster, sizes shrinking by `δ` per level.
    pub fn tree_vertex_bound<S: Scalar>(&self) -> S {
        let ratio = S::from_ratio(self.r as u128 + 1, self.delta as u128);
        let mut term = S::from_u128(self.n0 as u128);
        let mut total = S::zero();
        for _ in 0..=self.r + 1 {
            total = total + term.clone();
            term = term * ratio.clone();
        }
        total
    }

    /// Closed form `N0 (1 + (r+1)/(δ − (r+1)))`; only meaningful when
    /// `δ > r + 1`.
    pub fn tree_vertex_closed_bound<S: Scalar>(&self) -> Option<S> {
        let k = self.r as u128 + 1;
        let d = self.delta as u128;
        (d > k).then(|| S::from_u128(self.n0 as u128) * (S::one() + S::from_ratio(k, d - k)))
    }

    pub fn epsilon_as<S: Scalar>(&self) -> S {
        from_rational(self.epsilon)
    }
}

/// `κ = Δ^{(1/6) log Δ / log log Δ}` with base-2 logarithms.
pub fn derive_kappa(max_degree: f64) -> u64 {
    let lg = max_degree.log2();
    let llg = lg.log2();
    if !(llg > 0.0) {
        return 2;
    }
    let k = 2f64.powf(lg * lg / (6.0 * llg)).floor();
    if k.is_finite() {
        (k as u64).max(2)
    } else {
        u64::MAX
    }
}

/// Smallest `N0` for which every block of the blueprint can be realised.
pub fn min_feasible_n0(c: Rational, r: u32, delta: u64) -> Result<u64, BlueprintError> {
    let tree = ClusterTree::build(r, delta)?;
    let step = delta.pow(tree.max_depth());
    let floor = delta.checked_pow(2 * r + 1).ok_or(BlueprintError::Infeasible("N0 overflows".into()))?;
    let mut n0 = floor.div_ceil(step) * step;
    for _ in 0..1_000_000 {
        match Params::derive(c, r, delta, n0, Regime::Desk) {
            Ok(_) => return Ok(n0),
            Err(BlueprintError::Infeasible(_)) => n0 += step,
            Err(e) => return Err(e),
        }
    }
    Err(BlueprintError::Infeasible("no feasible N0 found".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BpCluster(pub u32);

impl BpCluster {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterRole {
    Tree { copy: u8, node: ClusterId },
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Tree,
    Matching,
    Dummy,
}

/// How an outgoing edge looks from its source: the label class a
/// local algorithm could in principle tell apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKey {
    Tree(LabelExp),
    Matching,
    ToDummy,
    FromDummy,
}

/// A bipartite block. `from` is the parent (tree), the copy-0 twin
/// (matching) or the tree cluster (dummy).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlueprintEdge {
    pub from: BpCluster,
    pub to: BpCluster,
    /// `d(from, to)`
    pub label_forward: u64,
    /// `d(to, from)`; for dummy blocks the nearest integer to the average.
    pub label_backward: u64,
    pub kind: EdgeKind,
    /// Downward tree label, for tree blocks.
    pub tree_label: Option<LabelExp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outgoing {
    pub to: BpCluster,
    pub label: u64,
    pub key: EdgeKey,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlueprintData {
    params: Params,
    include_main_matching: bool,
    tree: ClusterTree,
    roles: Vec<ClusterRole>,
    sizes: Vec<u64>,
    edges: Vec<BlueprintEdge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "BlueprintData", into = "BlueprintData")]
pub struct Blueprint {
    data: BlueprintData,
    adjacency: Vec<Vec<Outgoing>>,
}

impl TryFrom<BlueprintData> for Blueprint {
    type Error = BlueprintError;
    fn try_from(data: BlueprintData) -> Result<Self, BlueprintError> {
        let n = data.roles.len();
        if data.sizes.len() != n {
            return Err(BlueprintError::Malformed("roles and sizes differ in length".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &data.edges {
            if e.from.index() >= n || e.to.index() >= n {
                return Err(BlueprintError::Malformed(format!("edge {:?}-{:?} out of range", e.from, e.to)));
            }
            let (kf, kb) = match e.kind {
                EdgeKind::Tree => {
                    let l = e.tree_label.ok_or_else(|| BlueprintError::Malformed("tree edge without label".into()))?;
                    (EdgeKey::Tree(l), EdgeKey::Tree(LabelExp(l.0 + 1)))
                }
                EdgeKind::Matching => (EdgeKey::Matching, EdgeKey::Matching),
                EdgeKind::Dummy => (EdgeKey::ToDummy, EdgeKey::FromDummy),
            };
            adjacency[e.from.index()].push(Outgoing { to: e.to, label: e.label_forward, key: kf });
            adjacency[e.to.index()].push(Outgoing { to: e.from, label: e.label_backward, key: kb });
        }
        for list in &mut adjacency {
            list.sort_by_key(|o| (o.key, o.to));
        }
        Ok(Self { data, adjacency })
    }
}

impl From<Blueprint> for BlueprintData {
    fn from(b: Blueprint) -> Self {
        b.data
    }
}

impl Blueprint {
    pub fn build(params: Params, include_main_matching: bool) -> Result<Self, BlueprintError> {
        let tree = ClusterTree::build(params.r, params.delta)?;
        let t = tree.len() as u32;
        let big = params.big_delta_r();
        let mut roles = Vec::with_capacity(2 * t as usize + 1);
        let mut sizes = Vec::with_capacity(2 * t as usize + 1);
        for copy in 0..2u8 {
            for node in tree.nodes() {
                roles.push(ClusterRole::Tree { copy, node: node.id });
                sizes.push(params.n0 / params.delta.pow(node.depth));
            }
        }
        roles.push(ClusterRole::Dummy);
        sizes.push(params.dummy_size);
        let dummy = BpCluster(2 * t);

        let mut edges = Vec::new();
        for copy in 0..2u32 {
            for node in tree.nodes() {
                for &(l, child) in &node.children {
                    edges.push(BlueprintEdge {
                        from: BpCluster(copy * t + node.id.0),
                        to: BpCluster(copy * t + child.0),
                        label_forward: l.value(params.delta),
                        label_backward: params.delta.pow(l.0 + 1),
                        kind: EdgeKind::Tree,
                        tree_label: Some(l),
                    });
                }
            }
        }
        if include_main_matching {
            for node in tree.nodes() {
                edges.push(BlueprintEdge {
                    from: BpCluster(node.id.0),
                    to: BpCluster(t + node.id.0),
                    label_forward: 1,
                    label_backward: 1,
                    kind: EdgeKind::Matching,
                    tree_label: None,
                });
            }
        }
        for c in 0..2 * t {
            let avg = Rational::new((sizes[c as usize] * (big + 1)) as i64, params.dummy_size as i64);
            edges.push(BlueprintEdge {
                from: BpCluster(c),
                to: dummy,
                label_forward: big + 1,
                label_backward: round_half_up(avg) as u64,
                kind: EdgeKind::Dummy,
                tree_label: None,
            });
        }
        Self::try_from(BlueprintData { params, include_main_matching, tree, roles, sizes, edges })
    }

    pub fn params(&self) -> &Params {
        &self.data.params
    }

    pub fn tree(&self) -> &ClusterTree {
        &self.data.tree
    }

    pub fn include_main_matching(&self) -> bool {
        self.data.include_main_matching
    }

    pub fn num_clusters(&self) -> usize {
        self.data.roles.len()
    }

    pub fn clusters(&self) -> impl Iterator<Item = BpCluster> {
        (0..self.num_clusters() as u32).map(BpCluster)
    }

    pub fn edges(&self) -> &[BlueprintEdge] {
        &self.data.edges
    }

    pub fn dummy(&self) -> BpCluster {
        BpCluster(2 * self.data.tree.len() as u32)
    }

    pub fn cluster(&self, copy: u8, node: ClusterId) -> BpCluster {
        BpCluster(copy as u32 * self.data.tree.len() as u32 + node.0)
    }

    pub fn role(&self, c: BpCluster) -> Result<ClusterRole, BlueprintError> {
        self.data.roles.get(c.index()).copied().ok_or(BlueprintError::UnknownCluster(c))
    }

    pub fn tree_coordinate(&self, c: BpCluster) -> Option<(u8, ClusterId)> {
        match self.data.roles.get(c.index()) {
            Some(ClusterRole::Tree { copy, node }) => Some((*copy, *node)),
            _ => None,
        }
    }

    pub fn size(&self, c: BpCluster) -> Result<u64, BlueprintError> {
        self.data.sizes.get(c.index()).copied().ok_or(BlueprintError::UnknownCluster(c))
    }

    pub fn sizes(&self) -> &[u64] {
        &self.data.sizes
    }

    pub fn outgoing(&self, c: BpCluster) -> Result<&[Outgoing], BlueprintError> {
        self.adjacency.get(c.index()).map(|v| v.as_slice()).ok_or(BlueprintError::UnknownCluster(c))
    }

    /// `d_B(C)`. For the dummy cluster this sums the rounded labels.
    pub fn degree(&self, c: BpCluster) -> Result<u64, BlueprintError> {
        Ok(self.outgoing(c)?.iter().map(|o| o.label).sum())
    }

    pub fn neighbor_by_key(&self, c: BpCluster, key: EdgeKey) -> Result<Option<BpCluster>, BlueprintError> {
        Ok(self.outgoing(c)?.iter().find(|o| o.key == key).map(|o| o.to))
    }

    /// `(C0^(0), C0^(1))`
    pub fn significant_pair(&self) -> (BpCluster, BpCluster) {
        (self.cluster(0, ClusterId(0)), self.cluster(1, ClusterId(0)))
    }

    /// `(C0^(0), C1^(0))`
    pub fn misleading_pair(&self) -> (BpCluster, BpCluster) {
        (self.cluster(0, ClusterId(0)), self.cluster(0, ClusterId(1)))
    }

    /// `d̄_B = d̄_r + Δ_r + 2`, or `+ 1` without the main matching.
    pub fn non_leaf_degree(&self) -> u64 {
        self.data.tree.non_leaf_degree() + self.params().big_delta_r() + 1 + u64::from(self.include_main_matching())
    }

    /// Probability that one step from a tree cluster `c` enters `D`.
    pub fn dummy_step_probability<S: Scalar>(&self, c: BpCluster) -> Result<S, BlueprintError> {
        let d = self.degree(c)?;
        Ok(S::from_ratio(self.params().big_delta_r() as u128 + 1, d as u128))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("blueprint serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, BlueprintError> {
        serde_json::from_str(s).map_err(|e| BlueprintError::Malformed(e.to_string()))
    }

    /// Short content hash (first 8 bytes of SHA-256 of the JSON form).
    pub fn content_hash(&self) -> u64 {
        let digest = Sha256::digest(serde_json::to_vec(self).expect("blueprint serialises"));
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}
