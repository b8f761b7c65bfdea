//! Hard instances for non-adaptive local computation algorithms, and the
//! experiments that probe them.
//!
//! The pipeline is: [`cluster_tree`] → [`blueprint`] → [`instance`]
//! (random graph realising the blueprint) → [`lca_engine`] (query plans)
//! → [`coupling`] / [`distinguish`] (can a plan tell two edges apart?).
//! [`mpc_sim`] runs the matching algorithm that makes the gap matter.

pub mod bipartite;
pub mod blueprint;
pub mod cluster_tree;
pub mod coupling;
pub mod coupling_dp;
pub mod distinguish;
pub mod graph;
pub mod graph_io;
pub mod instance;
pub mod lca_engine;
pub mod matching;
pub mod mpc_sim;
pub mod rng;
pub mod rules;
pub mod scalar;
pub mod stats;
pub mod verify;

pub use blueprint::{Blueprint, BpCluster, Params, Regime};
pub use cluster_tree::{ClusterId, ClusterTree, LabelExp};
pub use scalar::Scalar;

/// Exact parameter constants (`c`, `ε`).
pub type Rational = num_rational::Ratio<i64>;
/// Exact probabilities.
pub type ExactProb = num_rational::BigRational;
/// Coupled-walk distribution in floating point.
pub type FloatDp = coupling_dp::CouplingDp<f64>;
/// Coupled-walk distribution in exact rationals.
pub type ExactDp = coupling_dp::CouplingDp<ExactProb>;
