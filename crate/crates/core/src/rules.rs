//! Concrete non-adaptive decision rules. A rule fixes its plan up front and
//! decides from the [`Exploration`] alone; it never sees the graph.

use crate::graph::{Adjacency, CsrGraph};
use crate::lca_engine::{ball_plan, execute_plan, EngineError, ExecOptions, Exploration, Prompt, PromptKind, QueryPlan, DEFAULT_BUDGET};
use crate::rng::derive_seed;

pub trait DecisionRule: Sync {
    fn name(&self) -> &'static str;
    fn kind(&self) -> PromptKind;
    fn reveal_ids(&self) -> bool {
        false
    }
    fn plan(&self, max_degree: u32) -> Result<QueryPlan, EngineError>;
    fn decide(&self, e: &Exploration) -> Result<bool, EngineError>;
}

/// Outputs nothing.
pub struct AlwaysExclude(pub PromptKind);

impl DecisionRule for AlwaysExclude {
    fn name(&self) -> &'static str {
        "always-exclude"
    }
    fn kind(&self) -> PromptKind {
        self.0
    }
    fn plan(&self, _: u32) -> Result<QueryPlan, EngineError> {
        QueryPlan::new(self.0, Vec::new())
    }
    fn decide(&self, _: &Exploration) -> Result<bool, EngineError> {
        Ok(false)
    }
}

/// Vertex cover: every vertex.
pub struct IncludeAll;

impl DecisionRule for IncludeAll {
    fn name(&self) -> &'static str {
        "include-all"
    }
    fn kind(&self) -> PromptKind {
        PromptKind::Vertex
    }
    fn plan(&self, _: u32) -> Result<QueryPlan, EngineError> {
        QueryPlan::new(PromptKind::Vertex, Vec::new())
    }
    fn decide(&self, _: &Exploration) -> Result<bool, EngineError> {
        Ok(true)
    }
}

/// Vertex cover: leave out exactly the vertices whose id is smaller than
/// all neighbours' ids. Those form an independent set, so the rest covers.
pub struct LocalMinimumExclusion;

impl DecisionRule for LocalMinimumExclusion {
    fn name(&self) -> &'static str {
        "local-minimum-exclusion"
    }
    fn kind(&self) -> PromptKind {
        PromptKind::Vertex
    }
    fn reveal_ids(&self) -> bool {
        true
    }
    fn plan(&self, max_degree: u32) -> Result<QueryPlan, EngineError> {
        ball_plan(max_degree, 1, PromptKind::Vertex, DEFAULT_BUDGET)
    }
    fn decide(&self, e: &Exploration) -> Result<bool, EngineError> {
        let me = e.id(1)?.expect("prompt is never null");
        for pos in 2..=e.len() {
            if let Some(w) = e.id(pos)? {
                if w < me {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// Vertex cover: include `u` iff some neighbour has degree `≤ deg(u)`.
/// The higher-degree end of every edge qualifies, so this covers.
pub struct DegreeDominance;

impl DecisionRule for DegreeDominance {
    fn name(&self) -> &'static str {
        "degree-dominance"
    }
    fn kind(&self) -> PromptKind {
        PromptKind::Vertex
    }
    fn plan(&self, max_degree: u32) -> Result<QueryPlan, EngineError> {
        ball_plan(max_degree, 1, PromptKind::Vertex, DEFAULT_BUDGET)
    }
    fn decide(&self, e: &Exploration) -> Result<bool, EngineError> {
        let d = e.degree(1).expect("prompt is never null");
        Ok((2..=e.len()).any(|p| matches!(e.degree(p), Some(x) if x <= d)))
    }
}

fn edge_rank(a: u32, b: u32) -> u64 {
    derive_seed(a.min(b) as u64, a.max(b) as u64)
}

/// Matching: keep an edge iff its pseudo-random rank (a hash of the two
/// ids) beats every adjacent edge. Two adjacent edges cannot both win.
pub struct LocalMinimumEdge;

impl DecisionRule for LocalMinimumEdge {
    fn name(&self) -> &'static str {
        "local-minimum-edge"
    }
    fn kind(&self) -> PromptKind {
        PromptKind::Edge
    }
    fn reveal_ids(&self) -> bool {
        true
    }
    fn plan(&self, max_degree: u32) -> Result<QueryPlan, EngineError> {
        ball_plan(max_degree, 1, PromptKind::Edge, DEFAULT_BUDGET)
    }
    fn decide(&self, e: &Exploration) -> Result<bool, EngineError> {
        let u = e.id(1)?.expect("prompt is never null");
        let v = e.id(2)?.expect("prompt is never null");
        let mine = edge_rank(u, v);
        for pos in 3..=e.len() {
            let parent = e.parents()[pos - 1] as usize;
            let (Some(w), Some(x)) = (e.id(pos)?, e.id(parent)?) else { continue };
            if (x == u && w == v) || (x == v && w == u) {
                continue;
            }
            if edge_rank(x, w) < mine {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Run a vertex rule on every vertex.
pub fn vertex_outputs<R: DecisionRule + ?Sized>(rule: &R, g: &CsrGraph) -> Result<Vec<bool>, EngineError> {
    let plan = rule.plan(g.max_degree() as u32)?;
    let opts = ExecOptions { reveal_ids: rule.reveal_ids() };
    (0..g.n() as u32).map(|v| rule.decide(&execute_plan(g, Prompt::Vertex(v), &plan, opts)?)).collect()
}

pub fn is_vertex_cover(g: &CsrGraph, include: &[bool]) -> bool {
    g.edges().all(|(u, v)| include[u as usize] || include[v as usize])
}
