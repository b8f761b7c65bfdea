//! Non-adaptive query plans and their execution.
//!
//! A plan is a fixed list of instructions `(a_i, b_i)`: "ask for the
//! `b_i`-th neighbour of the vertex discovered at position `a_i`". The
//! prompt occupies positions 1 (vertex prompt) or 1–2 (edge prompt), and
//! instruction `i` fills position `i + offset`. Querying past the end of a
//! neighbour list, or from a `⊥` position, yields `⊥`.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Adjacency, CsrGraph};
use crate::instance::Evaluation;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("instruction {step}: {reason}")]
    MalformedPlan { step: usize, reason: String },
    #[error("plan expects a {expected:?} prompt")]
    PromptKindMismatch { expected: PromptKind },
    #[error("vertex {0} does not exist")]
    UnknownVertex(u32),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(u32, u32),
    #[error("instruction {step} asks for neighbour {index} but the maximum degree is {max_degree}")]
    IndexOutOfRange { step: usize, index: u32, max_degree: usize },
    #[error("plan of {size} instructions exceeds the budget of {budget}")]
    BudgetExceeded { size: u128, budget: u64 },
    #[error("vertex identities are not revealed to this rule")]
    Quarantined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptKind {
    Vertex,
    Edge,
}

impl PromptKind {
    /// Number of positions taken by the prompt.
    pub fn offset(self) -> usize {
        match self {
            PromptKind::Vertex => 1,
            PromptKind::Edge => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prompt {
    Vertex(u32),
    Edge(u32, u32),
}

impl Prompt {
    pub fn kind(self) -> PromptKind {
        match self {
            Prompt::Vertex(_) => PromptKind::Vertex,
            Prompt::Edge(..) => PromptKind::Edge,
        }
    }
}

/// `(a, b)`: the `b`-th neighbour (1-based) of position `a` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32)", into = "(u32, u32)")]
pub struct Instruction {
    pub parent: u32,
    pub index: u32,
}

impl From<(u32, u32)> for Instruction {
    fn from((parent, index): (u32, u32)) -> Self {
        Self { parent, index }
    }
}

impl From<Instruction> for (u32, u32) {
    fn from(i: Instruction) -> Self {
        (i.parent, i.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    kind: PromptKind,
    instructions: Vec<Instruction>,
}

impl QueryPlan {
    pub fn new(kind: PromptKind, instructions: Vec<Instruction>) -> Result<Self, EngineError> {
        let off = kind.offset();
        for (i, ins) in instructions.iter().enumerate() {
            let step = i + 1;
            if ins.parent == 0 || ins.parent as usize > step + off - 1 {
                return Err(EngineError::MalformedPlan {
                    step,
                    reason: format!("parent position {} not in 1..={}", ins.parent, step + off - 1),
                });
            }
            if ins.index == 0 {
                return Err(EngineError::MalformedPlan { step, reason: "neighbour index must be at least 1".into() });
            }
        }
        Ok(Self { kind, instructions })
    }

    pub fn kind(&self) -> PromptKind {
        self.kind
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Total positions including the prompt.
    pub fn positions(&self) -> usize {
        self.len() + self.kind.offset()
    }

    /// Parent position of every position (0 for prompt positions).
    pub fn parents(&self) -> Vec<u32> {
        let mut p = vec![0; self.kind.offset()];
        p.extend(self.instructions.iter().map(|i| i.parent));
        p
    }

    /// Hop distance from the prompt, per position.
    pub fn depths(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.kind.offset()];
        for ins in &self.instructions {
            d.push(d[ins.parent as usize - 1] + 1);
        }
        d
    }

    pub fn depth(&self) -> u32 {
        self.depths().into_iter().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.instructions).expect("plan serialises")
    }

    pub fn from_json(kind: PromptKind, s: &str) -> Result<Self, EngineError> {
        let instructions: Vec<Instruction> = serde_json::from_str(s)
            .map_err(|e| EngineError::MalformedPlan { step: 0, reason: e.to_string() })?;
        Self::new(kind, instructions)
    }
}

/// Walk of `len` steps, always taking the first neighbour. On an edge
/// prompt the walk starts from the second endpoint.
pub fn walk_plan(len: usize, kind: PromptKind) -> QueryPlan {
    let off = kind.offset() as u32;
    let ins = (1..=len as u32).map(|i| Instruction { parent: i + off - 1, index: 1 }).collect();
    QueryPlan::new(kind, ins).expect("walk plans are well formed")
}

/// Every path of length `≤ radius` through neighbour indices `1..=delta`,
/// in breadth-first order. Edge prompts expand both endpoints.
pub fn ball_plan(delta: u32, radius: u32, kind: PromptKind, budget: u64) -> Result<QueryPlan, EngineError> {
    let roots = kind.offset() as u128;
    let mut size = 0u128;
    let mut layer = roots;
    for _ in 0..radius {
        layer = layer.saturating_mul(delta as u128);
        size = size.saturating_add(layer);
    }
    if size > budget as u128 {
        return Err(EngineError::BudgetExceeded { size, budget });
    }
    let mut ins = Vec::with_capacity(size as usize);
    let mut frontier: Vec<u32> = (1..=roots as u32).collect();
    let mut next_pos = roots as u32 + 1;
    for _ in 0..radius {
        let mut next = Vec::with_capacity(frontier.len() * delta as usize);
        for &p in &frontier {
            for b in 1..=delta {
                ins.push(Instruction { parent: p, index: b });
                next.push(next_pos);
                next_pos += 1;
            }
        }
        frontier = next;
    }
    QueryPlan::new(kind, ins)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExecOptions {
    /// Expose the (random) vertex ids to the decision rule.
    pub reveal_ids: bool,
}

/// What a non-adaptive algorithm learns from running its plan: degrees
/// (and ids, if revealed) per position, `None` meaning `⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    vertices: Vec<Option<u32>>,
    degrees: Vec<Option<u32>>,
    parents: Vec<u32>,
    reveal_ids: bool,
}

impl Exploration {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Degree at a 1-based position; `None` for `⊥` or out of range.
    pub fn degree(&self, pos: usize) -> Option<u32> {
        self.degrees.get(pos.checked_sub(1)?).copied().flatten()
    }

    pub fn degrees(&self) -> &[Option<u32>] {
        &self.degrees
    }

    /// Parent position per position, 0 for the prompt.
    pub fn parents(&self) -> &[u32] {
        &self.parents
    }

    pub fn is_null(&self, pos: usize) -> bool {
        self.degree(pos).is_none()
    }

    /// Vertex id at a position, available only when ids are revealed.
    pub fn id(&self, pos: usize) -> Result<Option<u32>, EngineError> {
        if !self.reveal_ids {
            return Err(EngineError::Quarantined);
        }
        Ok(self.vertices.get(pos.wrapping_sub(1)).copied().flatten())
    }

    /// Underlying vertices, for the harness only.
    pub fn vertices(&self, _eval: &Evaluation<'_>) -> &[Option<u32>] {
        &self.vertices
    }

    pub(crate) fn vertices_unchecked(&self) -> &[Option<u32>] {
        &self.vertices
    }
}

fn check_prompt<G: Adjacency>(g: &G, prompt: Prompt, kind: PromptKind) -> Result<Vec<Option<u32>>, EngineError> {
    if prompt.kind() != kind {
        return Err(EngineError::PromptKindMismatch { expected: kind });
    }
    let n = g.vertex_count() as u32;
    let check = |v: u32| if v < n { Ok(()) } else { Err(EngineError::UnknownVertex(v)) };
    match prompt {
        Prompt::Vertex(v) => {
            check(v)?;
            Ok(vec![Some(v)])
        }
        Prompt::Edge(u, v) => {
            check(u)?;
            check(v)?;
            if !(0..g.degree(u)).any(|i| g.neighbor(u, i) == Some(v)) {
                return Err(EngineError::NotAnEdge(u, v));
            }
            Ok(vec![Some(u), Some(v)])
        }
    }
}

fn finish<G: Adjacency>(g: &G, vertices: Vec<Option<u32>>, parents: Vec<u32>, opts: ExecOptions) -> Exploration {
    let degrees = vertices.iter().map(|v| v.map(|v| g.degree(v) as u32)).collect();
    Exploration { vertices, degrees, parents, reveal_ids: opts.reveal_ids }
}

pub fn execute_plan<G: Adjacency>(g: &G, prompt: Prompt, plan: &QueryPlan, opts: ExecOptions) -> Result<Exploration, EngineError> {
    let mut vertices = check_prompt(g, prompt, plan.kind())?;
    let max_degree = g.max_degree();
    vertices.reserve(plan.len());
    for (i, ins) in plan.instructions().iter().enumerate() {
        if ins.index as usize > max_degree {
            return Err(EngineError::IndexOutOfRange { step: i + 1, index: ins.index, max_degree });
        }
        let next = vertices[ins.parent as usize - 1].and_then(|p| g.neighbor(p, ins.index as usize - 1));
        vertices.push(next);
    }
    Ok(finish(g, vertices, plan.parents(), opts))
}

/// Execute the plan's shape with every neighbour index drawn uniformly
/// at random — the same as running it on a freshly re-ordered copy of
/// the graph.
pub fn execute_random_neighbor<G: Adjacency, R: Rng + ?Sized>(
    g: &G,
    prompt: Prompt,
    plan: &QueryPlan,
    rng: &mut R,
    opts: ExecOptions,
) -> Result<Exploration, EngineError> {
    let mut vertices = check_prompt(g, prompt, plan.kind())?;
    for ins in plan.instructions() {
        let next = vertices[ins.parent as usize - 1].and_then(|p| {
            let d = g.degree(p);
            (d > 0).then(|| g.neighbor(p, rng.gen_range(0..d))).flatten()
        });
        vertices.push(next);
    }
    Ok(finish(g, vertices, plan.parents(), opts))
}

/// First position at which the subgraph induced by the discovered vertices
/// stops being a tree, if any.
pub fn first_cycle_position(g: &CsrGraph, expl: &Exploration) -> Option<usize> {
    let mut seen: HashSet<u32> = HashSet::new();
    for (i, v) in expl.vertices_unchecked().iter().enumerate() {
        let Some(v) = *v else { continue };
        if seen.contains(&v) {
            continue;
        }
        let links = g.neighbors(v).iter().filter(|w| seen.contains(w)).count();
        if !seen.is_empty() && links != 1 {
            return Some(i + 1);
        }
        seen.insert(v);
    }
    None
}

pub fn induced_subgraph_is_tree(g: &CsrGraph, expl: &Exploration, _eval: &Evaluation<'_>) -> bool {
    first_cycle_position(g, expl).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> CsrGraph {
        CsrGraph::from_edges(n as usize, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    #[test]
    fn plan_validation() {
        let bad = QueryPlan::new(PromptKind::Vertex, vec![Instruction { parent: 2, index: 1 }]);
        assert!(matches!(bad, Err(EngineError::MalformedPlan { step: 1, .. })));
        let ok = QueryPlan::new(PromptKind::Edge, vec![Instruction { parent: 2, index: 1 }]);
        assert!(ok.is_ok());
        let zero = QueryPlan::new(PromptKind::Vertex, vec![Instruction { parent: 1, index: 0 }]);
        assert!(zero.is_err());
    }

    #[test]
    fn null_propagates() {
        // path 0-1-2: vertex 0 has no second neighbour, so position 3 is ⊥
        // and so is anything queried from it
        let g = CsrGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let plan = QueryPlan::new(
            PromptKind::Vertex,
            vec![Instruction { parent: 1, index: 1 }, Instruction { parent: 1, index: 2 }, Instruction { parent: 3, index: 1 }],
        )
        .unwrap();
        let e = execute_plan(&g, Prompt::Vertex(0), &plan, ExecOptions::default()).unwrap();
        assert_eq!(e.degrees(), &[Some(1), Some(2), None, None]);
        assert_eq!(e.id(1), Err(EngineError::Quarantined));
    }

    #[test]
    fn index_beyond_max_degree_is_rejected() {
        let g = cycle(5);
        let plan = QueryPlan::new(PromptKind::Vertex, vec![Instruction { parent: 1, index: 3 }]).unwrap();
        assert!(matches!(
            execute_plan(&g, Prompt::Vertex(0), &plan, ExecOptions::default()),
            Err(EngineError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_prompt_must_be_an_edge() {
        let g = cycle(5);
        let plan = walk_plan(2, PromptKind::Edge);
        assert_eq!(execute_plan(&g, Prompt::Edge(0, 2), &plan, ExecOptions::default()), Err(EngineError::NotAnEdge(0, 2)));
        assert!(matches!(
            execute_plan(&g, Prompt::Vertex(0), &plan, ExecOptions::default()),
            Err(EngineError::PromptKindMismatch { .. })
        ));
    }

    #[test]
    fn ball_plan_shape_and_budget() {
        let p = ball_plan(3, 2, PromptKind::Edge, DEFAULT_BUDGET).unwrap();
        assert_eq!(p.len(), 2 * 3 + 2 * 9);
        assert_eq!(p.depth(), 2);
        assert!(matches!(ball_plan(1000, 3, PromptKind::Edge, DEFAULT_BUDGET), Err(EngineError::BudgetExceeded { .. })));
        let back = QueryPlan::from_json(PromptKind::Edge, &p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn cycle_detection() {
        // radius-2 ball around a vertex of a 4-cycle closes the cycle
        let g = cycle(4);
        let e = execute_plan(&g, Prompt::Vertex(0), &ball_plan(2, 2, PromptKind::Vertex, 100).unwrap(), ExecOptions::default()).unwrap();
        assert!(first_cycle_position(&g, &e).is_some());
        let g = cycle(9);
        let e = execute_plan(&g, Prompt::Vertex(0), &ball_plan(2, 3, PromptKind::Vertex, 100).unwrap(), ExecOptions::default()).unwrap();
        assert_eq!(first_cycle_position(&g, &e), None);
    }
}
