//! The exploration loop: an algorithm moves one edge at a time over what it
//! knows, a world reveals the edges of every vertex on its first visit.

use std::io::Write;

use num::BigRational;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::adversary::Params;
use crate::analysis::{self, FormulaTable};
use crate::graph::{Edge, VertexId, Weight, WeightTable, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("world inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("illegal move from {from} to {to}")]
    IllegalMove { from: VertexId, to: VertexId },
    #[error("step budget of {0} traversals exceeded")]
    BudgetExceeded(u64),
    #[error("world inconsistency: {0}")]
    WorldInconsistency(String),
    #[error("optimum surrogate is zero")]
    ZeroOpt,
}

impl From<WorldError> for EngineError {
    fn from(e: WorldError) -> Self {
        EngineError::WorldInconsistency(e.to_string())
    }
}

/// What an exploration run talks to.
pub trait World {
    fn origin(&self) -> VertexId;

    /// All edges incident to `v`. Must be idempotent.
    fn observe(&mut self, v: VertexId) -> Result<Vec<Edge>, WorldError>;

    /// The complete graph, consistent with every answer given so far.
    fn finalize(&mut self) -> Result<WeightedGraph, WorldError>;

    fn frontier_empty(&self, view: &KnowledgeView) -> bool {
        view.frontier_len() == 0
    }
}

/// A fixed graph presented through the world interface.
pub struct StaticWorld {
    graph: WeightedGraph,
    origin: VertexId,
}

impl StaticWorld {
    pub fn new(graph: WeightedGraph, origin: VertexId) -> Self {
        StaticWorld { graph, origin }
    }
}

impl World for StaticWorld {
    fn origin(&self) -> VertexId {
        self.origin
    }

    fn observe(&mut self, v: VertexId) -> Result<Vec<Edge>, WorldError> {
        if !self.graph.contains(v) {
            return Err(WorldError::UnknownVertex(v));
        }
        Ok(self.graph.neighbors(v).map(|(t, w)| Edge::new(v, t, w)).collect())
    }

    fn finalize(&mut self) -> Result<WeightedGraph, WorldError> {
        Ok(self.graph.clone())
    }
}

/// Everything the agent knows.
#[derive(Clone, Debug)]
pub struct KnowledgeView {
    origin: VertexId,
    position: VertexId,
    cost: Weight,
    visited: Vec<bool>,
    known: Vec<bool>,
    /// Edges seen from visited vertices into each not yet visited vertex.
    seen_into: Vec<u16>,
    adj: Vec<Vec<(u32, u32)>>,
    weights: WeightTable,
    visited_count: usize,
    frontier: usize,
}

impl KnowledgeView {
    fn new(origin: VertexId) -> Self {
        let mut v = KnowledgeView {
            origin,
            position: origin,
            cost: 0,
            visited: Vec::new(),
            known: Vec::new(),
            seen_into: Vec::new(),
            adj: Vec::new(),
            weights: WeightTable::default(),
            visited_count: 0,
            frontier: 0,
        };
        v.grow(origin);
        v.known[origin.index()] = true;
        v.frontier = 1;
        v
    }

    fn grow(&mut self, v: VertexId) {
        let need = v.index() + 1;
        if self.visited.len() < need {
            self.visited.resize(need, false);
            self.known.resize(need, false);
            self.seen_into.resize(need, 0);
            self.adj.resize_with(need, Vec::new);
        }
    }

    fn merge(&mut self, v: VertexId, edges: &[Edge]) -> Result<(), EngineError> {
        let bad = |m: String| Err(EngineError::WorldInconsistency(m));
        let mut back_edges = 0u32;
        let mut list = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u != v && e.v != v {
                return bad(format!("edge {}-{} reported for {v}", e.u, e.v));
            }
            let t = e.other(v);
            if t == v {
                return bad(format!("self loop at {v}"));
            }
            if list.iter().any(|&(o, _)| o == t.0) {
                return bad(format!("duplicate edge {v}-{t}"));
            }
            self.grow(t);
            let wi = self.weights.intern(e.weight);
            if self.visited[t.index()] {
                let matches = self.adj[t.index()].iter().any(|&(o, owi)| o == v.0 && owi == wi);
                if !matches {
                    return bad(format!("edge {v}-{t} contradicts the view of {t}"));
                }
                back_edges += 1;
            }
            list.push((t.0, wi));
        }
        if back_edges != self.seen_into[v.index()] as u32 {
            return bad(format!("{v} hides an edge revealed earlier"));
        }
        self.visited[v.index()] = true;
        self.visited_count += 1;
        self.frontier -= 1;
        for &(t, _) in &list {
            let t = t as usize;
            if !self.visited[t] {
                if !self.known[t] {
                    self.known[t] = true;
                    self.frontier += 1;
                }
                self.seen_into[t] += 1;
            }
        }
        self.adj[v.index()] = list;
        Ok(())
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn position(&self) -> VertexId {
        self.position
    }

    pub fn cost(&self) -> Weight {
        self.cost
    }

    pub fn is_visited(&self, v: VertexId) -> bool {
        self.visited.get(v.index()).copied().unwrap_or(false)
    }

    pub fn is_known(&self, v: VertexId) -> bool {
        self.known.get(v.index()).copied().unwrap_or(false)
    }

    pub fn visited_count(&self) -> usize {
        self.visited_count
    }

    /// Known vertices that have not been visited.
    pub fn frontier_len(&self) -> usize {
        self.frontier
    }

    /// One past the largest id the view has seen.
    pub fn id_bound(&self) -> usize {
        self.visited.len()
    }

    /// Known incident edges of a visited vertex, as `(neighbor, weight)`.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.adj
            .get(v.index())
            .into_iter()
            .flatten()
            .map(|&(t, wi)| (VertexId(t), self.weights.get(wi)))
    }

    /// Weight of the known edge `u`-`v`, looked up from the visited side.
    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        let find = |a: VertexId, b: VertexId| {
            self.adj
                .get(a.index())?
                .iter()
                .find(|&&(t, _)| t == b.0)
                .map(|&(_, wi)| self.weights.get(wi))
        };
        find(u, v).or_else(|| find(v, u))
    }

    pub fn known_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &(t, wi) in list {
                let (a, b) = (u as u32, t);
                if a < b || !self.visited[b as usize] {
                    out.push(Edge::new(VertexId(a), VertexId(b), self.weights.get(wi)));
                }
            }
        }
        out
    }
}

/// A deterministic exploration strategy.
pub trait ExplorationAlgorithm: Send {
    fn name(&self) -> &str;

    /// The neighbor of `view.position()` to move to next. `None` means the
    /// algorithm is stuck, which the engine reports as an illegal move.
    fn decide(&mut self, view: &KnowledgeView) -> Option<VertexId>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepBudget {
    /// `factor * (revealed vertices + 1)`, re-evaluated every step.
    PerRevealed(u64),
    Fixed(u64),
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::PerRevealed(64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: Weight,
}

/// The walk performed by a run.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    origin: VertexId,
    moves: Vec<(u32, u32, u32)>,
    weights: WeightTable,
    total: Weight,
}

impl Trace {
    pub fn new(origin: VertexId) -> Self {
        Trace {
            origin,
            ..Self::default()
        }
    }

    pub fn push(&mut self, from: VertexId, to: VertexId, w: Weight) {
        let wi = self.weights.intern(w);
        self.moves.push((from.0, to.0, wi));
        self.total = self.total.checked_add(w).expect("trace cost overflow");
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn total_cost(&self) -> Weight {
        self.total
    }

    pub fn moves(&self) -> impl Iterator<Item = Move> + '_ {
        self.moves.iter().map(|&(f, t, wi)| Move {
            from: VertexId(f),
            to: VertexId(t),
            weight: self.weights.get(wi),
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(b"{\"moves\":[")?;
        for (k, m) in self.moves().enumerate() {
            if k > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{{\"from\":{},\"to\":{},\"weight\":{}}}", m.from, m.to, m.weight)?;
        }
        write!(w, "],\"total_cost\":{}}}", self.total)
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    /// SHA-256 of the JSON serialization.
    pub fn digest(&self) -> String {
        struct H(Sha256);
        impl Write for H {
            fn write(&mut self, b: &[u8]) -> std::io::Result<usize> {
                self.0.update(b);
                Ok(b.len())
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        let mut h = H(Sha256::new());
        self.write_json(&mut h).expect("hashing");
        h.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn run<A, W>(alg: &mut A, world: &mut W, budget: StepBudget) -> Result<(Trace, KnowledgeView), EngineError>
where
    A: ExplorationAlgorithm + ?Sized,
    W: World + ?Sized,
{
    let origin = world.origin();
    let mut view = KnowledgeView::new(origin);
    let first = world.observe(origin)?;
    view.merge(origin, &first)?;
    let mut trace = Trace::new(origin);
    let mut steps = 0u64;
    loop {
        if world.frontier_empty(&view) && view.position == origin {
            return Ok((trace, view));
        }
        let limit = match budget {
            StepBudget::PerRevealed(f) => f.saturating_mul((view.visited_count + view.frontier) as u64 + 1),
            StepBudget::Fixed(n) => n,
        };
        if steps >= limit {
            return Err(EngineError::BudgetExceeded(limit));
        }
        let from = view.position;
        let to = alg.decide(&view).unwrap_or(from);
        let w = view
            .adj
            .get(from.index())
            .and_then(|l| l.iter().find(|&&(t, _)| t == to.0))
            .map(|&(_, wi)| view.weights.get(wi))
            .ok_or(EngineError::IllegalMove { from, to })?;
        steps += 1;
        trace.push(from, to, w);
        view.cost = view.cost.checked_add(w).expect("cost overflow");
        view.position = to;
        if !view.is_visited(to) {
            let edges = world.observe(to)?;
            view.merge(to, &edges)?;
        }
    }
}

/// Outcome of [`replay_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub valid: bool,
    pub violation: Option<String>,
}

/// Checks a trace against a finished graph: every step is an edge with the
/// recorded weight, the walk is closed at `origin`, and it covers every vertex.
pub fn replay_validate(trace: &Trace, graph: &WeightedGraph, origin: VertexId) -> ReplayReport {
    let fail = |m: String| ReplayReport {
        valid: false,
        violation: Some(m),
    };
    if !graph.contains(origin) {
        return fail(format!("origin {origin} not in graph"));
    }
    let mut seen = vec![false; graph.vertex_count()];
    seen[origin.index()] = true;
    let mut count = 1;
    let mut pos = origin;
    let mut total: Weight = 0;
    for (k, m) in trace.moves().enumerate() {
        if m.from != pos {
            return fail(format!("move {k} starts at {} but the walk is at {pos}", m.from));
        }
        match graph.weight(m.from, m.to) {
            None => return fail(format!("move {k}: no edge {}-{}", m.from, m.to)),
            Some(w) if w != m.weight => {
                return fail(format!(
                    "move {k}: edge {}-{} has weight {w}, trace says {}",
                    m.from, m.to, m.weight
                ))
            }
            Some(_) => {}
        }
        total += m.weight;
        pos = m.to;
        if !seen[pos.index()] {
            seen[pos.index()] = true;
            count += 1;
        }
    }
    if pos != origin {
        return fail(format!("walk ends at {pos}, not at origin {origin}"));
    }
    if total != trace.total_cost() {
        return fail(format!("total {} differs from move sum {total}", trace.total_cost()));
    }
    if count != graph.vertex_count() {
        let missing = seen.iter().position(|s| !s).unwrap_or(0);
        return fail(format!(
            "{} of {} vertices visited, first missing {missing}",
            count,
            graph.vertex_count()
        ));
    }
    ReplayReport {
        valid: true,
        violation: None,
    }
}

fn ser_u128<S: Serializer>(w: &Weight, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// Measured against analytic quantities for one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub params: Params,
    pub algorithm: String,
    #[serde(serialize_with = "ser_u128")]
    pub alg_cost: Weight,
    #[serde(serialize_with = "ser_u128")]
    pub opt_surrogate_cost: Weight,
    #[serde(serialize_with = "ser_u128")]
    pub analytic_alg_lower_bound: Weight,
    #[serde(serialize_with = "ser_u128")]
    pub analytic_opt_formula: Weight,
    pub ratio_num: String,
    pub ratio_den: String,
    #[serde(skip)]
    pub measured_ratio: BigRational,
}

impl RunReport {
    pub fn ratio_f64(&self) -> f64 {
        analysis::to_f64(&self.measured_ratio)
    }
}

pub fn build_report(
    alg_cost: Weight,
    algorithm: &str,
    params: Params,
    opt_surrogate: Weight,
    formulas: &FormulaTable,
) -> Result<RunReport, EngineError> {
    let ratio = analysis::rational(alg_cost, opt_surrogate).map_err(|_| EngineError::ZeroOpt)?;
    Ok(RunReport {
        params,
        algorithm: algorithm.to_string(),
        alg_cost,
        opt_surrogate_cost: opt_surrogate,
        analytic_alg_lower_bound: formulas.alg_lb,
        analytic_opt_formula: formulas.opt_formula,
        ratio_num: ratio.numer().to_string(),
        ratio_den: ratio.denom().to_string(),
        measured_ratio: ratio,
    })
}
