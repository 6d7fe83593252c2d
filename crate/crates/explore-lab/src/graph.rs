//! Undirected edge-weighted graphs with exact integer weights.
//!
//! Vertices are issued sequentially. Weights are interned so that adjacency
//! entries stay small even for graphs with millions of vertices.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact edge weight.
pub type Weight = u128;

/// Opaque vertex identifier, issued in reveal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, weight: Weight) -> Self {
        Edge { u, v, weight }
    }

    /// The endpoint that is not `from`.
    pub fn other(&self, from: VertexId) -> VertexId {
        if self.u == from {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("no path from {from} to {to}")]
    Unreachable { from: VertexId, to: VertexId },
    #[error("weight arithmetic overflow")]
    Overflow,
}

/// Interning table for weights.
#[derive(Clone, Debug, Default)]
pub struct WeightTable {
    values: Vec<Weight>,
    index: HashMap<Weight, u32>,
}

impl WeightTable {
    pub fn intern(&mut self, w: Weight) -> u32 {
        if let Some(&i) = self.index.get(&w) {
            return i;
        }
        let i = self.values.len() as u32;
        self.values.push(w);
        self.index.insert(w, i);
        i
    }

    pub fn get(&self, i: u32) -> Weight {
        self.values[i as usize]
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }
}

/// Which vertices a shortest-path query may use.
#[derive(Clone, Copy)]
pub enum Restrict<'a> {
    All,
    Set(&'a HashSet<VertexId>),
}

impl Restrict<'_> {
    fn allows(&self, v: VertexId) -> bool {
        match self {
            Restrict::All => true,
            Restrict::Set(s) => s.contains(&v),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    adj: Vec<Vec<(u32, u32)>>,
    weights: WeightTable,
    edge_count: usize,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        WeightedGraph {
            adj: vec![Vec::new(); n],
            ..Self::default()
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        VertexId((self.adj.len() - 1) as u32)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.adj.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.adj.len() as u32).map(VertexId)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<Edge, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.contains(x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        let (a, b) = if self.adj[u.index()].len() <= self.adj[v.index()].len() {
            (u, v)
        } else {
            (v, u)
        };
        if self.adj[a.index()].iter().any(|&(t, _)| t == b.0) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let wi = self.weights.intern(w);
        self.adj[u.index()].push((v.0, wi));
        self.adj[v.index()].push((u.0, wi));
        self.edge_count += 1;
        Ok(Edge::new(u, v, w))
    }

    /// Neighbors of `v` in insertion order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.adj[v.index()]
            .iter()
            .map(move |&(t, wi)| (VertexId(t), self.weights.get(wi)))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        self.adj[u.index()]
            .iter()
            .find(|&&(t, _)| t == v.0)
            .map(|&(_, wi)| self.weights.get(wi))
    }

    /// Every edge once, with `u < v`, ordered by `(u, v)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            let mut row: Vec<_> = list
                .iter()
                .filter(|&&(t, _)| t as usize > u)
                .map(|&(t, wi)| Edge::new(VertexId(u as u32), VertexId(t), self.weights.get(wi)))
                .collect();
            row.sort_by_key(|e| e.v);
            out.extend(row);
        }
        out
    }

    pub fn total_weight(&self) -> Result<Weight, GraphError> {
        self.edges()
            .iter()
            .try_fold(0u128, |acc, e| acc.checked_add(e.weight))
            .ok_or(GraphError::Overflow)
    }

    pub fn distinct_weight_count(&self) -> usize {
        let mut seen = HashSet::new();
        for list in &self.adj {
            for &(_, wi) in list {
                seen.insert(wi);
            }
        }
        seen.len()
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut ws: Vec<Weight> = self
            .adj
            .iter()
            .flatten()
            .map(|&(_, wi)| self.weights.get(wi))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        ws.sort_unstable();
        ws
    }

    /// Same topology with every weight passed through `f`.
    pub fn map_weights(&self, f: impl Fn(Weight) -> Weight) -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices(self.vertex_count());
        for e in self.edges() {
            g.add_edge(e.u, e.v, f(e.weight)).expect("topology is preserved");
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        if self.adj.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(t, _) in &self.adj[u as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == self.adj.len()
    }

    /// Single-source distances (Dijkstra). Unreachable entries are `None`.
    pub fn distances_from(&self, src: VertexId, restrict: Restrict<'_>) -> Vec<Option<Weight>> {
        let n = self.adj.len();
        let mut dist: Vec<Option<Weight>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        dist[src.index()] = Some(0);
        heap.push(Reverse((0u128, src.0)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u as usize] != Some(d) {
                continue;
            }
            for &(t, wi) in &self.adj[u as usize] {
                if !restrict.allows(VertexId(t)) {
                    continue;
                }
                let nd = d.saturating_add(self.weights.get(wi));
                if dist[t as usize].is_none_or(|old| nd < old) {
                    dist[t as usize] = Some(nd);
                    heap.push(Reverse((nd, t)));
                }
            }
        }
        dist
    }

    /// Minimum-cost path. Ties are broken by fewest edges, then by the
    /// lexicographically smallest vertex sequence.
    pub fn shortest_path(
        &self,
        from: VertexId,
        to: VertexId,
        restrict: Restrict<'_>,
    ) -> Result<(Weight, Vec<VertexId>), GraphError> {
        for v in [from, to] {
            if !self.contains(v) {
                return Err(GraphError::UnknownVertex(v));
            }
            if !restrict.allows(v) {
                return Err(GraphError::Unreachable { from, to });
            }
        }
        if from == to {
            return Ok((0, vec![from]));
        }
        // Distances towards `to`, measured as (cost, hops).
        let n = self.adj.len();
        let mut best: Vec<Option<(Weight, u32)>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        best[to.index()] = Some((0, 0));
        heap.push(Reverse((0u128, 0u32, to.0)));
        while let Some(Reverse((d, h, u))) = heap.pop() {
            if best[u as usize] != Some((d, h)) {
                continue;
            }
            for &(t, wi) in &self.adj[u as usize] {
                if !restrict.allows(VertexId(t)) {
                    continue;
                }
                let cand = (d.saturating_add(self.weights.get(wi)), h + 1);
                if best[t as usize].is_none_or(|old| cand < old) {
                    best[t as usize] = Some(cand);
                    heap.push(Reverse((cand.0, cand.1, t)));
                }
            }
        }
        let Some((cost, _)) = best[from.index()] else {
            return Err(GraphError::Unreachable { from, to });
        };
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let (d, h) = best[cur.index()].expect("on a shortest path");
            let next = self.adj[cur.index()]
                .iter()
                .filter(|&&(t, wi)| {
                    restrict.allows(VertexId(t))
                        && best[t as usize].is_some_and(|(dt, ht)| ht + 1 == h && dt + self.weights.get(wi) == d)
                })
                .map(|&(t, _)| t)
                .min()
                .expect("tight edge exists");
            cur = VertexId(next);
            path.push(cur);
        }
        Ok((cost, path))
    }

    /// Graphviz text. Annotations for unknown vertices are ignored.
    pub fn export_dot(&self, annotations: &BTreeMap<VertexId, String>) -> String {
        let mut s = String::from("graph G {\n");
        for v in self.vertices() {
            match annotations.get(&v) {
                Some(a) => {
                    let _ = writeln!(s, "  {} [label=\"{}\\n{}\"];", v.0, v.0, escape(a));
                }
                None => {
                    let _ = writeln!(s, "  {};", v.0);
                }
            }
        }
        for e in self.edges() {
            let _ = writeln!(s, "  {} -- {} [label=\"{}\"];", e.u.0, e.v.0, e.weight);
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
