//! The two deterministic explorers. Ties go to the smaller vertex id.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::engine::{ExplorationAlgorithm, KnowledgeView};
use crate::graph::{VertexId, Weight};

/// Names accepted by [`by_name`].
pub fn registry() -> &'static [&'static str] {
    &["nearest_neighbor", "dfs"]
}

pub fn by_name(name: &str) -> Option<Box<dyn ExplorationAlgorithm>> {
    match name {
        "nearest_neighbor" | "nn" => Some(Box::new(NearestNeighbor::default())),
        "dfs" => Some(Box::new(Dfs::default())),
        _ => None,
    }
}

/// Walks a shortest known path to the closest unvisited vertex, then home.
#[derive(Debug, Default)]
pub struct NearestNeighbor {
    plan: Vec<VertexId>,
    dist: Vec<Weight>,
    pred: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    heap: BinaryHeap<Reverse<(Weight, u32)>>,
}

impl NearestNeighbor {
    fn touch(&mut self, v: usize) {
        if self.stamp.len() <= v {
            self.stamp.resize(v + 1, 0);
            self.dist.resize(v + 1, 0);
            self.pred.resize(v + 1, u32::MAX);
        }
    }

    /// Shortest path from the position to the nearest unvisited vertex, or
    /// to the origin when everything known is visited. Returned reversed.
    fn search(&mut self, view: &KnowledgeView) -> Vec<VertexId> {
        self.epoch += 1;
        let ep = self.epoch;
        let src = view.position();
        self.heap.clear();
        self.touch(src.index());
        self.stamp[src.index()] = ep;
        self.dist[src.index()] = 0;
        self.pred[src.index()] = u32::MAX;
        self.heap.push(Reverse((0, src.0)));
        let go_home = view.frontier_len() == 0;
        let mut best: Option<(Weight, u32)> = None;
        while let Some(Reverse((d, u))) = self.heap.pop() {
            if self.dist[u as usize] != d {
                continue;
            }
            if let Some((bd, _)) = best {
                if d > bd {
                    break;
                }
            }
            let uv = VertexId(u);
            let hit = if go_home {
                uv == view.origin()
            } else {
                !view.is_visited(uv)
            };
            if hit {
                if best.is_none_or(|(_, bi)| u < bi) {
                    best = Some((d, u));
                }
                continue;
            }
            if !view.is_visited(uv) {
                continue;
            }
            for (t, w) in view.neighbors(uv) {
                let nd = d.checked_add(w).expect("distance overflow");
                let ti = t.index();
                self.touch(ti);
                if self.stamp[ti] != ep || nd < self.dist[ti] {
                    self.stamp[ti] = ep;
                    self.dist[ti] = nd;
                    self.pred[ti] = u;
                    self.heap.push(Reverse((nd, t.0)));
                }
            }
        }
        let mut path = Vec::new();
        if let Some((_, mut v)) = best {
            while v != src.0 {
                path.push(VertexId(v));
                v = self.pred[v as usize];
            }
        }
        path
    }
}

impl ExplorationAlgorithm for NearestNeighbor {
    fn name(&self) -> &str {
        "nearest_neighbor"
    }

    fn decide(&mut self, view: &KnowledgeView) -> Option<VertexId> {
        // A plan only crosses visited vertices, so nothing learned on the
        // way can change it; it is dropped once its target is reached.
        if self.plan.is_empty() {
            self.plan = self.search(view);
        }
        self.plan.pop()
    }
}

/// Depth-first search taking the lightest unvisited neighbor first.
#[derive(Debug, Default)]
pub struct Dfs {
    stack: Vec<VertexId>,
}

impl ExplorationAlgorithm for Dfs {
    fn name(&self) -> &str {
        "dfs"
    }

    fn decide(&mut self, view: &KnowledgeView) -> Option<VertexId> {
        let pos = view.position();
        if self.stack.last() != Some(&pos) {
            self.stack.push(pos);
        }
        let next = view
            .neighbors(pos)
            .filter(|&(t, _)| !view.is_visited(t))
            .min_by_key(|&(t, w)| (w, t));
        if let Some((t, _)) = next {
            return Some(t);
        }
        self.stack.pop();
        self.stack.last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, StaticWorld, StepBudget};
    use crate::graph::WeightedGraph;

    fn line(n: u32) -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices(n as usize);
        for i in 1..n {
            g.add_edge(VertexId(i - 1), VertexId(i), 1).unwrap();
        }
        g
    }

    #[test]
    fn both_walk_a_path_out_and_back() {
        for name in registry() {
            let mut alg = by_name(name).unwrap();
            let mut w = StaticWorld::new(line(5), VertexId(0));
            let (t, _) = run(alg.as_mut(), &mut w, StepBudget::default()).unwrap();
            assert_eq!(t.total_cost(), 8, "{name}");
        }
    }

    #[test]
    fn nn_prefers_the_smaller_id_on_ties() {
        let mut g = WeightedGraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(2), 1).unwrap();
        g.add_edge(VertexId(0), VertexId(1), 1).unwrap();
        let mut w = StaticWorld::new(g, VertexId(0));
        let (t, _) = run(&mut NearestNeighbor::default(), &mut w, StepBudget::default()).unwrap();
        assert_eq!(t.moves().next().unwrap().to, VertexId(1));
    }

    #[test]
    fn dfs_prefers_the_lighter_edge() {
        let mut g = WeightedGraph::with_vertices(3);
        g.add_edge(VertexId(0), VertexId(1), 5).unwrap();
        g.add_edge(VertexId(0), VertexId(2), 2).unwrap();
        let mut w = StaticWorld::new(g, VertexId(0));
        let (t, _) = run(&mut Dfs::default(), &mut w, StepBudget::default()).unwrap();
        assert_eq!(t.moves().next().unwrap().to, VertexId(2));
        assert_eq!(t.total_cost(), 14);
    }
}
