use std::collections::{BTreeMap, VecDeque};

use explore_lab::adversary::{classify_head_tail, BlockKind, HeadPorts, Orientation, PortRole};
use explore_lab::analysis::{self, exact_exploration_opt, expected_tour_cost, FormulaTable};
use explore_lab::engine::StaticWorld;
use explore_lab::harness::block_oracle;
use explore_lab::{
    replay_validate, run, weight_lift, AdversaryWorld, Dfs, ExplorationAlgorithm, KnowledgeView, NearestNeighbor,
    Params, StepBudget, VertexId, WeightedGraph, World,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Walks to uniformly random frontier vertices over known edges, then home.
struct RandomTargets {
    rng: StdRng,
    plan: Vec<VertexId>,
}

impl RandomTargets {
    fn new(seed: u64) -> Self {
        RandomTargets {
            rng: StdRng::seed_from_u64(seed),
            plan: Vec::new(),
        }
    }

    fn path_to(view: &KnowledgeView, goal: impl Fn(VertexId) -> bool) -> Vec<Vec<VertexId>> {
        // BFS over visited vertices; every reachable goal with its path.
        let src = view.position();
        let mut pred = vec![u32::MAX; view.id_bound()];
        let mut q = VecDeque::from([src]);
        pred[src.index()] = src.0;
        let mut found = Vec::new();
        while let Some(u) = q.pop_front() {
            if u != src && goal(u) {
                let mut p = vec![u];
                let mut c = u;
                while pred[c.index()] != src.0 {
                    c = VertexId(pred[c.index()]);
                    p.push(c);
                }
                found.push(p);
                continue;
            }
            if !view.is_visited(u) {
                continue;
            }
            for (t, _) in view.neighbors(u) {
                if pred[t.index()] == u32::MAX {
                    pred[t.index()] = u.0;
                    q.push_back(t);
                }
            }
        }
        found
    }
}

impl ExplorationAlgorithm for RandomTargets {
    fn name(&self) -> &str {
        "random_targets"
    }

    fn decide(&mut self, view: &KnowledgeView) -> Option<VertexId> {
        if self.plan.is_empty() {
            let mut paths = if view.frontier_len() == 0 {
                Self::path_to(view, |v| v == view.origin())
            } else {
                Self::path_to(view, |v| !view.is_visited(v))
            };
            if paths.is_empty() {
                return None;
            }
            let i = self.rng.gen_range(0..paths.len());
            self.plan = paths.swap_remove(i);
        }
        self.plan.pop()
    }
}

fn finished(p: Params, alg: &mut dyn ExplorationAlgorithm) -> (AdversaryWorld, WeightedGraph, u128) {
    let mut w = AdversaryWorld::new(p).unwrap();
    let (trace, _) = run(alg, &mut w, StepBudget::default()).unwrap();
    let g = w.finalize().unwrap();
    assert!(replay_validate(&trace, &g, VertexId(0)).valid);
    (w, g, trace.total_cost())
}

#[test]
fn simple_four_has_forty_nine_vertices() {
    let (w, g, _) = finished(Params::simple(4), &mut NearestNeighbor::default());
    assert_eq!(g.vertex_count(), 49);
    let s = w.block_summary();
    assert_eq!((s.top_origin, s.top_normal, s.top_closing), (1, 5, 1));
    // origin x+1, normal x+3 each, closing x+5
    assert_eq!(5 + 5 * 7 + 9, g.vertex_count());
}

#[test]
fn simple_weights_are_zero_one_x() {
    for x in 2..=10 {
        let (_, g, _) = finished(Params::simple(x), &mut Dfs::default());
        assert_eq!(g.distinct_weights(), vec![0, 1, x as u128]);
        assert!(g.is_connected());
    }
}

#[test]
fn normal_head_vertices_carry_three_heavy_edges() {
    let x = 4u128;
    let (w, g, _) = finished(Params::simple(4), &mut NearestNeighbor::default());
    let heavy3 = g
        .vertices()
        .filter(|&v| g.neighbors(v).filter(|&(_, wt)| wt == x).count() == 3)
        .count();
    assert_eq!(heavy3, w.block_summary().top_normal);
}

#[test]
fn return_edge_endpoint_has_two_zero_edges() {
    let (_, g, _) = finished(Params::rec(4, 0, 0), &mut NearestNeighbor::default());
    let e0 = 4u128;
    // the far end of a return edge: one e_0 edge and two 0 edges
    let n = g
        .vertices()
        .filter(|&v| {
            let ws: Vec<_> = g.neighbors(v).map(|(_, w)| w).collect();
            ws.len() == 3 && ws.iter().filter(|&&w| w == 0).count() == 2 && ws.contains(&e0)
        })
        .count();
    assert!(n >= 5, "{n}");
}

#[test]
fn reobserving_is_idempotent() {
    let mut w = AdversaryWorld::new(Params::rec(4, 1, 1)).unwrap();
    let a = w.observe(VertexId(0)).unwrap();
    let far = a[0].other(VertexId(0));
    let b = w.observe(far).unwrap();
    assert_eq!(w.observe(VertexId(0)).unwrap(), a);
    assert_eq!(w.observe(far).unwrap(), b);
    assert!(w.observe(VertexId(9999)).is_err());
}

#[test]
fn head_tail_rule() {
    // x=4, y=2: six straight steps leave 5 vertices in between
    assert_eq!(classify_head_tail(5, 2, false), Orientation::CurrentIsHead);
    // alternating sides, one vertex in between
    assert_eq!(classify_head_tail(1, 2, false), Orientation::CurrentIsTail);
    assert_eq!(classify_head_tail(0, 0, false), Orientation::CurrentIsHead);
    assert_eq!(classify_head_tail(0, 5, true), Orientation::CurrentIsHead);
}

#[test]
fn port_roles_follow_use_order() {
    let mut h = HeadPorts::default();
    assert_eq!(h.resolve(7).unwrap(), PortRole::Return);
    assert!(h.resolve(7).is_err());
    assert_eq!(h.resolve(3).unwrap(), PortRole::Skip);
    assert_eq!(h.resolve(9).unwrap(), PortRole::Backbone);
    assert!(h.resolve(1).is_err());
}

#[test]
fn single_blocks_match_held_karp() {
    for x in 2..=8 {
        let (w, _, _) = finished(Params::simple(x), &mut NearestNeighbor::default());
        let o = block_oracle(&w).unwrap().unwrap();
        assert_eq!(o.exact, x as u128, "simple x={x}");
        let (w, _, _) = finished(Params::rec(x, x / 2, 1), &mut Dfs::default());
        let o = block_oracle(&w).unwrap().unwrap();
        assert_eq!(o.exact, x as u128 + 2, "level 0 x={x}");
        assert_eq!(o.exact, o.crossing);
    }
}

#[test]
fn closing_block_also_crosses_optimally() {
    let (w, _, _) = finished(Params::simple(6), &mut Dfs::default());
    let b = w.blocks_of(0, BlockKind::Closing)[0];
    let sub = w.block_subgraph(b).unwrap();
    // tail, w, path, pseudo start, second tail: ends at the second tail
    let last = VertexId(sub.vertex_count() as u32 - 1);
    assert_eq!(sub.weight(VertexId(sub.vertex_count() as u32 - 2), last), Some(0));
    assert_eq!(exact_exploration_opt(&sub, VertexId(0), false).unwrap(), 6);
}

#[test]
fn runs_are_deterministic() {
    let p = Params::chain(4, 1);
    let go = || {
        let mut w = AdversaryWorld::new(p).unwrap();
        let (t, _) = run(&mut NearestNeighbor::default(), &mut w, StepBudget::default()).unwrap();
        w.finalize().unwrap();
        let mut log = Vec::new();
        w.log().write_jsonl(&mut log).unwrap();
        (t.to_json(), log, w.explicit_opt_tour().unwrap().to_json())
    };
    assert_eq!(go(), go());
}

#[test]
fn log_records_decisions() {
    let (w, _, _) = finished(Params::chain(4, 0), &mut NearestNeighbor::default());
    let log = w.log();
    assert_eq!(log.count("connection"), 4);
    assert_eq!(log.count("closing"), 5);
    assert!(log.count("layout") > 0);
    assert_eq!(log.count("finalize"), 1);
}

#[test]
fn lifted_chain_weights() {
    for n in 0..=2 {
        let (_, g, _) = finished(Params::chain(4, n), &mut Dfs::default());
        assert_eq!(g.distinct_weight_count(), n as usize + 3);
        assert_eq!(weight_lift(&g).distinct_weight_count(), n as usize + 2);
    }
}

/// Independent DFS over a graph parsed back from DOT text.
fn parse_dot(text: &str) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut n = 0u32;
    for line in text.lines() {
        let line = line.trim();
        if let Some((lhs, rest)) = line.split_once(" -- ") {
            let a: u32 = lhs.trim().parse().unwrap();
            let (b, label) = rest.split_once(' ').unwrap();
            let b: u32 = b.parse().unwrap();
            let w: u128 = label.split('"').nth(1).unwrap().parse().unwrap();
            n = n.max(a + 1).max(b + 1);
            edges.push((a, b, w));
        } else if let Some(id) = line.split_whitespace().next().and_then(|t| t.parse::<u32>().ok()) {
            n = n.max(id + 1);
        }
    }
    let mut g = WeightedGraph::with_vertices(n as usize);
    for (a, b, w) in edges {
        g.add_edge(VertexId(a), VertexId(b), w).unwrap();
    }
    g
}

fn hand_dfs(g: &WeightedGraph) -> u128 {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut cost = 0;
    while let Some(&u) = stack.last() {
        let mut best: Option<(u128, u32)> = None;
        for (t, w) in g.neighbors(VertexId(u)) {
            if !seen[t.index()] && best.is_none_or(|b| (w, t.0) < b) {
                best = Some((w, t.0));
            }
        }
        match best {
            Some((w, t)) => {
                seen[t as usize] = true;
                stack.push(t);
                cost += w;
            }
            None => {
                stack.pop();
                if let Some(&p) = stack.last() {
                    cost += g.weight(VertexId(u), VertexId(p)).unwrap();
                }
            }
        }
    }
    cost
}

#[test]
fn dot_round_trip_and_dfs_replay() {
    let (w, g, _) = finished(Params::simple(3), &mut NearestNeighbor::default());
    let dot = g.export_dot(&w.annotations());
    assert!(dot.starts_with("graph G {") && dot.trim_end().ends_with('}'));
    assert!(dot.contains("v_o") && dot.contains("v_h"));
    let back = parse_dot(&dot);
    assert_eq!(back.edges(), g.edges());

    let (_, g4, _) = finished(Params::simple(4), &mut NearestNeighbor::default());
    let back = parse_dot(&g4.export_dot(&BTreeMap::new()));
    let mut sw = StaticWorld::new(g4, VertexId(0));
    let (t, _) = run(&mut Dfs::default(), &mut sw, StepBudget::default()).unwrap();
    assert_eq!(t.total_cost(), hand_dfs(&back));
}

fn small_params() -> impl Strategy<Value = Params> {
    prop_oneof![
        (2u64..9).prop_map(Params::simple),
        (2u64..7, 0.0f64..=0.5, 0u32..2).prop_map(|(x, yf, n)| Params::rec(x, (x as f64 * yf) as u64, n)),
        (1u64..4, 0u32..2).prop_map(|(h, n)| Params::chain(2 * h, n)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn adversary_is_consistent_for_any_agent(p in small_params(), seed in any::<u64>()) {
        let mut w = AdversaryWorld::new(p).unwrap();
        let (trace, _) = run(&mut RandomTargets::new(seed), &mut w, StepBudget::default()).unwrap();
        let g = w.finalize().unwrap();
        prop_assert!(w.check_answers(&g).is_ok());
        prop_assert!(g.is_connected());
        prop_assert!(replay_validate(&trace, &g, VertexId(0)).valid);
        let tour = w.explicit_opt_tour().unwrap();
        prop_assert!(replay_validate(&tour, &g, VertexId(0)).valid);
        prop_assert_eq!(tour.total_cost(), expected_tour_cost(&p).unwrap());
        let t = FormulaTable::new(&p).unwrap();
        let mut allowed = vec![0u128, 1];
        allowed.extend((0..=p.levels as i32).map(|i| t.e(i)));
        prop_assert!(g.distinct_weights().iter().all(|w| allowed.contains(w)));
        prop_assert!(trace.total_cost() >= tour.total_cost());
    }

    #[test]
    fn registry_algorithms_meet_the_lower_bound(p in small_params()) {
        for alg in [&mut NearestNeighbor::default() as &mut dyn ExplorationAlgorithm, &mut Dfs::default()] {
            let (w, _, cost) = finished(p, alg);
            prop_assert!(cost >= analysis::alg_lower_bound(&p).unwrap());
            prop_assert_eq!(w.explicit_opt_tour().unwrap().total_cost(), expected_tour_cost(&p).unwrap());
        }
    }

    #[test]
    fn lift_only_touches_zero_weights(p in small_params()) {
        let (_, g, _) = finished(p, &mut Dfs::default());
        let l = weight_lift(&g);
        prop_assert_eq!(l.vertex_count(), g.vertex_count());
        for (a, b) in g.edges().iter().zip(l.edges()) {
            prop_assert_eq!((a.u, a.v), (b.u, b.v));
            prop_assert_eq!(b.weight, a.weight.max(1));
        }
        let both = g.distinct_weights().starts_with(&[0, 1]);
        prop_assert_eq!(l.distinct_weight_count() + both as usize, g.distinct_weight_count());
    }
}
