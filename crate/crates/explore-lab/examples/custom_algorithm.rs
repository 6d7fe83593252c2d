//! Plugging in your own strategy. This one always heads for the known
//! unvisited vertex with the smallest id, by fewest hops.

use std::collections::VecDeque;

use anyhow::Result;
use explore_lab::analysis::alg_lower_bound;
use explore_lab::{
    replay_validate, run, AdversaryWorld, ExplorationAlgorithm, KnowledgeView, Params, StepBudget, VertexId, World,
};

#[derive(Default)]
struct LowestIdFirst;

fn first_hop(view: &KnowledgeView, from: VertexId, to: VertexId) -> Option<VertexId> {
    let mut pred = vec![None; view.id_bound()];
    let mut queue = VecDeque::from([from]);
    pred[from.index()] = Some(from);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut v = to;
            while pred[v.index()] != Some(from) {
                v = pred[v.index()]?;
            }
            return Some(v);
        }
        for (v, _) in view.neighbors(u) {
            if pred[v.index()].is_none() {
                pred[v.index()] = Some(u);
                queue.push_back(v);
            }
        }
    }
    None
}

impl ExplorationAlgorithm for LowestIdFirst {
    fn name(&self) -> &str {
        "lowest_id_first"
    }

    fn decide(&mut self, view: &KnowledgeView) -> Option<VertexId> {
        let target = (0..view.id_bound() as u32)
            .map(VertexId)
            .find(|&v| view.is_known(v) && !view.is_visited(v))
            .unwrap_or(view.origin());
        first_hop(view, view.position(), target)
    }
}

fn main() -> Result<()> {
    for p in [Params::simple(20), Params::rec(6, 0, 1), Params::chain(4, 1)] {
        let mut world = AdversaryWorld::new(p)?;
        let (trace, _) = run(&mut LowestIdFirst, &mut world, StepBudget::default())?;
        let g = world.finalize()?;
        let tour = world.explicit_opt_tour()?;
        println!(
            "{p}: cost {} >= {}  tour {}  replay {}",
            trace.total_cost(),
            alg_lower_bound(&p)?,
            tour.total_cost(),
            replay_validate(&trace, &g, world.origin()).valid
        );
    }
    Ok(())
}
