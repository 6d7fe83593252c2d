//! The engine on a fixed graph, with the exact optimum for comparison.

use anyhow::Result;
use explore_lab::analysis::exact_exploration_opt;
use explore_lab::engine::StaticWorld;
use explore_lab::{run, Dfs, ExplorationAlgorithm, NearestNeighbor, StepBudget, VertexId, WeightedGraph};

fn main() -> Result<()> {
    // a ring of 8 with two chords
    let mut g = WeightedGraph::with_vertices(8);
    for i in 0..8u32 {
        g.add_edge(VertexId(i), VertexId((i + 1) % 8), 1 + (i as u128 % 3))?;
    }
    g.add_edge(VertexId(0), VertexId(4), 2)?;
    g.add_edge(VertexId(2), VertexId(6), 5)?;

    println!("optimum {}", exact_exploration_opt(&g, VertexId(0), true)?);
    for alg in [
        &mut NearestNeighbor::default() as &mut dyn ExplorationAlgorithm,
        &mut Dfs::default(),
    ] {
        let mut w = StaticWorld::new(g.clone(), VertexId(0));
        let (t, _) = run(alg, &mut w, StepBudget::default())?;
        let path: Vec<String> = std::iter::once(t.origin())
            .chain(t.moves().map(|m| m.to))
            .map(|v| v.0.to_string())
            .collect();
        println!("{:>16}: {} via {}", alg.name(), t.total_cost(), path.join("-"));
    }
    Ok(())
}
