//! Writes a small adversary graph as Graphviz DOT with the named vertices
//! labelled.
//!
//! ```text
//! cargo run --example dot_export > rec.dot && dot -Tsvg rec.dot > rec.svg
//! ```

use anyhow::Result;
use explore_lab::{run, AdversaryWorld, Dfs, Params, StepBudget, World};

fn main() -> Result<()> {
    let mut world = AdversaryWorld::new(Params::rec(4, 0, 1))?;
    run(&mut Dfs::default(), &mut world, StepBudget::default())?;
    let g = world.finalize()?;
    let labels = world.annotations();
    eprintln!(
        "{} vertices, {} edges, {} labelled",
        g.vertex_count(),
        g.edge_count(),
        labels.len()
    );
    print!("{}", g.export_dot(&labels));
    Ok(())
}
