//! Exact optimum of a single block by Held-Karp, next to the cost the
//! explicit tour pays for crossing it.

use anyhow::Result;
use explore_lab::adversary::BlockKind;
use explore_lab::analysis::exact_exploration_opt;
use explore_lab::harness::block_oracle;
use explore_lab::{run, AdversaryWorld, NearestNeighbor, Params, StepBudget, VertexId, World};

fn explored(p: Params) -> Result<AdversaryWorld> {
    let mut w = AdversaryWorld::new(p)?;
    run(&mut NearestNeighbor::default(), &mut w, StepBudget::default())?;
    w.finalize()?;
    Ok(w)
}

fn main() -> Result<()> {
    println!("{:>2} {:>12} {:>12}", "x", "simple", "level-0");
    for x in 2..=8u64 {
        let simple = block_oracle(&explored(Params::simple(x))?)?;
        let rec = block_oracle(&explored(Params::rec(x, 0, 1))?)?;
        let show = |o: Option<explore_lab::harness::BlockOracle>| {
            o.map(|o| format!("{} / {}", o.exact, o.crossing)).unwrap_or_default()
        };
        println!("{x:>2} {:>12} {:>12}", show(simple), show(rec));
    }

    // the same thing by hand on one block
    let w = explored(Params::rec(6, 3, 1))?;
    let b = w.blocks_of(0, BlockKind::Normal)[0];
    let sub = w.block_subgraph(b)?;
    let open = exact_exploration_opt(&sub, VertexId(0), false)?;
    let closed = exact_exploration_opt(&sub, VertexId(0), true)?;
    println!(
        "rec x=6 y=3 block {b}: {} vertices, open walk {open}, closed tour {closed}",
        sub.vertex_count()
    );
    Ok(())
}
