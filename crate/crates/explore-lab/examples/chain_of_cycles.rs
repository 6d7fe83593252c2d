//! The chain construction: block layout, the explicit tour and how it
//! compares with the closed-form estimate.

use anyhow::Result;
use explore_lab::analysis::{chain_tour_cost, opt_formula};
use explore_lab::{run, AdversaryWorld, Dfs, Params, StepBudget, World};

fn main() -> Result<()> {
    let x: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(8);
    let n: u32 = std::env::args().nth(2).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let p = Params::chain(x, n);
    let mut world = AdversaryWorld::new(p)?;
    let (trace, _) = run(&mut Dfs::default(), &mut world, StepBudget::default())?;
    let g = world.finalize()?;

    let s = world.block_summary();
    println!(
        "{p}: {} vertices, {} blocks in {} cycles",
        g.vertex_count(),
        s.blocks,
        s.cycles
    );
    println!("normal blocks per cycle: {:?}", s.per_cycle);
    println!(
        "top level: {} normal, {} final, {} closing, {} origin",
        s.top_normal, s.top_final, s.top_closing, s.top_origin
    );

    let tour = world.explicit_opt_tour()?;
    let closed = opt_formula(&p)?;
    println!("dfs cost        {}", trace.total_cost());
    println!("tour            {}", tour.total_cost());
    println!("block count     {}", chain_tour_cost(x, x / 2, n)?);
    println!(
        "closed form     {closed} (delta {})",
        tour.total_cost() as i128 - closed as i128
    );
    Ok(())
}
