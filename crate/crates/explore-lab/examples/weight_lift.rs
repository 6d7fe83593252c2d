//! Zero-weight edges raised to one: the chain then uses N+2 distinct
//! weights and the measured ratio is compared with 10/3 - 2/(3k).

use anyhow::{Context, Result};
use explore_lab::analysis::{lifted_limit_value, to_f64};
use explore_lab::harness::{run_one, RunOptions};
use explore_lab::{registry, run, weight_lift, AdversaryWorld, NearestNeighbor, Params, StepBudget, World};

fn main() -> Result<()> {
    let p = Params::chain(12, 2);

    let mut world = AdversaryWorld::new(p)?;
    run(&mut NearestNeighbor::default(), &mut world, StepBudget::default())?;
    let g = world.finalize()?;
    let lifted = weight_lift(&g);
    println!("weights before {:?}", g.distinct_weights());
    println!("weights after  {:?}", lifted.distinct_weights());

    let k = lifted.distinct_weight_count() as u32;
    println!("k = {k}, 10/3 - 2/(3k) = {:.4}", to_f64(&lifted_limit_value(k)));
    let opts = RunOptions {
        lift: true,
        ..Default::default()
    };
    for alg in registry() {
        let r = run_one(p, alg, opts);
        let rep = r.report.as_ref().context("run failed")?;
        println!(
            "{alg:>16}: {} / {} = {:.4}",
            rep.alg_cost,
            rep.opt_surrogate_cost,
            rep.ratio_f64()
        );
    }
    Ok(())
}
