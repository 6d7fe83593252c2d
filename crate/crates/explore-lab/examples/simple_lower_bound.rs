//! Both built-in algorithms against the single-block adversary.
//!
//! ```text
//! cargo run --release --example simple_lower_bound -- 100
//! ```

use anyhow::{Context, Result};
use explore_lab::analysis::{alg_lower_bound, opt_formula};
use explore_lab::harness::{run_one, RunOptions};
use explore_lab::{registry, Params};

fn main() -> Result<()> {
    let x: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100);
    let p = Params::simple(x);
    println!("{p}: ALG >= {}, tour = {}", alg_lower_bound(&p)?, opt_formula(&p)?);
    for alg in registry() {
        let r = run_one(p, alg, RunOptions::default());
        let rep = r.report.as_ref().context("run failed")?;
        println!(
            "{alg:>16}: cost {:>8}  tour {:>8}  ratio {}/{} = {:.4}  pass {}",
            rep.alg_cost,
            rep.opt_surrogate_cost,
            rep.ratio_num,
            rep.ratio_den,
            rep.ratio_f64(),
            r.pass
        );
    }
    Ok(())
}
