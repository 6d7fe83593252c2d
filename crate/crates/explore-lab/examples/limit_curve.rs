//! Limit values for growing N, and how the analytic ratio behaves as x
//! doubles. For the chain with N >= 1 it overshoots the stated limit and
//! settles on a slightly larger value.

use anyhow::Result;
use explore_lab::analysis::{analytic_ratio, chain_asymptote, limit_value, to_f64};
use explore_lab::harness::limit_curve;
use explore_lab::{Params, Topology};

fn main() -> Result<()> {
    for (top, lifted) in [
        (Topology::Rec, false),
        (Topology::Chain, false),
        (Topology::Chain, true),
    ] {
        let curve = limit_curve(top, if lifted { 2..=8 } else { 0..=6 }, lifted);
        let row: Vec<String> = curve.iter().map(|(n, l)| format!("{n}:{l}")).collect();
        println!("{top}{} {}", if lifted { " lifted" } else { "" }, row.join("  "));
    }

    println!();
    for n in 0..=3 {
        let line: Vec<String> = (4..=12)
            .map(|k| analytic_ratio(&Params::chain(1 << k, n)).map(|r| format!("{:.4}", to_f64(&r))))
            .collect::<Result<_, _>>()?;
        println!("chain N={n}, x=2^4..2^12: {}", line.join(" "));
        println!(
            "    stated limit {:.4}, actual asymptote {}",
            to_f64(&limit_value(Topology::Chain, n)),
            chain_asymptote(n)
        );
    }
    Ok(())
}
