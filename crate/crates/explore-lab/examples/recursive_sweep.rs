//! A small sweep over the recursive construction, driven by a JSON config
//! the same way the `explore` binary is.

use anyhow::Result;
use explore_lab::harness::{run_experiments, ExperimentConfig};

fn main() -> Result<()> {
    let out = std::env::temp_dir().join("explore-lab-recursive-sweep");
    let cfg = ExperimentConfig::from_json(&format!(
        r#"{{"topologies": ["rec"], "x": [6, 10], "y": [0, 2], "N": [1, 2], "out": {:?}}}"#,
        out.display().to_string()
    ))?;
    let report = run_experiments(&cfg)?;
    for r in &report.rows {
        let Some(rep) = &r.report else { continue };
        println!(
            "{:<32} cost {:>9} >= {:>9}  tour {:>8}  ratio {:.4} (limit {:.4})",
            r.stem(),
            rep.alg_cost,
            rep.analytic_alg_lower_bound,
            rep.opt_surrogate_cost,
            rep.ratio_f64(),
            explore_lab::analysis::to_f64(&r.limit)
        );
    }
    println!("results in {}", out.display());
    std::process::exit(report.exit_code());
}
