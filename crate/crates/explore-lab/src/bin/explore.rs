use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use explore_lab::harness::{emit_limit_curve, run_experiments, ExperimentConfig, HarnessError, YSpec};
use explore_lab::Topology;

#[derive(Parser)]
#[command(name = "explore", about = "Run exploration algorithms against gadget adversaries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sweep. Flags override the config file.
    Run(RunArgs),
    /// Write the asymptotic bound for a range of N (or k with --lifted).
    Limits {
        #[arg(long)]
        topology: Topology,
        #[arg(long, default_value_t = 0)]
        from: u32,
        #[arg(long, default_value_t = 4)]
        to: u32,
        #[arg(long)]
        lifted: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON sweep file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// simple, rec or chain; comma separated.
    #[arg(long, value_delimiter = ',')]
    topology: Vec<Topology>,
    #[arg(long, value_delimiter = ',')]
    x: Vec<u64>,
    /// Numbers or `default`.
    #[arg(long, value_delimiter = ',')]
    y: Vec<YSpec>,
    /// Top levels N.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    algorithm: Vec<String>,
    /// Directory for DOT files.
    #[arg(long)]
    export_dot: Option<PathBuf>,
    /// Largest graph written as DOT.
    #[arg(long)]
    dot_limit: Option<usize>,
    /// Check one level-0 block against Held-Karp.
    #[arg(long)]
    verify_opt: bool,
    /// Raise 0-weight edges to 1.
    #[arg(long)]
    lift: bool,
    /// Also write traces and resolution logs.
    #[arg(long)]
    traces: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if !self.topology.is_empty() {
            cfg.topologies = self.topology;
        }
        if !self.x.is_empty() {
            cfg.x = self.x;
        }
        if !self.y.is_empty() {
            cfg.y = self.y;
        }
        if !self.levels.is_empty() {
            cfg.levels = self.levels;
        }
        if !self.algorithm.is_empty() {
            cfg.algorithms = self.algorithm;
        }
        cfg.export_dot = self.export_dot.or(cfg.export_dot);
        cfg.dot_limit = self.dot_limit.unwrap_or(cfg.dot_limit);
        cfg.verify_opt_oracle |= self.verify_opt;
        cfg.weight_lift |= self.lift;
        cfg.traces |= self.traces;
        cfg.jobs = self.jobs.or(cfg.jobs);
        cfg.out = self.out.or(cfg.out);
        if cfg.out.is_none() {
            anyhow::bail!(HarnessError::Config("--out is required".into()));
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("EXPLORE_LOG", "warn")).init();
    let cli = Cli::parse();
    match body(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn body(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Run(args) => {
            let cfg = args.config()?;
            let report = run_experiments(&cfg)?;
            for r in &report.rows {
                let status = if r.pass { "ok" } else { "FAIL" };
                match (&r.report, &r.error) {
                    (Some(rep), _) => println!(
                        "{status} {} {}: alg {} tour {} lb {} ratio {:.4}",
                        r.params,
                        r.algorithm,
                        rep.alg_cost,
                        rep.opt_surrogate_cost,
                        rep.analytic_alg_lower_bound,
                        rep.ratio_f64()
                    ),
                    (None, e) => println!("{status} {} {}: {}", r.params, r.algorithm, e.as_deref().unwrap_or("")),
                }
            }
            for s in &report.skipped {
                println!("skipped {s}");
            }
            Ok(report.exit_code() as u8)
        }
        Cmd::Limits {
            topology,
            from,
            to,
            lifted,
            out,
        } => {
            emit_limit_curve(topology, from..=to, lifted, &out)
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
    }
}
