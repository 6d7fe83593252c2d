//! Sweeps, CSV output and the `explore` command line.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{AdversaryWorld, BlockKind, Params, Topology};
use crate::algorithms::{by_name, registry};
use crate::analysis::{self, FormulaTable, HELD_KARP_LIMIT};
use crate::engine::{build_report, replay_validate, run, RunReport, StepBudget, World};
use crate::graph::{VertexId, Weight};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A `y` entry of a sweep: a number, or `"default"` for the topology's
/// own choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "serde_json::Value", into = "serde_json::Value")]
pub enum YSpec {
    Default,
    Value(u64),
}

impl FromStr for YSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "default" {
            return Ok(YSpec::Default);
        }
        s.parse()
            .map(YSpec::Value)
            .map_err(|_| format!("y must be a number or `default`, got `{s}`"))
    }
}

impl TryFrom<serde_json::Value> for YSpec {
    type Error = String;

    fn try_from(v: serde_json::Value) -> Result<Self, String> {
        match v {
            serde_json::Value::String(s) => s.parse(),
            serde_json::Value::Number(n) => n.as_u64().map(YSpec::Value).ok_or(format!("bad y `{n}`")),
            other => Err(format!("bad y `{other}`")),
        }
    }
}

impl From<YSpec> for serde_json::Value {
    fn from(y: YSpec) -> Self {
        match y {
            YSpec::Default => "default".into(),
            YSpec::Value(v) => v.into(),
        }
    }
}

fn default_y() -> Vec<YSpec> {
    vec![YSpec::Default]
}

fn default_levels() -> Vec<u32> {
    vec![0]
}

fn default_algorithms() -> Vec<String> {
    registry().iter().map(|s| s.to_string()).collect()
}

fn default_dot_limit() -> usize {
    5000
}

/// One sweep. The JSON form uses the same field names.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub topologies: Vec<Topology>,
    #[serde(default)]
    pub x: Vec<u64>,
    #[serde(default = "default_y")]
    pub y: Vec<YSpec>,
    #[serde(default = "default_levels", rename = "N")]
    pub levels: Vec<u32>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub verify_opt_oracle: bool,
    #[serde(default)]
    pub export_dot: Option<PathBuf>,
    #[serde(default = "default_dot_limit")]
    pub dot_limit: usize,
    #[serde(default)]
    pub weight_lift: bool,
    /// Also write every trace and resolution log.
    #[serde(default)]
    pub traces: bool,
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            topologies: Vec::new(),
            x: Vec::new(),
            y: default_y(),
            levels: default_levels(),
            algorithms: default_algorithms(),
            out: None,
            verify_opt_oracle: false,
            export_dot: None,
            dot_limit: default_dot_limit(),
            weight_lift: false,
            traces: false,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Runs in sweep order, plus the combinations that were skipped and why.
    pub fn expand(&self) -> Result<(Vec<(Params, String)>, Vec<String>), HarnessError> {
        for a in &self.algorithms {
            if by_name(a).is_none() {
                return Err(HarnessError::Config(format!(
                    "unknown algorithm `{a}` (known: {})",
                    registry().join(", ")
                )));
            }
        }
        let mut seen = BTreeSet::new();
        let mut params = Vec::new();
        let mut skipped = Vec::new();
        for &topology in &self.topologies {
            for &x in &self.x {
                for &ys in &self.y {
                    for &levels in &self.levels {
                        let p = match topology {
                            Topology::Simple => Params::simple(x),
                            _ => {
                                let y = match ys {
                                    YSpec::Default => Params::default_y(topology, x),
                                    YSpec::Value(v) => v,
                                };
                                Params { topology, x, y, levels }
                            }
                        };
                        if let Err(e) = p.validate() {
                            log::warn!("skipping {p}: {e}");
                            skipped.push(format!("{p}: {e}"));
                            continue;
                        }
                        if seen.insert((p.topology, p.x, p.y, p.levels)) {
                            params.push(p);
                        }
                    }
                }
            }
        }
        let runs = params
            .into_iter()
            .flat_map(|p| self.algorithms.iter().map(move |a| (p, a.clone())))
            .collect();
        Ok((runs, skipped))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
}

/// Held-Karp on one level-0 normal block against the tour's crossing of it.
#[derive(Clone, Debug, Serialize)]
pub struct BlockOracle {
    pub vertices: usize,
    #[serde(serialize_with = "ser_u128")]
    pub exact: Weight,
    #[serde(serialize_with = "ser_u128")]
    pub crossing: Weight,
}

fn ser_u128<S: serde::Serializer>(w: &Weight, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub params: Params,
    pub algorithm: String,
    pub lifted: bool,
    pub report: Option<RunReport>,
    /// Tour cost the construction should produce.
    #[serde(serialize_with = "ser_u128")]
    pub expected_tour: Weight,
    pub vertices: usize,
    pub distinct_weights: usize,
    pub trace_digest: String,
    pub block_oracle: Option<BlockOracle>,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub error: Option<String>,
    #[serde(skip)]
    pub limit: BigRational,
    #[serde(skip)]
    pub artifacts: Option<Artifacts>,
}

/// Files a run can leave behind.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub trace_json: Option<String>,
    pub log_jsonl: Option<Vec<u8>>,
    pub dot: Option<String>,
}

impl RunRecord {
    pub fn stem(&self) -> String {
        let p = &self.params;
        let lift = if self.lifted { "_lifted" } else { "" };
        format!(
            "{}_x{}_y{}_N{}_{}{lift}",
            p.topology, p.x, p.y, p.levels, self.algorithm
        )
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.ok)
    }
}

/// What a single run should produce besides its record.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub lift: bool,
    pub verify_opt: bool,
    pub traces: bool,
    /// Export DOT text when the graph has at most this many vertices.
    pub dot_limit: Option<usize>,
}

fn limit_for(p: &Params, lifted: bool) -> BigRational {
    if lifted && p.topology == Topology::Chain {
        analysis::lifted_limit_value(p.levels + 2)
    } else {
        analysis::limit_value(p.topology, p.levels)
    }
}

/// One algorithm against one adversary, with every check applied.
pub fn run_one(p: Params, algorithm: &str, opts: RunOptions) -> RunRecord {
    let mut rec = RunRecord {
        params: p,
        algorithm: algorithm.to_string(),
        lifted: opts.lift,
        report: None,
        expected_tour: 0,
        vertices: 0,
        distinct_weights: 0,
        trace_digest: String::new(),
        block_oracle: None,
        checks: Vec::new(),
        pass: false,
        error: None,
        limit: limit_for(&p, opts.lift),
        artifacts: None,
    };
    if let Err(e) = run_checked(&mut rec, opts) {
        log::error!("{p} with {algorithm}: {e}");
        rec.error = Some(e);
        rec.pass = false;
    }
    rec
}

fn run_checked(rec: &mut RunRecord, opts: RunOptions) -> Result<(), String> {
    let p = rec.params;
    let table = FormulaTable::new(&p).map_err(|e| e.to_string())?;
    rec.expected_tour = analysis::expected_tour_cost(&p).map_err(|e| e.to_string())?;
    let mut world = AdversaryWorld::with_logging(p, opts.traces).map_err(|e| e.to_string())?;
    if opts.lift {
        world = world.lifted();
    }
    let mut alg = by_name(&rec.algorithm).ok_or_else(|| format!("unknown algorithm `{}`", rec.algorithm))?;
    let (trace, _) = run(alg.as_mut(), &mut world, StepBudget::default()).map_err(|e| e.to_string())?;
    let g = world.finalize().map_err(|e| e.to_string())?;
    let origin = world.origin();
    rec.vertices = g.vertex_count();
    rec.distinct_weights = g.distinct_weight_count();
    rec.trace_digest = trace.digest();
    let tour = world.explicit_opt_tour().map_err(|e| e.to_string())?;
    let report =
        build_report(trace.total_cost(), &rec.algorithm, p, tour.total_cost(), &table).map_err(|e| e.to_string())?;

    let mut checks = vec![
        Check {
            name: "answers_consistent",
            ok: world.check_answers(&g).is_ok(),
        },
        Check {
            name: "replay_valid",
            ok: replay_validate(&trace, &g, origin).valid,
        },
        Check {
            name: "tour_valid",
            ok: replay_validate(&tour, &g, origin).valid,
        },
        Check {
            name: "alg_ge_lower_bound",
            ok: report.alg_cost >= table.alg_lb,
        },
    ];
    if !opts.lift {
        checks.push(Check {
            name: "tour_eq_expected",
            ok: report.opt_surrogate_cost == rec.expected_tour,
        });
    }
    if opts.verify_opt {
        rec.block_oracle = block_oracle(&world).map_err(|e| e.to_string())?;
        if let Some(o) = &rec.block_oracle {
            checks.push(Check {
                name: "block_crossing_optimal",
                ok: o.exact == o.crossing,
            });
        }
    }
    rec.pass = checks.iter().all(|c| c.ok);
    rec.checks = checks;
    if p.topology == Topology::Chain && !opts.lift {
        log::info!(
            "{p}: tour {} vs closed form {} (delta {})",
            report.opt_surrogate_cost,
            table.opt_formula,
            report.opt_surrogate_cost as i128 - table.opt_formula as i128
        );
    }
    rec.report = Some(report);

    let mut art = Artifacts::default();
    if opts.traces {
        art.trace_json = Some(trace.to_json());
        let mut buf = Vec::new();
        world.log().write_jsonl(&mut buf).map_err(|e| e.to_string())?;
        art.log_jsonl = Some(buf);
    }
    if let Some(limit) = opts.dot_limit {
        if g.vertex_count() <= limit {
            art.dot = Some(g.export_dot(&world.annotations()));
        } else {
            log::warn!("{p}: {} vertices exceed the DOT limit {limit}", g.vertex_count());
        }
    }
    rec.artifacts = Some(art);
    Ok(())
}

/// Exact optimum of the first level-0 normal block that fits Held-Karp,
/// compared with the cost of crossing it tail to head.
pub fn block_oracle(world: &AdversaryWorld) -> Result<Option<BlockOracle>, crate::adversary::AdversaryError> {
    let Some(&b) = world.blocks_of(0, BlockKind::Normal).first() else {
        return Ok(None);
    };
    let sub = world.block_subgraph(b)?;
    let n = sub.vertex_count();
    if n > HELD_KARP_LIMIT {
        return Ok(None);
    }
    let crossing = (1..n as u32)
        .map(|i| sub.weight(VertexId(i - 1), VertexId(i)).unwrap_or(Weight::MAX))
        .fold(0 as Weight, |a, w| a.saturating_add(w));
    let exact = analysis::exact_exploration_opt(&sub, VertexId(0), false)?;
    Ok(Some(BlockOracle {
        vertices: n,
        exact,
        crossing,
    }))
}

#[derive(Debug, Default)]
pub struct ExperimentReport {
    pub rows: Vec<RunRecord>,
    pub skipped: Vec<String>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

/// Runs the whole sweep and writes its outputs. Failed runs become failing
/// rows; only configuration and IO problems are errors.
pub fn run_experiments(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let (runs, skipped) = cfg.expand()?;
    let opts = RunOptions {
        lift: cfg.weight_lift,
        verify_opt: cfg.verify_opt_oracle,
        traces: cfg.traces,
        dot_limit: cfg.export_dot.as_ref().map(|_| cfg.dot_limit),
    };
    log::info!("{} runs, {} skipped", runs.len(), skipped.len());
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    let rows: Vec<RunRecord> = pool.install(|| runs.par_iter().map(|(p, a)| run_one(*p, a, opts)).collect());
    let report = ExperimentReport { rows, skipped };
    if let Some(out) = &cfg.out {
        write_outputs(&report, out)?;
    }
    if let Some(dir) = &cfg.export_dot {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        for r in &report.rows {
            if let Some(dot) = r.artifacts.as_ref().and_then(|a| a.dot.as_ref()) {
                let path = dir.join(format!("{}.dot", r.stem()));
                fs::write(&path, dot).map_err(|e| HarnessError::io(&path, e))?;
            }
        }
    }
    Ok(report)
}

fn write_outputs(report: &ExperimentReport, out: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(out).map_err(|e| HarnessError::io(out, e))?;
    emit_csv(report, &out.join("results.csv"))?;
    let path = out.join("results.json");
    let json = serde_json::to_string_pretty(&report.rows).map_err(|e| HarnessError::Config(e.to_string()))?;
    fs::write(&path, json + "\n").map_err(|e| HarnessError::io(&path, e))?;
    for r in &report.rows {
        let Some(art) = &r.artifacts else { continue };
        if let Some(t) = &art.trace_json {
            let dir = out.join("traces");
            fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
            let path = dir.join(format!("{}.json", r.stem()));
            fs::write(&path, t).map_err(|e| HarnessError::io(&path, e))?;
        }
        if let Some(l) = &art.log_jsonl {
            let dir = out.join("logs");
            fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
            let path = dir.join(format!("{}.jsonl", r.stem()));
            fs::write(&path, l).map_err(|e| HarnessError::io(&path, e))?;
        }
    }
    Ok(())
}

pub const CSV_HEADER: [&str; 14] = [
    "topology",
    "x",
    "y",
    "N",
    "algorithm",
    "alg_cost",
    "opt_surrogate",
    "opt_formula",
    "analytic_lb",
    "ratio_num",
    "ratio_den",
    "ratio_float",
    "limit_float",
    "pass",
];

pub fn csv_row(r: &RunRecord) -> Vec<String> {
    let p = &r.params;
    let mut row = vec![
        p.topology.to_string(),
        p.x.to_string(),
        p.y.to_string(),
        p.levels.to_string(),
        r.algorithm.clone(),
    ];
    match &r.report {
        Some(rep) => row.extend([
            rep.alg_cost.to_string(),
            rep.opt_surrogate_cost.to_string(),
            rep.analytic_opt_formula.to_string(),
            rep.analytic_alg_lower_bound.to_string(),
            rep.ratio_num.clone(),
            rep.ratio_den.clone(),
            format!("{:.6}", rep.ratio_f64()),
        ]),
        None => row.extend(std::iter::repeat_n(String::new(), 7)),
    }
    row.push(format!("{:.6}", analysis::to_f64(&r.limit)));
    row.push(r.pass.to_string());
    row
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| HarnessError::io(path, e.into()))?;
    let io = |e: csv::Error| HarnessError::io(path, e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in &report.rows {
        w.write_record(csv_row(r)).map_err(io)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

/// Limit values for a range of `N`, or of `k` for the lifted chain.
pub fn limit_curve(topology: Topology, range: RangeInclusive<u32>, lifted: bool) -> Vec<(u32, BigRational)> {
    range
        .map(|n| {
            let v = if lifted {
                analysis::lifted_limit_value(n)
            } else {
                analysis::limit_value(topology, n)
            };
            (n, v)
        })
        .collect()
}

pub fn emit_limit_curve(
    topology: Topology,
    range: RangeInclusive<u32>,
    lifted: bool,
    path: &Path,
) -> Result<(), HarnessError> {
    if range.is_empty() {
        return Err(HarnessError::Config("empty range".into()));
    }
    let mut f = fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let key = if lifted { "k" } else { "N" };
    let mut text = format!("{key},limit_num,limit_den,limit_float\n");
    for (n, v) in limit_curve(topology, range, lifted) {
        text += &format!("{n},{},{},{:.6}\n", v.numer(), v.denom(), analysis::to_f64(&v));
    }
    f.write_all(text.as_bytes()).map_err(|e| HarnessError::io(path, e))
}
