use std::fs;
use std::process::Command;

use explore_lab::harness::{
    emit_csv, emit_limit_curve, run_experiments, run_one, ExperimentConfig, ExperimentReport, RunOptions, CSV_HEADER,
};
use explore_lab::{Params, Topology};

fn explore(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_explore"))
        .args(args)
        .env("EXPLORE_LOG", "off")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

#[test]
fn one_row_csv_has_two_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let report = ExperimentReport {
        rows: vec![run_one(Params::simple(50), "nearest_neighbor", RunOptions::default())],
        skipped: Vec::new(),
    };
    emit_csv(&report, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert!(lines[1].starts_with("simple,50,0,0,nearest_neighbor,"));
    assert!(lines[1].ends_with(",2.000000,true"));
}

#[test]
fn analytic_ratio_appears_in_the_table() {
    let r = run_one(Params::simple(50), "dfs", RunOptions::default());
    let rep = r.report.unwrap();
    assert_eq!((rep.analytic_alg_lower_bound, rep.analytic_opt_formula), (9950, 5300));
    assert_eq!(rep.opt_surrogate_cost, 5300);
}

#[test]
fn sweep_rows_follow_sweep_order() {
    let cfg = ExperimentConfig {
        topologies: vec![Topology::Simple],
        x: vec![10, 20, 50],
        ..Default::default()
    };
    let report = run_experiments(&cfg).unwrap();
    assert_eq!(report.rows.len(), 6);
    for r in &report.rows {
        let rep = r.report.as_ref().unwrap();
        let x = r.params.x as u128;
        assert!(r.pass);
        assert!(rep.measured_ratio >= explore_lab::analysis::rational(4 * x * x - x, 2 * x * x + 6 * x).unwrap());
    }
    let order: Vec<_> = report.rows.iter().map(|r| (r.params.x, r.algorithm.as_str())).collect();
    assert_eq!(order[..2], [(10, "nearest_neighbor"), (10, "dfs")]);
}

#[test]
fn rec_row_meets_its_bound() {
    let r = run_one(Params::rec(8, 0, 2), "nearest_neighbor", RunOptions::default());
    let u2 = explore_lab::analysis::u_bound(8, 0, 2).unwrap();
    assert!(r.report.unwrap().alg_cost >= 8 * u2);
    assert!(r.pass);
}

#[test]
#[allow(clippy::reversed_empty_ranges)]
fn limit_curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("l.csv");
    emit_limit_curve(Topology::Rec, 0..=4, false, &p).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.contains("\n3,13,5,2.600000\n"));
    emit_limit_curve(Topology::Chain, 2..=2, true, &p).unwrap();
    assert!(fs::read_to_string(&p).unwrap().ends_with("2,3,1,3.000000\n"));
    assert!(emit_limit_curve(Topology::Chain, 3..=2, false, &p).is_err());
}

#[test]
fn cli_run_writes_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"topologies": ["rec", "chain"], "x": [4], "N": [0, 1], "algorithms": ["dfs"], "traces": true}"#,
    )
    .unwrap();
    let mut seen = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("o{k}"));
        let (code, stdout) = explore(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--jobs",
            if k == 0 { "1" } else { "3" },
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stdout}");
        let csv = fs::read(out.join("results.csv")).unwrap();
        let trace = fs::read(out.join("traces/chain_x4_y2_N1_dfs.json")).unwrap();
        let log = fs::read(out.join("logs/rec_x4_y0_N1_dfs.jsonl")).unwrap();
        seen.push((csv, trace, log));
    }
    assert_eq!(seen[0], seen[1]);
    assert_eq!(String::from_utf8_lossy(&seen[0].0).lines().count(), 5);
}

#[test]
fn cli_flags_override_the_file_and_export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"topologies": ["chain"], "x": [4, 6]}"#).unwrap();
    let out = dir.path().join("o");
    let dot = dir.path().join("dot");
    let (code, stdout) = explore(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--topology",
        "simple",
        "--x",
        "3",
        "--algorithm",
        "nearest_neighbor",
        "--export-dot",
        dot.to_str().unwrap(),
        "--verify-opt",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 1, "{stdout}");
    assert!(fs::read_to_string(dot.join("simple_x3_y0_N0_nearest_neighbor.dot"))
        .unwrap()
        .contains("v_start"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("results.json")).unwrap()).unwrap();
    assert_eq!(json[0]["block_oracle"]["exact"], "3");
}

#[test]
fn dot_limit_gates_large_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("dot");
    let args = |limit: &'static str| {
        vec![
            "run".to_string(),
            "--topology=rec".into(),
            "--x=4".into(),
            "--levels=1".into(),
            "--algorithm=dfs".into(),
            format!("--export-dot={}", dot.display()),
            format!("--dot-limit={limit}"),
            format!("--out={}", dir.path().join("o").display()),
        ]
    };
    let run = |a: Vec<String>| explore(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(run(args("100")).0, 0);
    assert!(!dot.join("rec_x4_y0_N1_dfs.dot").exists());
    assert_eq!(run(args("100000")).0, 0);
    assert!(dot.join("rec_x4_y0_N1_dfs.dot").exists());
}

#[test]
fn cli_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    assert_eq!(explore(&["run", "--topology", "ring", "--x", "4", "--out", o]).0, 2);
    assert_eq!(
        explore(&[
            "run",
            "--topology",
            "rec",
            "--x",
            "4",
            "--algorithm",
            "greedy",
            "--out",
            o
        ])
        .0,
        2
    );
    assert_eq!(explore(&["run", "--config", "/nonexistent.json", "--out", o]).0, 2);
    assert_eq!(explore(&["run", "--topology", "rec", "--x", "4"]).0, 2);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"x\": [4], \"colour\": 1}").unwrap();
    assert_eq!(explore(&["run", "--config", bad.to_str().unwrap(), "--out", o]).0, 2);
    // an empty sweep is fine
    assert_eq!(explore(&["run", "--out", o]).0, 0);
}

#[test]
fn failing_rows_set_exit_code_one() {
    let mut r = run_one(Params::simple(4), "dfs", RunOptions::default());
    r.pass = false;
    let report = ExperimentReport {
        rows: vec![r],
        skipped: Vec::new(),
    };
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn limits_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lim.csv");
    let (code, _) = explore(&[
        "limits",
        "--topology",
        "chain",
        "--to",
        "2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(fs::read_to_string(&p)
        .unwrap()
        .starts_with("N,limit_num,limit_den,limit_float\n0,3,1,3.000000\n"));
}
