//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so it shows up without `--nocapture`.

use std::io::Write;
use std::time::{Duration, Instant};

use explore_lab::analysis::{
    self, analytic_ratio, edge_weight, edge_weight_product, lifted_limit_value, limit_value, opt_formula, u_bound,
    u_bound_closed, ucirc_bound, ucirc_plus_two_closed, FormulaTable,
};
use explore_lab::harness::{block_oracle, csv_row, run_one, RunOptions, RunRecord};
use explore_lab::{
    registry, run, weight_lift, AdversaryWorld, Dfs, NearestNeighbor, Params, StepBudget, Topology, World,
};
use num::BigRational;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn say(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

fn timed(p: Params, alg: &str, opts: RunOptions) -> (RunRecord, Duration) {
    let t = Instant::now();
    let r = run_one(p, alg, opts);
    (r, t.elapsed())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn cost_ok(r: &RunRecord) -> bool {
    r.error.is_none() && r.check("answers_consistent") == Some(true) && r.check("tour_valid") == Some(true)
}

/// Every run made for criteria 1-3, kept for the consistency criterion.
struct Runs(Vec<(RunRecord, Duration)>);

fn criterion_1(runs: &mut Runs) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for x in [10u64, 20, 50, 100] {
        for alg in registry() {
            let (r, dt) = timed(Params::simple(x), alg, RunOptions::default());
            let x = x as u128;
            let rep = r.report.as_ref();
            let alg_ok = rep.is_some_and(|rep| rep.alg_cost >= 4 * x * x - x);
            let tour_ok = rep.is_some_and(|rep| rep.opt_surrogate_cost == 2 * x * x + 6 * x);
            let fast = dt < Duration::from_secs(1);
            if x == 100 {
                if let Some(rep) = rep {
                    let ratio_ok = rep.alg_cost >= 39_900
                        && rep.opt_surrogate_cost == 20_600
                        && rep.measured_ratio >= q(1937, 1000);
                    pass &= ratio_ok;
                    detail += &format!("{alg}@100: {}/{} ", rep.alg_cost, rep.opt_surrogate_cost);
                }
            }
            pass &= alg_ok && tour_ok && fast && cost_ok(&r);
            runs.0.push((r, dt));
        }
    }
    Outcome {
        id: 1,
        name: "simple: ALG >= 4x^2-x, tour = 2x^2+6x",
        pass,
        detail,
    }
}

fn criterion_2(runs: &mut Runs) -> Outcome {
    let mut pass = true;
    let mut slowest = Duration::ZERO;
    for x in [6u64, 10, 16] {
        for n in 1..=3 {
            for alg in registry() {
                let p = Params::rec(x, 0, n);
                let (r, dt) = timed(p, alg, RunOptions::default());
                let t = FormulaTable::new(&p).unwrap();
                let lb = x as u128 * u_bound(x, 0, n as i32).unwrap();
                let rep = r.report.as_ref();
                pass &= rep
                    .is_some_and(|rep| rep.alg_cost >= lb && rep.opt_surrogate_cost == (x as u128 + 3) * t.v(n as i32));
                pass &= cost_ok(&r) && dt < Duration::from_secs(30);
                slowest = slowest.max(dt);
                runs.0.push((r, dt));
            }
        }
    }
    Outcome {
        id: 2,
        name: "rec: ALG >= x U_N, tour = (x+3) V_N",
        pass,
        detail: format!("slowest run {:.2}s", slowest.as_secs_f64()),
    }
}

fn criterion_3(runs: &mut Runs) -> Outcome {
    let mut pass = true;
    let mut slowest = Duration::ZERO;
    let mut deltas = Vec::new();
    for x in [4u64, 8, 12] {
        for n in 0..=2 {
            for alg in registry() {
                let p = Params::chain(x, n);
                let (r, dt) = timed(p, alg, RunOptions::default());
                let lb = (x * x) as u128
                    * (ucirc_bound(x, x / 2, n).unwrap() + 2 * edge_weight(x, x / 2, n as i32).unwrap());
                let rep = r.report.as_ref();
                pass &= rep.is_some_and(|rep| rep.alg_cost >= lb);
                pass &= r.check("tour_eq_expected") == Some(true);
                pass &= cost_ok(&r) && dt < Duration::from_secs(60);
                if let (Some(rep), true) = (rep, *alg == "nearest_neighbor") {
                    let f = opt_formula(&p).unwrap();
                    deltas.push(format!("x={x},N={n}:{:+}", rep.opt_surrogate_cost as i128 - f as i128));
                }
                slowest = slowest.max(dt);
                runs.0.push((r, dt));
            }
        }
    }
    say(&format!(
        "      chain tour minus ((x+1)(x+2)+1)V_N+(2x-1)e_N: {}",
        deltas.join(" ")
    ));
    Outcome {
        id: 3,
        name: "chain: ALG >= x^2 (U°_N + 2 e_N)",
        pass,
        detail: format!("slowest run {:.2}s", slowest.as_secs_f64()),
    }
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut checked = 0;
    for x in 2..=32u64 {
        for y in 0..=x / 2 {
            for i in -1..=5 {
                if let Ok(e) = edge_weight(x, y, i) {
                    pass &= edge_weight_product(x, y, i).ok() == Some(e);
                    if i >= 0 {
                        pass &= edge_weight(x, y, i - 1).unwrap() * (x + y) as u128 == e || i == 0;
                    }
                    checked += 1;
                }
                if let Ok(u) = u_bound(x, y, i) {
                    pass &= u_bound_closed(x, y, i).ok() == Some(u);
                    checked += 1;
                }
            }
            if y == x / 2 && x % 2 == 0 {
                for n in 0..=5u32 {
                    let lhs = ucirc_bound(x, y, n).and_then(|u| Ok(u.checked_add(2 * edge_weight(x, y, n as i32)?)));
                    if let Ok(Some(lhs)) = lhs {
                        pass &= ucirc_plus_two_closed(x, n).ok() == Some(lhs);
                        checked += 1;
                    }
                }
            }
        }
    }
    Outcome {
        id: 4,
        name: "recursion identities, x <= 32, i <= 5",
        pass,
        detail: format!("{checked} identities"),
    }
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for top in [Topology::Rec, Topology::Chain] {
        for n in 0..=3u32 {
            let ratios: Vec<BigRational> = (4..=12)
                .map(|k| {
                    let x = 1u64 << k;
                    let p = match top {
                        Topology::Rec => Params::rec(x, 0, n),
                        _ => Params::chain(x, n),
                    };
                    analytic_ratio(&p).unwrap()
                })
                .collect();
            pass &= ratios.windows(2).all(|w| w[0] < w[1]);
            let last = analysis::to_f64(ratios.last().unwrap());
            let lim = analysis::to_f64(&limit_value(top, n));
            let rel = (lim - last).abs() / lim;
            pass &= rel <= 0.02;
            detail += &format!("{top}{n}:{:.3}% ", rel * 100.0);
        }
    }
    Outcome {
        id: 5,
        name: "analytic ratio increasing, within 2% at x=2^12",
        pass,
        detail,
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    for x in 2..=8u64 {
        let simple = run_world(Params::simple(x));
        pass &= block_oracle(&simple)
            .ok()
            .flatten()
            .is_some_and(|o| o.exact == x as u128);
        for y in 0..=x / 2 {
            let rec = run_world(Params::rec(x, y, 1));
            pass &= block_oracle(&rec)
                .ok()
                .flatten()
                .is_some_and(|o| o.exact == x as u128 + 2);
        }
    }
    let dt = start.elapsed();
    pass &= dt < Duration::from_secs(5);
    Outcome {
        id: 6,
        name: "Held-Karp on single blocks: x and x+2",
        pass,
        detail: format!("{:.2}s", dt.as_secs_f64()),
    }
}

fn run_world(p: Params) -> AdversaryWorld {
    let mut w = AdversaryWorld::with_logging(p, false).unwrap();
    run(&mut NearestNeighbor::default(), &mut w, StepBudget::default()).unwrap();
    w.finalize().unwrap();
    w
}

fn criterion_7(runs: &Runs) -> Outcome {
    let total = runs.0.len();
    let valid = runs
        .0
        .iter()
        .filter(|(r, _)| r.check("replay_valid") == Some(true))
        .count();
    let mut same = 0;
    for (r, _) in &runs.0 {
        let again = run_one(r.params, &r.algorithm, RunOptions::default());
        if again.trace_digest == r.trace_digest && csv_row(&again) == csv_row(r) {
            same += 1;
        }
    }
    Outcome {
        id: 7,
        name: "replay_validate on every run, identical reruns",
        pass: valid == total && same == total,
        detail: format!("{valid}/{total} valid, {same}/{total} identical"),
    }
}

fn criterion_8() -> Outcome {
    let (x, n) = (12u64, 2u32);
    let p = Params::chain(x, n);
    let mut w = AdversaryWorld::with_logging(p, false).unwrap();
    run(&mut Dfs::default(), &mut w, StepBudget::default()).unwrap();
    let g = w.finalize().unwrap();
    let k = weight_lift(&g).distinct_weight_count();
    let mut pass = k == n as usize + 2;
    let bar = lifted_limit_value(k as u32) - q(1, 2);
    let mut detail = format!("k={k} ");
    let lift = RunOptions {
        lift: true,
        ..Default::default()
    };
    for alg in registry() {
        let r = run_one(p, alg, lift);
        pass &= r.distinct_weights == n as usize + 2 && cost_ok(&r);
        match &r.report {
            Some(rep) => {
                pass &= rep.measured_ratio > bar;
                detail += &format!("{alg}:{:.4} ", rep.ratio_f64());
            }
            None => pass = false,
        }
    }
    detail += &format!("bar {:.4}", analysis::to_f64(&bar));
    Outcome {
        id: 8,
        name: "lifted chain: N+2 weights, ratio > 10/3-2/(3k)-1/2",
        pass,
        detail,
    }
}

#[test]
fn acceptance() {
    let mut runs = Runs(Vec::new());
    let mut all = Vec::new();
    let mut report = |o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        say(&format!("{tag} [{}] {} ({})", o.id, o.name, o.detail.trim_end()));
        all.push(o.pass);
    };
    report(criterion_1(&mut runs));
    report(criterion_2(&mut runs));
    report(criterion_3(&mut runs));
    report(criterion_4());
    report(criterion_5());
    report(criterion_6());
    report(criterion_7(&runs));
    report(criterion_8());
    assert!(all.iter().all(|&p| p), "some acceptance criteria failed");
}
