//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
//!
//! Runs as a plain binary (no libtest harness) so every criterion is evaluated
//! and reported even when an earlier one fails.

use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use defcount::bounds::{self, evaluate};
use defcount::harness::{self, run_experiment_with, Algorithm, Execution, TrialConfig};
use serde_json::Value;

include!("../../core/tests/oracle/reference_values.rs");

/// Width of the binomial allowance on failure rates.
const SIGMAS: f64 = 3.0;
const BOUNDS_REL_TOL: f64 = 1e-9;
const LEADING_RATIO_MAX: f64 = 1.6;

const STANDARD_N: u64 = 1_000_000;
const STANDARD_D: u64 = 50;
const STANDARD_DELTA: f64 = 0.01;
const STANDARD_TRIALS: u64 = 2000;
const STANDARD_SEED: u64 = 20_240_601;

const GRID_N: u64 = 100_000;
const GRID_D: [u64; 7] = [1, 2, 4, 8, 16, 32, 64];
const GRID_DELTA: [f64; 3] = [0.3, 0.1, 0.01];
const GRID_TRIALS: u64 = 10_000;
const GRID_SEED: u64 = 6;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn defcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defcount")).args(args).output().expect("binary runs")
}

fn margin(delta: f64, trials: u64) -> f64 {
    delta + SIGMAS * (delta * (1.0 - delta) / trials as f64).sqrt()
}

fn c1_exhaustive() -> Verdict {
    let start = Instant::now();
    let out = defcount(&["verify", "--n-small", "12"]);
    let secs = start.elapsed().as_secs_f64();
    let text = String::from_utf8_lossy(&out.stdout);
    let ok = out.status.success()
        && text.contains("8192 oracle sets × variants verified (4096 sets, 2 variants)")
        && text.contains("all checks passed")
        && secs < 60.0;
    let summary = text.lines().collect::<Vec<_>>().join(" | ");
    verdict(ok, format!("verify --n-small 12 exit {:?} in {secs:.2}s: {summary}", out.status.code()))
}

struct GridPoint {
    d: u64,
    delta: f64,
    max_ratio: f64,
    all_eight: bool,
    shortfall_rate: f64,
}

fn estimate_grid() -> Vec<GridPoint> {
    let mut points = Vec::new();
    for d in GRID_D {
        for delta in GRID_DELTA {
            let config = TrialConfig::new(GRID_N, d, delta, GRID_TRIALS, GRID_SEED, Algorithm::EstimateOnly);
            let (agg, records) = run_experiment_with(&config, Execution::Parallel).expect("valid grid point");
            points.push(GridPoint {
                d,
                delta,
                max_ratio: records.iter().map(|r| r.d_estimate as f64 / d as f64).fold(0.0, f64::max),
                all_eight: records.iter().all(|r| r.d_estimate == 8),
                shortfall_rate: agg.estimate_shortfalls as f64 / GRID_TRIALS as f64,
            });
        }
    }
    points
}

fn c2_estimate_ceiling(grid: &[GridPoint]) -> Verdict {
    let worst = grid.iter().map(|p| p.max_ratio).fold(0.0, f64::max);
    let single_ok = grid.iter().filter(|p| p.d == 1).all(|p| p.all_eight);
    verdict(
        worst <= 8.0 && single_ok,
        format!(
            "{} points × {GRID_TRIALS} trials: max D/d = {worst}, d=1 always D=8: {single_ok}",
            grid.len()
        ),
    )
}

fn c3_estimate_success(grid: &[GridPoint]) -> Verdict {
    let bad: Vec<String> = grid
        .iter()
        .filter(|p| p.shortfall_rate > margin(p.delta, GRID_TRIALS))
        .map(|p| format!("d={} δ={} rate={}", p.d, p.delta, p.shortfall_rate))
        .collect();
    let worst = grid.iter().map(|p| p.shortfall_rate).fold(0.0, f64::max);
    if bad.is_empty() {
        verdict(true, format!("fraction with D < d at most {worst} across the grid"))
    } else {
        verdict(false, format!("over margin: {}", bad.join("; ")))
    }
}

struct Standard {
    aggregate: Value,
    totals: Vec<u64>,
}

fn standard_run() -> Standard {
    let n = STANDARD_N.to_string();
    let d = STANDARD_D.to_string();
    let delta = STANDARD_DELTA.to_string();
    let trials = STANDARD_TRIALS.to_string();
    let seed = STANDARD_SEED.to_string();
    let out = defcount(&[
        "run", "--n", &n, "--d", &d, "--delta", &delta, "--trials", &trials, "--seed", &seed,
        "--algorithm", "find_d", "--format", "json", "--per-trial",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    let totals = v["trials"]
        .as_array()
        .expect("per-trial rows")
        .iter()
        .map(|t| t["queries_total"].as_u64().expect("integer queries"))
        .collect();
    Standard { aggregate: v["aggregate"].clone(), totals }
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing {key}"))
}

fn c4_find_d_success(s: &Standard) -> Verdict {
    let rate = num(&s.aggregate, "failure_rate");
    let limit = margin(STANDARD_DELTA, STANDARD_TRIALS);
    verdict(rate <= limit, format!("failure rate {rate} (limit {limit:.5})"))
}

fn c5_query_budget(s: &Standard) -> Verdict {
    let budget = harness::find_d_query_budget(STANDARD_D, STANDARD_DELTA).expect("d ≥ 1");
    let over = s.totals.iter().filter(|&&q| q as f64 > budget).count();
    let ratio = num(&s.aggregate, "leading_term_ratio");
    verdict(
        over == 0 && ratio <= LEADING_RATIO_MAX,
        format!(
            "{over} trial(s) over the per-trial budget {budget:.1}; mean {} / d·log2(d/δ) {} = ratio {ratio:.4} (limit {LEADING_RATIO_MAX})",
            num(&s.aggregate, "mean_queries"),
            num(&s.aggregate, "ub_theorem5"),
        ),
    )
}

fn c6_beats_cheng(s: &Standard) -> Verdict {
    let mean = num(&s.aggregate, "mean_queries");
    let cheng = bounds::cheng_upper(STANDARD_D, STANDARD_DELTA).expect("valid");
    verdict(mean < cheng, format!("mean {mean} vs ub_cheng {cheng:.4}"))
}

fn c7_lower_bound(s: &Standard) -> Verdict {
    let min = num(&s.aggregate, "min_queries");
    let lb = bounds::lower_bound(STANDARD_D, STANDARD_DELTA).expect("valid");
    let threshold = bounds::regime_threshold(STANDARD_N, STANDARD_D).expect("n ≥ d");
    verdict(
        STANDARD_DELTA >= threshold && min >= lb,
        format!("min {min} vs lb_theorem1 {lb:.4} (regime δ ≥ {threshold:.3e})"),
    )
}

fn c8_bounds() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut missing = Vec::new();
    for &(bound, n, d, delta, want) in REFERENCE {
        match evaluate(bound, n, d, delta).value {
            Some(got) => worst = worst.max(((got - want) / want).abs()),
            None => missing.push(format!("{}({d},{delta})", bound.name())),
        }
    }
    verdict(
        missing.is_empty() && worst <= BOUNDS_REL_TOL,
        format!("{} reference values, worst relative error {worst:.2e}; missing {missing:?}", REFERENCE.len()),
    )
}

fn c9_determinism() -> Verdict {
    let args = ["run", "--n", "100000", "--d", "20", "--delta", "0.05", "--trials", "500", "--seed", "9", "--per-trial"];
    let a = defcount(&args);
    let b = defcount(&args);
    let bytes_equal = a.status.success() && a.stdout == b.stdout;
    let config = TrialConfig::new(100_000, 20, 0.05, 500, 9, Algorithm::FindD);
    let serial = run_experiment_with(&config, Execution::Serial).expect("valid");
    let parallel = run_experiment_with(&config, Execution::Parallel).expect("valid");
    verdict(
        bytes_equal && serial == parallel,
        format!("repeated run byte-identical: {bytes_equal}; serial == parallel: {}", serial == parallel),
    )
}

fn main() -> ExitCode {
    let mut verdicts: Vec<(&str, Verdict)> = Vec::new();
    let mut record = |name, v: Verdict| {
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        verdicts.push((name, v));
    };

    record("C1 exhaustive correctness", c1_exhaustive());
    let grid = estimate_grid();
    record("C2 estimate never exceeds 8d", c2_estimate_ceiling(&grid));
    record("C3 estimate success probability", c3_estimate_success(&grid));
    let standard = standard_run();
    record("C4 find_d success probability", c4_find_d_success(&standard));
    record("C5 find_d query budget", c5_query_budget(&standard));
    record("C6 beats the 4x baseline curve", c6_beats_cheng(&standard));
    record("C7 lower-bound consistency", c7_lower_bound(&standard));
    record("C8 bounds calculator", c8_bounds());
    record("C9 determinism", c9_determinism());

    let failed: Vec<&str> = verdicts.iter().filter(|(_, v)| !v.pass).map(|(n, _)| *n).collect();
    println!("acceptance: {} passed, {} failed", verdicts.len() - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
