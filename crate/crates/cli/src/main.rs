//! `defcount`: run group-testing experiments, sweeps, bound tables and
//! exhaustive self-checks.
//!
//! Exit codes: 0 success, 1 assertion or verification failure, 2 usage error.

mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use defcount::bounds::{self, Bound};
use defcount::harness::{
    self, Algorithm, Defectives, Execution, SearchVariant, SweepGrid, TrialConfig,
};
use serde_json::json;

use output::{
    csv_table, AggregateRow, BoundRow, TrialRow, AGGREGATE_HEADER, BOUNDS_HEADER, TRIAL_HEADER,
};

#[derive(Debug, Parser)]
#[command(name = "defcount", version, about = "Adaptive group testing: count defective items")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one seeded Monte Carlo experiment.
    Run(RunArgs),
    /// Run one experiment per point of an (n, d, delta) grid.
    Sweep(SweepArgs),
    /// Tabulate the closed-form query bounds.
    Bounds(BoundsArgs),
    /// Check both splitting searches on every defective set of a small universe.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_delta(s: &str) -> Result<f64, String> {
    let delta: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if delta > 0.0 && delta < 1.0 {
        Ok(delta)
    } else {
        Err(format!("delta must lie strictly between 0 and 1, got {s}"))
    }
}

fn parse_positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".to_string()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("defective_set").required(true).args(["d", "defectives"]))]
struct RunArgs {
    #[arg(long, value_parser = parse_positive)]
    n: u64,
    /// Number of defectives, drawn uniformly per trial.
    #[arg(long)]
    d: Option<u64>,
    /// Explicit defective ids (1-based), used in every trial.
    #[arg(long, value_delimiter = ',')]
    defectives: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_delta)]
    delta: f64,
    #[arg(long, default_value = "1000", value_parser = parse_positive)]
    trials: u64,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, default_value = "find_d", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Also emit one row per trial.
    #[arg(long)]
    per_trial: bool,
    /// Run trials on the calling thread only.
    #[arg(long)]
    serial: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_positive)]
    n_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    d_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_delta)]
    delta_list: Vec<f64>,
    #[arg(long, default_value = "1000", value_parser = parse_positive)]
    trials: u64,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, default_value = "find_d", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long, value_parser = parse_positive)]
    n: u64,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_positive)]
    d_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_delta)]
    delta_list: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Universe size; every one of its 2^n subsets is checked.
    #[arg(long, default_value = "10", value_parser = clap::value_parser!(u64).range(1..=harness::EXHAUSTIVE_MAX_N))]
    n_small: u64,
}

enum Failure {
    Usage(String),
    Assertion(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: defcount::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(text: &str, out: &Option<PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let defectives = match (args.d, args.defectives) {
        (_, Some(ids)) => Defectives::Fixed(ids),
        (Some(d), None) => Defectives::Random(d),
        (None, None) => unreachable!("clap requires one of --d / --defectives"),
    };
    let config = TrialConfig {
        n: args.n,
        defectives,
        delta: args.delta,
        trials: args.trials,
        master_seed: args.seed,
        algorithm: args.algorithm,
    };
    config.validate().map_err(usage)?;
    let execution = if args.serial { Execution::Serial } else { Execution::Parallel };
    let (agg, records) = harness::run_experiment_with(&config, execution).map_err(usage)?;
    let row = AggregateRow::from_aggregate(&agg);
    let trials: Vec<TrialRow> = records.iter().map(TrialRow::from).collect();

    let text = match args.output.format {
        Format::Csv => {
            let mut text = csv_table(AGGREGATE_HEADER, [row.csv_fields()]);
            if args.per_trial {
                text.push('\n');
                text.push_str(&csv_table(TRIAL_HEADER, trials.iter().map(TrialRow::csv_fields)));
            }
            text
        }
        Format::Json => {
            let mut value = json!({ "config": config, "aggregate": row });
            if args.per_trial {
                value["trials"] = json!(trials);
            }
            json_text(&value)
        }
    };
    emit(&text, &args.output.out)?;

    if agg.invariant_violations > 0 {
        let first = records
            .iter()
            .find_map(|r| {
                let v = r.invariant_violations(config.algorithm);
                (!v.is_empty()).then(|| format!("trial {}: {}", r.trial_index, v.join("; ")))
            })
            .unwrap_or_default();
        return Err(Failure::Assertion(format!(
            "{} trial(s) violated a per-run invariant; first: {first}",
            agg.invariant_violations
        )));
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let grid = SweepGrid { n: args.n_list, d: args.d_list, delta: args.delta_list };
    let algorithm = args.algorithm;
    for &n in &grid.n {
        for &d in &grid.d {
            TrialConfig::new(n, d, grid.delta[0], args.trials, args.seed, algorithm)
                .validate()
                .map_err(usage)?;
        }
    }
    let rows = harness::sweep(&grid, args.trials, args.seed, algorithm).map_err(usage)?;
    let table: Vec<AggregateRow> = rows.iter().map(AggregateRow::from_aggregate).collect();
    let text = match args.output.format {
        Format::Csv => csv_table(AGGREGATE_HEADER, table.iter().map(AggregateRow::csv_fields)),
        Format::Json => json_text(&json!({
            "config": {
                "grid": grid,
                "trials": args.trials,
                "master_seed": args.seed,
                "algorithm": algorithm,
            },
            "aggregate": table,
        })),
    };
    emit(&text, &args.output.out)?;
    let violations: u64 = rows.iter().map(|a| a.invariant_violations).sum();
    if violations > 0 {
        return Err(Failure::Assertion(format!("{violations} trial(s) violated a per-run invariant")));
    }
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for &d in &args.d_list {
        for &delta in &args.delta_list {
            for bound in Bound::ALL {
                rows.push(BoundRow::from(&bounds::evaluate(bound, Some(args.n), d, delta)));
            }
        }
    }
    let text = match args.output.format {
        Format::Csv => csv_table(BOUNDS_HEADER, rows.iter().map(BoundRow::csv_fields)),
        Format::Json => json_text(&json!({
            "config": { "n": args.n, "d_list": args.d_list, "delta_list": args.delta_list },
            "aggregate": rows,
        })),
    };
    emit(&text, &args.output.out)?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let report = harness::exhaustive_verify(args.n_small).map_err(usage)?;
    let groups: Vec<String> = harness::EXHAUSTIVE_GROUPS
        .iter()
        .filter(|&&g| g <= args.n_small)
        .map(u64::to_string)
        .collect();
    println!(
        "{} oracle sets × variants verified ({} sets, {} variants)",
        report.sets_checked * report.variants,
        report.sets_checked,
        report.variants
    );
    println!(
        "bounded runs: {} (groups {}), max queries {}",
        report.bounded_runs,
        groups.join("/"),
        report.max_queries_bounded
    );
    println!(
        "unbounded runs: {}, max queries {}",
        report.unbounded_runs, report.max_queries_unbounded
    );
    if report.passed() {
        println!("all checks passed");
        return Ok(());
    }
    for f in &report.failures {
        let variant = match f.variant {
            SearchVariant::Bounded { groups } => format!("bounded D={groups}"),
            SearchVariant::Unbounded => "unbounded".to_string(),
        };
        eprintln!(
            "FAIL I={:?} {variant}: returned {:?}, {} queries (limit {}), transcript {:?}",
            f.defectives, f.returned, f.queries, f.limit, f.transcript
        );
    }
    Err(Failure::Assertion(format!("{} run(s) failed", report.failures.len())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor usage, run with --help.");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(1)
        }
    }
}
