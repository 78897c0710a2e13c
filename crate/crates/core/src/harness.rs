//! Seeded Monte Carlo experiments and exhaustive small-instance verification.
//!
//! Trial `i` of an experiment with master seed `s` uses the random stream
//! `(s, i)`: sub-stream 0 draws the defective set, sub-stream 1 feeds the
//! algorithm. Records are therefore a pure function of `(config, i)` and the
//! aggregate does not depend on how trials are scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Bound};
use crate::error::{check_delta, Error, Result};
use crate::estimate::estimate_with_rng;
use crate::find_d::find_d_with_rng;
use crate::itemset::ItemSet;
use crate::oracle::DefectiveOracle;
use crate::random::RandomSeed;
use crate::splitting::{
    bounded_query_limit, find_defectives_bounded, find_defectives_unbounded,
    unbounded_query_limit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    FindD,
    EstimateOnly,
    FindDefectivesBounded,
    FindDefectivesUnbounded,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::FindD,
        Algorithm::EstimateOnly,
        Algorithm::FindDefectivesBounded,
        Algorithm::FindDefectivesUnbounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FindD => "find_d",
            Algorithm::EstimateOnly => "estimate_only",
            Algorithm::FindDefectivesBounded => "find_defectives_bounded",
            Algorithm::FindDefectivesUnbounded => "find_defectives_unbounded",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::param("algorithm", format!("unknown algorithm `{s}`")))
    }
}

/// How the hidden set is chosen for each trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Defectives {
    /// A fresh uniform subset of this size per trial.
    Random(u64),
    /// The same explicit set in every trial.
    Fixed(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: u64,
    pub defectives: Defectives,
    pub delta: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub algorithm: Algorithm,
}

impl TrialConfig {
    pub fn new(n: u64, d: u64, delta: f64, trials: u64, master_seed: u64, algorithm: Algorithm) -> Self {
        TrialConfig { n, defectives: Defectives::Random(d), delta, trials, master_seed, algorithm }
    }

    /// Number of defectives per trial.
    pub fn d(&self) -> u64 {
        match &self.defectives {
            Defectives::Random(d) => *d,
            Defectives::Fixed(ids) => {
                let mut ids = ids.clone();
                ids.sort_unstable();
                ids.dedup();
                ids.len() as u64
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::EmptyUniverse);
        }
        check_delta(self.delta)?;
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        match &self.defectives {
            Defectives::Random(d) if *d > self.n => {
                Err(Error::param("d", format!("must not exceed n = {}, got {d}", self.n)))
            }
            Defectives::Fixed(ids) => ItemSet::from_ids(self.n, ids.iter().copied()).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// Outcome of one trial.
///
/// `correct` means the algorithm met its contract: the exact count for the
/// counting algorithms, `D ≥ d` for `estimate_only` (which reports no count).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub d_true: u64,
    #[serde(rename = "D")]
    pub d_estimate: u64,
    pub delta_hat: Option<u64>,
    pub correct: bool,
    pub queries_estimate: u64,
    pub queries_find: u64,
    pub queries_total: u64,
    /// The per-run query limit the algorithm is held to, if it has one.
    pub query_limit: Option<f64>,
}

impl TrialRecord {
    /// Violations of the per-trial contract that hold on every run.
    pub fn invariant_violations(&self, algorithm: Algorithm) -> Vec<String> {
        let mut out = Vec::new();
        if self.queries_total != self.queries_estimate + self.queries_find {
            out.push("queries_total != queries_estimate + queries_find".to_string());
        }
        if let Some(limit) = self.query_limit {
            if self.queries_total as f64 > limit {
                out.push(format!("queries_total {} exceeds limit {limit}", self.queries_total));
            }
        }
        let d = self.d_true;
        if matches!(algorithm, Algorithm::FindD | Algorithm::EstimateOnly) && d >= 1 {
            if self.d_estimate > 8 * d {
                out.push(format!("D = {} exceeds 8d = {}", self.d_estimate, 8 * d));
            }
        }
        if matches!(
            algorithm,
            Algorithm::FindDefectivesBounded | Algorithm::FindDefectivesUnbounded
        ) && !self.correct
        {
            out.push("deterministic search returned the wrong set".to_string());
        }
        out
    }
}

/// Explicit per-trial query budget for the composed algorithm (`d ≥ 1`):
/// `d·log2(d/δ) + 15d + (2·log2(2/δ) + 2)·⌈log2 8d⌉ + 2^(⌈log2 8d⌉+1) + 1`.
pub fn find_d_query_budget(d: u64, delta: f64) -> Result<f64> {
    let leading = bounds::upper_leading_term(d, delta)?;
    let levels = (8.0 * d as f64).log2().ceil();
    Ok(leading
        + 15.0 * d as f64
        + (2.0 * (2.0 / delta).log2() + 2.0) * levels
        + 2f64.powf(levels + 1.0)
        + 1.0)
}

/// Query budget of the estimate alone (`d ≥ 1`): `Σ_{i=1}^{⌈log2 8d⌉} (2·log2(1/δ) + 2 + 2^i)`.
pub fn estimate_query_budget(d: u64, delta: f64) -> f64 {
    let levels = (8.0 * d as f64).log2().ceil() as i32;
    (1..=levels).map(|i| 2.0 * (1.0 / delta).log2() + 2.0 + 2f64.powi(i)).sum()
}

fn draw_defectives(config: &TrialConfig, seed: RandomSeed) -> Result<ItemSet> {
    match &config.defectives {
        Defectives::Random(d) => {
            let mut rng = seed.defectives_rng();
            let ids = index::sample(&mut rng, config.n as usize, *d as usize);
            ItemSet::from_ids(config.n, ids.into_iter().map(|i| i as u64 + 1))
        }
        Defectives::Fixed(ids) => ItemSet::from_ids(config.n, ids.iter().copied()),
    }
}

pub fn run_trial(config: &TrialConfig, trial_index: u64) -> Result<TrialRecord> {
    config.validate()?;
    let seed = RandomSeed::new(config.master_seed, trial_index);
    let truth = draw_defectives(config, seed)?;
    let d_true = truth.len();
    let mut oracle = DefectiveOracle::new(truth.clone())?;
    let mut rng = seed.algorithm_rng();
    let n = config.n;

    let record = match config.algorithm {
        Algorithm::FindD => {
            let r = find_d_with_rng(&mut oracle, n, config.delta, &mut rng)?;
            TrialRecord {
                trial_index,
                d_true,
                d_estimate: r.d_estimate,
                delta_hat: Some(r.delta_hat),
                correct: r.delta_hat == d_true,
                queries_estimate: r.queries_estimate,
                queries_find: r.queries_find,
                queries_total: r.queries_total,
                query_limit: if d_true == 0 {
                    Some(1.0)
                } else {
                    Some(find_d_query_budget(d_true, config.delta)?)
                },
            }
        }
        Algorithm::EstimateOnly => {
            let r = estimate_with_rng(&mut oracle, n, config.delta, &mut rng)?;
            TrialRecord {
                trial_index,
                d_true,
                d_estimate: r.d_estimate,
                delta_hat: None,
                correct: r.d_estimate >= d_true,
                queries_estimate: r.queries_used,
                queries_find: 0,
                queries_total: r.queries_used,
                query_limit: if d_true == 0 {
                    Some(1.0)
                } else {
                    Some(estimate_query_budget(d_true, config.delta))
                },
            }
        }
        Algorithm::FindDefectivesBounded => {
            let groups = d_true.clamp(1, n);
            let r = find_defectives_bounded(&mut oracle, groups)?;
            TrialRecord {
                trial_index,
                d_true,
                d_estimate: groups,
                delta_hat: Some(r.defectives.len()),
                correct: r.defectives == truth,
                queries_estimate: 0,
                queries_find: r.queries,
                queries_total: r.queries,
                query_limit: Some(bounded_query_limit(n, groups, d_true) as f64),
            }
        }
        Algorithm::FindDefectivesUnbounded => {
            let r = find_defectives_unbounded(&mut oracle)?;
            TrialRecord {
                trial_index,
                d_true,
                d_estimate: 0,
                delta_hat: Some(r.defectives.len()),
                correct: r.defectives == truth,
                queries_estimate: 0,
                queries_find: r.queries,
                queries_total: r.queries,
                query_limit: Some(unbounded_query_limit(n, d_true) as f64),
            }
        }
    };
    debug_assert_eq!(record.queries_total, oracle.query_count());
    Ok(record)
}

/// Summary of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub config: TrialConfig,
    pub failure_rate: f64,
    pub mean_queries: f64,
    pub min_queries: u64,
    pub max_queries: u64,
    /// Population standard deviation of `queries_total`.
    pub stddev_queries: f64,
    pub mean_queries_estimate: f64,
    pub mean_queries_find: f64,
    /// Trials whose `D` fell below the true count.
    pub estimate_shortfalls: u64,
    /// Per-trial contract violations (query limits, `D ≤ 8d`, exact recovery).
    pub invariant_violations: u64,
    /// Bound curves at the configuration's `(n, d, δ)`, keyed by column name.
    pub bound_curve_values: BTreeMap<String, f64>,
}

impl Aggregate {
    /// `mean_queries / (d·log2(d/δ))`, when `d ≥ 1`.
    pub fn leading_term_ratio(&self) -> Option<f64> {
        self.bound_curve_values
            .get(Bound::UbTheorem5.name())
            .map(|lead| self.mean_queries / lead)
    }
}

pub fn bound_curve_values(n: u64, d: u64, delta: f64) -> BTreeMap<String, f64> {
    Bound::ALL
        .into_iter()
        .filter_map(|b| {
            let point = bounds::evaluate(b, Some(n), d, delta);
            point.value.map(|v| (b.name().to_string(), v))
        })
        .collect()
}

pub fn aggregate(config: &TrialConfig, records: &[TrialRecord]) -> Aggregate {
    let count = records.len().max(1) as f64;
    let totals: Vec<f64> = records.iter().map(|r| r.queries_total as f64).collect();
    let mean = totals.iter().sum::<f64>() / count;
    let var = totals.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / count;
    Aggregate {
        config: config.clone(),
        failure_rate: records.iter().filter(|r| !r.correct).count() as f64 / count,
        mean_queries: mean,
        min_queries: records.iter().map(|r| r.queries_total).min().unwrap_or(0),
        max_queries: records.iter().map(|r| r.queries_total).max().unwrap_or(0),
        stddev_queries: var.sqrt(),
        mean_queries_estimate: records.iter().map(|r| r.queries_estimate as f64).sum::<f64>() / count,
        mean_queries_find: records.iter().map(|r| r.queries_find as f64).sum::<f64>() / count,
        estimate_shortfalls: records.iter().filter(|r| r.d_estimate < r.d_true).count() as u64,
        invariant_violations: records
            .iter()
            .filter(|r| !r.invariant_violations(config.algorithm).is_empty())
            .count() as u64,
        bound_curve_values: bound_curve_values(config.n, config.d(), config.delta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

pub fn run_experiment(config: &TrialConfig) -> Result<(Aggregate, Vec<TrialRecord>)> {
    run_experiment_with(config, Execution::Parallel)
}

pub fn run_experiment_with(
    config: &TrialConfig,
    execution: Execution,
) -> Result<(Aggregate, Vec<TrialRecord>)> {
    config.validate()?;
    let records: Vec<TrialRecord> = match execution {
        Execution::Serial => (0..config.trials).map(|i| run_trial(config, i)).collect::<Result<_>>()?,
        Execution::Parallel => (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, i))
            .collect::<Result<_>>()?,
    };
    Ok((aggregate(config, &records), records))
}

/// Parameter grid for [`sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n: Vec<u64>,
    pub d: Vec<u64>,
    pub delta: Vec<f64>,
}

/// One experiment per grid point, rows ordered by `(n, d, δ)` ascending.
pub fn sweep(
    grid: &SweepGrid,
    trials: u64,
    master_seed: u64,
    algorithm: Algorithm,
) -> Result<Vec<Aggregate>> {
    if grid.n.is_empty() || grid.d.is_empty() || grid.delta.is_empty() {
        return Err(Error::param("grid", "every list must be non-empty"));
    }
    let mut ns = grid.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut ds = grid.d.clone();
    ds.sort_unstable();
    ds.dedup();
    let mut deltas = grid.delta.clone();
    for &delta in &deltas {
        check_delta(delta)?;
    }
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();

    let mut rows = Vec::new();
    for &n in &ns {
        for &d in &ds {
            for &delta in &deltas {
                let config = TrialConfig::new(n, d, delta, trials, master_seed, algorithm);
                rows.push(run_experiment(&config)?.0);
            }
        }
    }
    Ok(rows)
}

pub const EXHAUSTIVE_MAX_N: u64 = 12;
/// Group counts tried for the bounded search (those not exceeding `n`).
pub const EXHAUSTIVE_GROUPS: [u64; 3] = [1, 2, 4];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchVariant {
    Bounded { groups: u64 },
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub defectives: Vec<u64>,
    pub variant: SearchVariant,
    pub returned: Vec<u64>,
    pub queries: u64,
    pub limit: u64,
    /// `(query members, answer)` for each test that was asked.
    pub transcript: Vec<(Vec<u64>, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: u64,
    pub sets_checked: u64,
    /// Variants per set: bounded (over every group count) and unbounded.
    pub variants: u64,
    pub bounded_runs: u64,
    pub unbounded_runs: u64,
    pub max_queries_bounded: u64,
    pub max_queries_unbounded: u64,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs both searches on every subset of `[n]` (`n ≤ 12`) and checks exact
/// recovery and the per-run query limits.
pub fn exhaustive_verify(n: u64) -> Result<VerifyReport> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::BudgetExceeded { requested: n, max: EXHAUSTIVE_MAX_N });
    }
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let mut report = VerifyReport {
        n,
        sets_checked: 0,
        variants: 2,
        bounded_runs: 0,
        unbounded_runs: 0,
        max_queries_bounded: 0,
        max_queries_unbounded: 0,
        failures: Vec::new(),
    };

    for mask in 0u64..1 << n {
        let truth = ItemSet::from_ids(n, (1..=n).filter(|i| mask >> (i - 1) & 1 == 1))?;
        let d = truth.len();
        report.sets_checked += 1;

        for groups in EXHAUSTIVE_GROUPS.into_iter().filter(|&g| g <= n) {
            let mut oracle = DefectiveOracle::new(truth.clone())?.with_transcript();
            let out = find_defectives_bounded(&mut oracle, groups)?;
            let limit = bounded_query_limit(n, groups, d);
            report.bounded_runs += 1;
            report.max_queries_bounded = report.max_queries_bounded.max(out.queries);
            check_run(&mut report, &truth, &oracle, SearchVariant::Bounded { groups }, &out.defectives, out.queries, limit);
        }

        let mut oracle = DefectiveOracle::new(truth.clone())?.with_transcript();
        let out = find_defectives_unbounded(&mut oracle)?;
        let limit = unbounded_query_limit(n, d);
        report.unbounded_runs += 1;
        report.max_queries_unbounded = report.max_queries_unbounded.max(out.queries);
        check_run(&mut report, &truth, &oracle, SearchVariant::Unbounded, &out.defectives, out.queries, limit);
    }
    Ok(report)
}

fn check_run(
    report: &mut VerifyReport,
    truth: &ItemSet,
    oracle: &DefectiveOracle,
    variant: SearchVariant,
    returned: &ItemSet,
    queries: u64,
    limit: u64,
) {
    let transcript = oracle.transcript().unwrap_or_default();
    // Every recorded answer must agree with a direct intersection test.
    let consistent = transcript.iter().all(|e| e.query.intersects(truth) == e.answer);
    if returned != truth || queries > limit || queries != transcript.len() as u64 || !consistent {
        report.failures.push(VerifyFailure {
            defectives: truth.to_vec(),
            variant,
            returned: returned.to_vec(),
            queries,
            limit,
            transcript: transcript.iter().map(|e| (e.query.to_vec(), e.answer)).collect(),
        });
    }
}
