//! Flat output rows and their CSV / JSON renderings.
//!
//! CSV reals carry 6 significant digits; JSON keeps full binary64 precision.
//! Negative lower-bound values are clamped to 0 in CSV only, and the `clamped`
//! column names every column that was clamped.

use std::fmt::Write as _;

use defcount::bounds::{Bound, BoundPoint};
use defcount::harness::{Aggregate, TrialRecord};
use serde::Serialize;

/// Bound columns carried by every aggregate row.
pub const AGGREGATE_BOUNDS: [Bound; 4] =
    [Bound::UbTheorem5, Bound::UbCheng, Bound::LbTheorem1, Bound::LbTheorem2];

pub const AGGREGATE_HEADER: &[&str] = &[
    "n",
    "d",
    "delta",
    "trials",
    "seed",
    "algorithm",
    "failure_rate",
    "mean_queries",
    "min_queries",
    "max_queries",
    "stddev_queries",
    "mean_queries_estimate",
    "mean_queries_find",
    "estimate_shortfalls",
    "invariant_violations",
    "leading_term_ratio",
    "ub_theorem5",
    "ub_cheng",
    "lb_theorem1",
    "lb_theorem2",
    "clamped",
];

pub const TRIAL_HEADER: &[&str] = &[
    "trial_index",
    "d_true",
    "D",
    "delta_hat",
    "correct",
    "queries_estimate",
    "queries_find",
    "queries_total",
];

pub const BOUNDS_HEADER: &[&str] =
    &["n", "d", "delta", "bound", "value", "clamped", "applies", "condition", "reason"];

/// `%g`-style formatting with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

/// Free text must not break the comma-separated layout.
fn bare(text: &str) -> String {
    text.replace([',', '"', '\n'], ";")
}

/// Clamps negative lower bounds for display.
fn display_bound(bound: Bound, value: Option<f64>) -> (Option<f64>, bool) {
    match value {
        Some(v) if bound.is_lower() && v < 0.0 => (Some(0.0), true),
        other => (other, false),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateRow {
    pub n: u64,
    pub d: u64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub algorithm: String,
    pub failure_rate: f64,
    pub mean_queries: f64,
    pub min_queries: u64,
    pub max_queries: u64,
    pub stddev_queries: f64,
    pub mean_queries_estimate: f64,
    pub mean_queries_find: f64,
    pub estimate_shortfalls: u64,
    pub invariant_violations: u64,
    pub leading_term_ratio: Option<f64>,
    /// Raw (unclamped) bound values; `None` outside the formula's domain.
    pub ub_theorem5: Option<f64>,
    pub ub_cheng: Option<f64>,
    pub lb_theorem1: Option<f64>,
    pub lb_theorem2: Option<f64>,
}

impl AggregateRow {
    pub fn from_aggregate(agg: &Aggregate) -> Self {
        let bound = |b: Bound| agg.bound_curve_values.get(b.name()).copied();
        AggregateRow {
            n: agg.config.n,
            d: agg.config.d(),
            delta: agg.config.delta,
            trials: agg.config.trials,
            seed: agg.config.master_seed,
            algorithm: agg.config.algorithm.name().to_string(),
            failure_rate: agg.failure_rate,
            mean_queries: agg.mean_queries,
            min_queries: agg.min_queries,
            max_queries: agg.max_queries,
            stddev_queries: agg.stddev_queries,
            mean_queries_estimate: agg.mean_queries_estimate,
            mean_queries_find: agg.mean_queries_find,
            estimate_shortfalls: agg.estimate_shortfalls,
            invariant_violations: agg.invariant_violations,
            leading_term_ratio: agg.leading_term_ratio(),
            ub_theorem5: bound(Bound::UbTheorem5),
            ub_cheng: bound(Bound::UbCheng),
            lb_theorem1: bound(Bound::LbTheorem1),
            lb_theorem2: bound(Bound::LbTheorem2),
        }
    }

    fn bound_value(&self, bound: Bound) -> Option<f64> {
        match bound {
            Bound::UbTheorem5 => self.ub_theorem5,
            Bound::UbCheng => self.ub_cheng,
            Bound::LbTheorem1 => self.lb_theorem1,
            Bound::LbTheorem2 => self.lb_theorem2,
            _ => None,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut fields = vec![
            self.n.to_string(),
            self.d.to_string(),
            sig6(self.delta),
            self.trials.to_string(),
            self.seed.to_string(),
            self.algorithm.clone(),
            sig6(self.failure_rate),
            sig6(self.mean_queries),
            self.min_queries.to_string(),
            self.max_queries.to_string(),
            sig6(self.stddev_queries),
            sig6(self.mean_queries_estimate),
            sig6(self.mean_queries_find),
            self.estimate_shortfalls.to_string(),
            self.invariant_violations.to_string(),
            opt_sig6(self.leading_term_ratio),
        ];
        let mut clamped = Vec::new();
        for bound in AGGREGATE_BOUNDS {
            let (shown, was_clamped) = display_bound(bound, self.bound_value(bound));
            if was_clamped {
                clamped.push(bound.name());
            }
            fields.push(opt_sig6(shown));
        }
        fields.push(if clamped.is_empty() { "none".to_string() } else { clamped.join("+") });
        fields
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub trial_index: u64,
    pub d_true: u64,
    #[serde(rename = "D")]
    pub d_estimate: u64,
    pub delta_hat: Option<u64>,
    pub correct: bool,
    pub queries_estimate: u64,
    pub queries_find: u64,
    pub queries_total: u64,
}

impl From<&TrialRecord> for TrialRow {
    fn from(r: &TrialRecord) -> Self {
        TrialRow {
            trial_index: r.trial_index,
            d_true: r.d_true,
            d_estimate: r.d_estimate,
            delta_hat: r.delta_hat,
            correct: r.correct,
            queries_estimate: r.queries_estimate,
            queries_find: r.queries_find,
            queries_total: r.queries_total,
        }
    }
}

impl TrialRow {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.trial_index.to_string(),
            self.d_true.to_string(),
            self.d_estimate.to_string(),
            self.delta_hat.map(|v| v.to_string()).unwrap_or_default(),
            self.correct.to_string(),
            self.queries_estimate.to_string(),
            self.queries_find.to_string(),
            self.queries_total.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub n: u64,
    pub d: u64,
    pub delta: f64,
    pub bound: String,
    /// Raw formula value.
    pub value: Option<f64>,
    pub applies: bool,
    pub condition: String,
    pub reason: Option<String>,
}

impl From<&BoundPoint> for BoundRow {
    fn from(p: &BoundPoint) -> Self {
        BoundRow {
            n: p.n.unwrap_or(0),
            d: p.d,
            delta: p.delta,
            bound: p.bound.name().to_string(),
            value: p.value,
            applies: p.applies,
            condition: p.bound.condition().to_string(),
            reason: p.reason.clone(),
        }
    }
}

impl BoundRow {
    pub fn csv_fields(&self) -> Vec<String> {
        let bound: Bound = Bound::ALL
            .into_iter()
            .find(|b| b.name() == self.bound)
            .expect("row built from a known bound");
        let (shown, clamped) = display_bound(bound, self.value);
        vec![
            self.n.to_string(),
            self.d.to_string(),
            sig6(self.delta),
            self.bound.clone(),
            opt_sig6(shown),
            clamped.to_string(),
            self.applies.to_string(),
            bare(&self.condition),
            bare(self.reason.as_deref().unwrap_or("")),
        ]
    }
}

pub fn csv_table<'a, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>> + 'a,
{
    let mut out = String::new();
    writeln!(out, "{}", header.join(",")).unwrap();
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}
