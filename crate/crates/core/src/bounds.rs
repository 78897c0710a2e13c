//! Closed-form query bounds, used as reference curves.
//!
//! All logarithms are base 2. Raw values are returned unclamped, so lower
//! bounds can be negative for loose parameter choices; display layers clamp.

use serde::{Deserialize, Serialize};

use crate::error::{check_delta, Error, Result};

fn check_d(d: u64) -> Result<()> {
    if d == 0 {
        Err(Error::param("d", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Leading term of the composed estimate-and-split algorithm: `d·log2(d/δ)`.
pub fn upper_leading_term(d: u64, delta: f64) -> Result<f64> {
    check_d(d)?;
    let delta = check_delta(delta)?;
    Ok(d as f64 * (d as f64 / delta).log2())
}

/// Comparison curve for the earlier counting algorithm: `4·d·log2(d/δ)`.
pub fn cheng_upper(d: u64, delta: f64) -> Result<f64> {
    Ok(4.0 * upper_leading_term(d, delta)?)
}

/// Lower bound for any Monte Carlo counter when `δ ≥ 1/(2(n−d+1))`:
/// `d·log2(1/(2dδ)) − 1`.
pub fn lower_bound(d: u64, delta: f64) -> Result<f64> {
    check_d(d)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidDelta(delta));
    }
    Ok(d as f64 * (1.0 / (2.0 * d as f64 * delta)).log2() - 1.0)
}

/// Leading term `d·log2(n/d)` of the lower bound when `δ ≤ 1/(2(n−d+1))`.
pub fn lower_bound_small_delta(n: u64, d: u64) -> Result<f64> {
    check_d(d)?;
    if d > n {
        return Err(Error::param("d", format!("must not exceed n = {n}, got {d}")));
    }
    Ok(d as f64 * (n as f64 / d as f64).log2())
}

/// Lower bound for large universes:
/// `(1 − (log2 d + log2(1/δ) + 1)/(log2 n + log2(1/δ)))·d·log2(1/(2δ))`.
pub fn lower_bound_large_n(n: u64, d: u64, delta: f64) -> Result<f64> {
    check_d(d)?;
    let delta = check_delta(delta)?;
    if d > n {
        return Err(Error::param("d", format!("must not exceed n = {n}, got {d}")));
    }
    let inv = (1.0 / delta).log2();
    let d_f = d as f64;
    let correction = 1.0 - (d_f.log2() + inv + 1.0) / ((n as f64).log2() + inv);
    Ok(correction * d_f * (1.0 / (2.0 * delta)).log2())
}

/// Lower bound on the expected number of queries, in explicit pre-limit form:
/// `(1 − 1/d)(1 − η)(d·log2(τ/(dδ)) − log2(1/(1−η)))` with
/// `τ = 1/(d·log2(1/(dδ)))` and `η = 1/log2(1/(dδ))`.
///
/// Defined for `d ≥ 2` and `0 < dδ < 1/2` (so `η < 1`), and only meaningful
/// while `τ/(dδ) ≥ 1`; anything else is [`Error::OutsideRegime`].
pub fn lower_bound_expected(d: u64, delta: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutsideRegime(format!("requires d >= 2, got {d}")));
    }
    let delta = check_delta(delta)?;
    let d_f = d as f64;
    let d_delta = d_f * delta;
    if d_delta >= 0.5 {
        return Err(Error::OutsideRegime(format!("requires d*delta < 1/2, got {d_delta}")));
    }
    let log_inv = (1.0 / d_delta).log2();
    let tau = 1.0 / (d_f * log_inv);
    let eta = 1.0 / log_inv;
    let ratio = tau / d_delta;
    if ratio < 1.0 {
        return Err(Error::OutsideRegime(format!(
            "requires tau/(d*delta) >= 1, got {ratio}"
        )));
    }
    Ok((1.0 - 1.0 / d_f) * (1.0 - eta) * (d_f * ratio.log2() - (1.0 / (1.0 - eta)).log2()))
}

/// Every bound curve, identified by its output column name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    UbTheorem5,
    UbCheng,
    LbTheorem1,
    LbTheorem1SmallDelta,
    LbTheorem2,
    LbAppendix,
}

impl Bound {
    pub const ALL: [Bound; 6] = [
        Bound::UbTheorem5,
        Bound::UbCheng,
        Bound::LbTheorem1,
        Bound::LbTheorem1SmallDelta,
        Bound::LbTheorem2,
        Bound::LbAppendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Bound::UbTheorem5 => "ub_theorem5",
            Bound::UbCheng => "ub_cheng",
            Bound::LbTheorem1 => "lb_theorem1",
            Bound::LbTheorem1SmallDelta => "lb_theorem1_small_delta",
            Bound::LbTheorem2 => "lb_theorem2",
            Bound::LbAppendix => "lb_appendix",
        }
    }

    /// Human-readable condition under which the curve is a valid bound.
    pub fn condition(self) -> &'static str {
        match self {
            Bound::UbTheorem5 | Bound::UbCheng => "leading term; always",
            Bound::LbTheorem1 => "requires delta >= 1/(2(n-d+1))",
            Bound::LbTheorem1SmallDelta => "requires delta <= 1/(2(n-d+1)); leading term",
            Bound::LbTheorem2 => "requires n >= d",
            Bound::LbAppendix => "requires d >= 2 and d*delta < 1/2 and tau/(d*delta) >= 1",
        }
    }

    pub fn is_lower(self) -> bool {
        !matches!(self, Bound::UbTheorem5 | Bound::UbCheng)
    }
}

/// One bound evaluated at `(n, d, δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub bound: Bound,
    pub n: Option<u64>,
    pub d: u64,
    pub delta: f64,
    /// Raw formula value; `None` when the formula cannot be evaluated.
    pub value: Option<f64>,
    /// Whether the regime condition holds at this point.
    pub applies: bool,
    /// Why the value is missing or the regime fails.
    pub reason: Option<String>,
}

/// `1/(2(n−d+1))`: the confidence threshold separating the two lower-bound regimes.
pub fn regime_threshold(n: u64, d: u64) -> Option<f64> {
    (n >= d).then(|| 1.0 / (2.0 * (n - d + 1) as f64))
}

pub fn evaluate(bound: Bound, n: Option<u64>, d: u64, delta: f64) -> BoundPoint {
    let needs_n = || n.ok_or_else(|| Error::param("n", "required for this bound"));
    let value = match bound {
        Bound::UbTheorem5 => upper_leading_term(d, delta),
        Bound::UbCheng => cheng_upper(d, delta),
        Bound::LbTheorem1 => lower_bound(d, delta),
        Bound::LbTheorem1SmallDelta => needs_n().and_then(|n| lower_bound_small_delta(n, d)),
        Bound::LbTheorem2 => needs_n().and_then(|n| lower_bound_large_n(n, d, delta)),
        Bound::LbAppendix => lower_bound_expected(d, delta),
    };
    let threshold = n.and_then(|n| regime_threshold(n, d));
    let (applies, regime_reason) = match bound {
        Bound::LbTheorem1 => match threshold {
            Some(t) if delta >= t => (true, None),
            Some(t) => (false, Some(format!("delta < 1/(2(n-d+1)) = {t:.6e}"))),
            None => (false, Some("n unknown or n < d".to_string())),
        },
        Bound::LbTheorem1SmallDelta => match threshold {
            Some(t) if delta <= t => (true, None),
            Some(t) => (false, Some(format!("delta > 1/(2(n-d+1)) = {t:.6e}"))),
            None => (false, Some("n unknown or n < d".to_string())),
        },
        _ => (value.is_ok(), None),
    };
    match value {
        Ok(v) => BoundPoint { bound, n, d, delta, value: Some(v), applies, reason: regime_reason },
        Err(e) => BoundPoint {
            bound,
            n,
            d,
            delta,
            value: None,
            applies: false,
            reason: Some(e.to_string()),
        },
    }
}
