use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_delta, Error, Result};
use crate::estimate::estimate_with_rng;
use crate::oracle::{DefectiveOracle, LiftedOracle};
use crate::partition::BlockPartition;
use crate::random::RandomSeed;
use crate::splitting::find_defectives_bounded;

/// Outcome of [`find_d`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindDReport {
    /// The reported number of defectives.
    pub delta_hat: u64,
    /// `D` from the estimate phase.
    pub d_estimate: u64,
    /// `N = ⌈D²/δ⌉`, or 0 when the estimate phase found nothing.
    pub block_count: u64,
    pub queries_estimate: u64,
    pub queries_find: u64,
    pub queries_total: u64,
    pub seed: RandomSeed,
    /// The block partition that was drawn, kept for white-box inspection.
    #[serde(skip)]
    pub partition: Option<BlockPartition>,
}

/// `⌈D²/δ⌉`.
pub fn block_count_for(d_estimate: u64, delta: f64) -> Result<u64> {
    let blocks = ((d_estimate as f64).powi(2) / delta).ceil();
    if !(blocks.is_finite() && blocks < (1u64 << 62) as f64) {
        return Err(Error::param("delta", format!("{d_estimate}^2/{delta} blocks is too many")));
    }
    Ok(blocks as u64)
}

/// Counts the defectives exactly with probability at least `1 − δ`, drawing
/// randomness from the seed's algorithm stream.
pub fn find_d(oracle: &mut DefectiveOracle, n: u64, delta: f64, seed: RandomSeed) -> Result<FindDReport> {
    let mut report = find_d_with_rng(oracle, n, delta, &mut seed.algorithm_rng())?;
    report.seed = seed;
    Ok(report)
}

/// Estimate `D` at confidence `δ/2`, hash the items into `N = ⌈D²/δ⌉` blocks,
/// and run the group-splitting search on the blocks as super-items, with every
/// super-query asked as the union of its blocks. The answer is the number of
/// defective blocks, which equals `|I|` unless two defectives share a block
/// (probability at most `d²/(2N) ≤ δ/2` once `D ≥ d`).
pub fn find_d_with_rng<R: Rng + ?Sized>(
    oracle: &mut DefectiveOracle,
    n: u64,
    delta: f64,
    rng: &mut R,
) -> Result<FindDReport> {
    let delta = check_delta(delta)?;
    let estimate = estimate_with_rng(oracle, n, delta / 2.0, rng)?;
    let mut report = FindDReport {
        delta_hat: 0,
        d_estimate: estimate.d_estimate,
        block_count: 0,
        queries_estimate: estimate.queries_used,
        queries_find: 0,
        queries_total: estimate.queries_used,
        seed: RandomSeed::new(0, 0),
        partition: None,
    };
    if estimate.d_estimate == 0 {
        return Ok(report);
    }

    let block_count = block_count_for(estimate.d_estimate, delta)?;
    let partition = BlockPartition::random(n, block_count, rng)?;
    let found = {
        let mut lifted = LiftedOracle::new(oracle, &partition)?;
        find_defectives_bounded(&mut lifted, estimate.d_estimate)?
    };

    report.delta_hat = found.defectives.len();
    report.block_count = block_count;
    report.queries_find = found.queries;
    report.queries_total = report.queries_estimate + found.queries;
    report.partition = Some(partition);
    Ok(report)
}
