use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_delta, Error, Result};
use crate::itemset::ItemSet;
use crate::oracle::DefectiveOracle;
use crate::partition::Preimage;
use crate::random::{RandomFunction, RandomSeed};

/// One round at level `k`: `count` of the `k` cells tested positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateRound {
    pub k: u64,
    pub round: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateResult {
    /// `0` when the whole universe tests negative, otherwise a power of two `≥ 2`.
    pub d_estimate: u64,
    pub queries_used: u64,
    pub rounds: Vec<EstimateRound>,
}

/// Rounds at level `k`: `⌈2·log2(1/δ) / k⌉`.
pub fn rounds_per_level(k: u64, delta: f64) -> u64 {
    (2.0 * (1.0 / delta).log2() / k as f64).ceil() as u64
}

/// Estimates the number of defectives within a factor of 8.
///
/// Runs on the seed's algorithm stream; see [`estimate_with_rng`].
pub fn estimate(
    oracle: &mut DefectiveOracle,
    n: u64,
    delta: f64,
    seed: RandomSeed,
) -> Result<EstimateResult> {
    estimate_with_rng(oracle, n, delta, &mut seed.algorithm_rng())
}

/// Estimates the number of defectives within a factor of 8.
///
/// A single test of the whole universe handles `d = 0` (returns `0`). Then for
/// `k = 2, 4, 8, …` up to `⌈2·log2(1/δ)/k⌉` rounds each hash the items into `k`
/// cells with a fresh uniform function and test every cell. Any round with at
/// least `k/4` positive cells moves on to the next `k`; when every round at
/// level `k` stays below `k/4` the procedure returns `k`.
///
/// For `d ≥ 1` the result satisfies `D ≤ 8d` on every run (a round can never see
/// more than `d` positive cells, and `d < k/4` once `k > 4d`) and `D ≥ d` with
/// probability at least `1 − δ`.
pub fn estimate_with_rng<R: Rng + ?Sized>(
    oracle: &mut DefectiveOracle,
    n: u64,
    delta: f64,
    rng: &mut R,
) -> Result<EstimateResult> {
    let delta = check_delta(delta)?;
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let start = oracle.query_count();
    let mut rounds = Vec::new();

    if !oracle.answer(&ItemSet::full(n))? {
        return Ok(EstimateResult { d_estimate: 0, queries_used: oracle.query_count() - start, rounds });
    }

    let mut k: u64 = 2;
    loop {
        let t = rounds_per_level(k, delta);
        let mut advanced = false;
        for round in 1..=t {
            let f = RandomFunction::draw(n, k, rng);
            let mut count = 0;
            for cell in 1..=k {
                if oracle.answer(&Preimage { function: &f, cell })? {
                    count += 1;
                }
            }
            rounds.push(EstimateRound { k, round, count });
            // count ≥ k/4, kept in integers
            if 4 * count >= k {
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(EstimateResult { d_estimate: k, queries_used: oracle.query_count() - start, rounds });
        }
        k = k.checked_mul(2).ok_or_else(|| Error::param("k", "estimate level overflowed"))?;
    }
}
