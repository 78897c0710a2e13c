//! Adaptive group testing for counting defective items.
//!
//! A hidden set of defective items `I ⊆ {1, …, n}` can only be observed through
//! pooled tests: a test on a pool answers `1` when the pool contains at least one
//! defective and `0` otherwise. This crate provides
//!
//! - the query model ([`DefectiveOracle`]) with exact query accounting,
//! - [`estimate`], a randomized procedure returning `D` with `D ≤ 8d` always and
//!   `D ≥ d` with probability at least `1 − δ`,
//! - two deterministic binary-splitting searches that recover the defective set
//!   ([`find_defectives_bounded`], [`find_defectives_unbounded`]),
//! - [`find_d`], which composes the estimate with a random block partition to
//!   return `|I|` exactly with probability at least `1 − δ`,
//! - closed-form query bounds ([`bounds`]) and a seeded Monte Carlo harness
//!   ([`harness`]) that measures failure rates and query counts against them.
//!
//! ```
//! use defcount::{find_d, DefectiveOracle, ItemSet, RandomSeed};
//!
//! let defectives = ItemSet::from_ids(10_000, [5, 42, 977]).unwrap();
//! let mut oracle = DefectiveOracle::new(defectives).unwrap();
//! let report = find_d(&mut oracle, 10_000, 0.1, RandomSeed::new(7, 0)).unwrap();
//! assert_eq!(report.queries_total, oracle.query_count());
//! ```

#![forbid(unsafe_code)]

pub mod bounds;
mod error;
mod estimate;
mod find_d;
pub mod harness;
mod itemset;
mod oracle;
mod partition;
mod random;
mod splitting;

pub use error::{Error, Result};
pub use estimate::{estimate, estimate_with_rng, rounds_per_level, EstimateResult, EstimateRound};
pub use find_d::{block_count_for, find_d, find_d_with_rng, FindDReport};
pub use itemset::{ItemSet, Pool};
pub use oracle::{DefectiveOracle, LiftedOracle, TestOracle, TranscriptEntry};
pub use partition::{lift_query, random_partition, BlockPartition, Lifted, Preimage};
pub use random::{RandomFunction, RandomSeed};
pub use splitting::{
    bounded_query_limit, find_defectives_bounded, find_defectives_unbounded,
    unbounded_query_limit, SplitOutcome,
};
