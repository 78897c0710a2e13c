use rand::Rng;

use crate::error::{Error, Result};
use crate::itemset::{ItemSet, Pool};
use crate::random::{RandomFunction, RandomSeed};

/// A function `f: [n] → [N]` viewed as the disjoint blocks `Q_i = f⁻¹(i)`.
///
/// Empty blocks are kept; block ids are never renumbered.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    universe_size: u64,
    block_count: u64,
    assignment: Assignment,
}

#[derive(Debug, Clone, PartialEq)]
enum Assignment {
    Explicit(Vec<u64>),
    Random(RandomFunction),
}

impl BlockPartition {
    /// Partition given by an explicit table; `assignment[i - 1]` is the block of item `i`.
    pub fn from_assignment(block_count: u64, assignment: Vec<u64>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if block_count == 0 {
            return Err(Error::param("block_count", "must be at least 1"));
        }
        if let Some(&block) = assignment.iter().find(|&&b| !(1..=block_count).contains(&b)) {
            return Err(Error::BlockOutOfRange { block, block_count });
        }
        Ok(BlockPartition {
            universe_size: assignment.len() as u64,
            block_count,
            assignment: Assignment::Explicit(assignment),
        })
    }

    /// Every item's block is an independent uniform draw from `1..=block_count`.
    pub fn random<R: Rng + ?Sized>(universe_size: u64, block_count: u64, rng: &mut R) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if block_count == 0 {
            return Err(Error::param("block_count", "must be at least 1"));
        }
        Ok(BlockPartition {
            universe_size,
            block_count,
            assignment: Assignment::Random(RandomFunction::draw(universe_size, block_count, rng)),
        })
    }

    pub fn universe_size(&self) -> u64 {
        self.universe_size
    }

    pub fn block_count(&self) -> u64 {
        self.block_count
    }

    /// Block id of `item` (1-based). `item` must lie in `1..=n`.
    #[inline]
    pub fn block_of(&self, item: u64) -> u64 {
        debug_assert!((1..=self.universe_size).contains(&item));
        match &self.assignment {
            Assignment::Explicit(table) => table[(item - 1) as usize],
            Assignment::Random(f) => f.eval(item),
        }
    }

    /// The full assignment table, item 1 first. Linear in `n`.
    pub fn assignment(&self) -> Vec<u64> {
        (1..=self.universe_size).map(|i| self.block_of(i)).collect()
    }

    /// The block `Q_b` as an explicit set. Linear in `n`.
    pub fn block(&self, block: u64) -> Result<ItemSet> {
        self.check_block(block)?;
        let ids = (1..=self.universe_size).filter(|&i| self.block_of(i) == block);
        ItemSet::from_ids(self.universe_size, ids)
    }

    fn check_block(&self, block: u64) -> Result<()> {
        if (1..=self.block_count).contains(&block) {
            Ok(())
        } else {
            Err(Error::BlockOutOfRange { block, block_count: self.block_count })
        }
    }

    /// Lazy view of `⋃_{j ∈ blocks} Q_j`.
    pub fn lift<'a>(&'a self, blocks: &'a ItemSet) -> Result<Lifted<'a>> {
        if blocks.universe_size() != self.block_count {
            return Err(match blocks.iter().find(|&b| b > self.block_count) {
                Some(block) => Error::BlockOutOfRange { block, block_count: self.block_count },
                None => Error::UniverseMismatch {
                    oracle: self.block_count,
                    query: blocks.universe_size(),
                },
            });
        }
        Ok(Lifted { partition: self, blocks })
    }
}

/// Draws a uniform random partition of `[n]` into `block_count` blocks from the seed's algorithm stream.
pub fn random_partition(n: u64, block_count: u64, seed: RandomSeed) -> Result<BlockPartition> {
    BlockPartition::random(n, block_count, &mut seed.algorithm_rng())
}

/// Materializes the item set `⋃_{j ∈ super_query} Q_j`.
pub fn lift_query(partition: &BlockPartition, super_query: &ItemSet) -> Result<ItemSet> {
    Ok(partition.lift(super_query)?.materialize())
}

/// A super-item query lifted to the item universe without materializing it.
#[derive(Debug, Clone, Copy)]
pub struct Lifted<'a> {
    partition: &'a BlockPartition,
    blocks: &'a ItemSet,
}

impl Pool for Lifted<'_> {
    fn universe_size(&self) -> u64 {
        self.partition.universe_size
    }

    #[inline]
    fn contains(&self, item: u64) -> bool {
        self.blocks.contains(self.partition.block_of(item))
    }
}

/// The preimage `f⁻¹(cell)` of a random function, as a pool over its domain.
#[derive(Debug, Clone, Copy)]
pub struct Preimage<'a> {
    pub function: &'a RandomFunction,
    pub cell: u64,
}

impl Pool for Preimage<'_> {
    fn universe_size(&self) -> u64 {
        self.function.domain()
    }

    #[inline]
    fn contains(&self, item: u64) -> bool {
        self.function.eval(item) == self.cell
    }
}
