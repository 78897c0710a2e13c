use crate::error::{Error, Result};
use crate::itemset::{ItemSet, Pool};
use crate::partition::BlockPartition;

/// Hidden defective set plus an exact query counter.
///
/// Algorithms see the defectives only through [`DefectiveOracle::answer`]; every
/// call counts, including queries whose answer could have been inferred.
#[derive(Debug, Clone)]
pub struct DefectiveOracle {
    defectives: ItemSet,
    members: Vec<u64>,
    query_count: u64,
    transcript: Option<Vec<TranscriptEntry>>,
}

/// One recorded query: the pool as an explicit set and the answer it got.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub query: ItemSet,
    pub answer: bool,
}

impl DefectiveOracle {
    pub fn new(defectives: ItemSet) -> Result<Self> {
        if defectives.universe_size() == 0 {
            return Err(Error::EmptyUniverse);
        }
        let members = defectives.to_vec();
        Ok(DefectiveOracle { defectives, members, query_count: 0, transcript: None })
    }

    /// Records every query as an explicit set. Each recorded query costs `O(n)`,
    /// so this is meant for audits on small universes.
    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    /// Answers `1` iff the pool contains at least one defective item.
    pub fn answer<P: Pool + ?Sized>(&mut self, query: &P) -> Result<bool> {
        if query.universe_size() != self.universe_size() {
            return Err(Error::UniverseMismatch {
                oracle: self.universe_size(),
                query: query.universe_size(),
            });
        }
        self.query_count += 1;
        let answer = self.members.iter().any(|&item| query.contains(item));
        if let Some(transcript) = &mut self.transcript {
            transcript.push(TranscriptEntry { query: query.materialize(), answer });
        }
        Ok(answer)
    }

    pub fn universe_size(&self) -> u64 {
        self.defectives.universe_size()
    }

    pub fn query_count(&self) -> u64 {
        self.query_count
    }

    pub fn transcript(&self) -> Option<&[TranscriptEntry]> {
        self.transcript.as_deref()
    }

    /// The hidden set. For harness bookkeeping and white-box checks only;
    /// algorithms must not look.
    pub fn defectives(&self) -> &ItemSet {
        &self.defectives
    }

    pub fn defective_count(&self) -> u64 {
        self.defectives.len()
    }
}

/// The interface splitting searches run against: tests on explicit sets over `[N]`.
pub trait TestOracle {
    fn universe_size(&self) -> u64;

    fn test(&mut self, query: &ItemSet) -> Result<bool>;
}

impl TestOracle for DefectiveOracle {
    fn universe_size(&self) -> u64 {
        DefectiveOracle::universe_size(self)
    }

    fn test(&mut self, query: &ItemSet) -> Result<bool> {
        self.answer(query)
    }
}

/// Super-item oracle: each query `Q ⊆ [N]` is asked as `⋃_{j ∈ Q} Q_j` on the item oracle.
///
/// `Q` tests positive iff one of its blocks holds a defective item.
#[derive(Debug)]
pub struct LiftedOracle<'a> {
    oracle: &'a mut DefectiveOracle,
    partition: &'a BlockPartition,
}

impl<'a> LiftedOracle<'a> {
    pub fn new(oracle: &'a mut DefectiveOracle, partition: &'a BlockPartition) -> Result<Self> {
        if partition.universe_size() != oracle.universe_size() {
            return Err(Error::UniverseMismatch {
                oracle: oracle.universe_size(),
                query: partition.universe_size(),
            });
        }
        Ok(LiftedOracle { oracle, partition })
    }
}

impl TestOracle for LiftedOracle<'_> {
    fn universe_size(&self) -> u64 {
        self.partition.block_count()
    }

    fn test(&mut self, query: &ItemSet) -> Result<bool> {
        let lifted = self.partition.lift(query)?;
        self.oracle.answer(&lifted)
    }
}
