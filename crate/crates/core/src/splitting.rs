//! Deterministic binary-splitting searches that recover the whole defective set.
//!
//! Both searches keep a candidate set `C` known to contain a defective and halve
//! it: the left half (the `⌈|C|/2⌉` smallest ids) is tested, and when it comes
//! back negative the right half is known positive without a test.

use crate::error::{Error, Result};
use crate::itemset::ItemSet;
use crate::oracle::TestOracle;

/// Recovered defective set and the number of tests spent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub defectives: ItemSet,
    pub queries: u64,
}

struct Counting<'a, T: ?Sized> {
    oracle: &'a mut T,
    queries: u64,
}

impl<T: TestOracle + ?Sized> Counting<'_, T> {
    fn test(&mut self, query: &ItemSet) -> Result<bool> {
        let answer = self.oracle.test(query)?;
        self.queries += 1;
        Ok(answer)
    }

    /// Narrows a known-positive set down to one defective item.
    fn isolate(&mut self, mut candidates: ItemSet) -> Result<u64> {
        while candidates.len() > 1 {
            let (left, right) = candidates.split_half();
            candidates = if self.test(&left)? { left } else { right };
        }
        Ok(candidates.first().expect("known-positive set is non-empty"))
    }
}

fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

/// `D + d·(1 + ⌈log2 ⌈N/D⌉⌉)`: the most tests [`find_defectives_bounded`] may use.
pub fn bounded_query_limit(universe_size: u64, groups: u64, defectives: u64) -> u64 {
    groups + defectives * (1 + ceil_log2(universe_size.div_ceil(groups)))
}

/// `2·d·⌈log2 N⌉ + 1` for `d ≥ 1`, and `1` for `d = 0`.
pub fn unbounded_query_limit(universe_size: u64, defectives: u64) -> u64 {
    2 * defectives * ceil_log2(universe_size) + 1
}

/// Group splitting with `groups` contiguous groups (`1 ≤ groups ≤ N`).
///
/// Groups have size `⌈N/groups⌉` or `⌊N/groups⌋`, larger ones first. Each group
/// is tested; while it is positive one defective is isolated by halving and
/// removed, then the remainder is tested again.
pub fn find_defectives_bounded<T: TestOracle + ?Sized>(
    oracle: &mut T,
    groups: u64,
) -> Result<SplitOutcome> {
    let n = oracle.universe_size();
    if groups == 0 || groups > n {
        return Err(Error::param("groups", format!("must lie in [1, {n}], got {groups}")));
    }
    let mut search = Counting { oracle, queries: 0 };
    let mut found = Vec::new();

    let (base, larger) = (n / groups, n % groups);
    let mut next = 1;
    for g in 0..groups {
        let size = base + u64::from(g < larger);
        let mut group = ItemSet::interval(n, next, next + size - 1)?;
        next += size;
        while !group.is_empty() && search.test(&group)? {
            let item = search.isolate(group.clone())?;
            found.push(item);
            group = group.without(item);
        }
    }

    Ok(SplitOutcome { defectives: ItemSet::from_ids(n, found)?, queries: search.queries })
}

/// Stack-based bisection for an unknown number of defectives.
pub fn find_defectives_unbounded<T: TestOracle + ?Sized>(oracle: &mut T) -> Result<SplitOutcome> {
    let n = oracle.universe_size();
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let mut search = Counting { oracle, queries: 0 };
    let mut found = Vec::new();
    // (set, known positive)
    let mut stack = vec![(ItemSet::full(n), false)];

    while let Some((mut set, positive)) = stack.pop() {
        if !positive && !search.test(&set)? {
            continue;
        }
        while set.len() > 1 {
            let (left, right) = set.split_half();
            if search.test(&left)? {
                stack.push((right, false));
                set = left;
            } else {
                set = right;
            }
        }
        found.push(set.first().expect("positive set is non-empty"));
    }

    Ok(SplitOutcome { defectives: ItemSet::from_ids(n, found)?, queries: search.queries })
}
