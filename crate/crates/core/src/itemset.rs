use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of items drawn from the universe `{1, …, n}`.
///
/// Stored as sorted, disjoint, non-adjacent half-open runs `[start, end)`, so the
/// contiguous pools produced by splitting searches stay small no matter how
/// large the universe is. The representation is canonical: two sets are equal
/// exactly when they contain the same items.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ItemSet {
    universe_size: u64,
    runs: Vec<(u64, u64)>,
    len: u64,
}

/// Anything an oracle can test: a membership predicate over a fixed universe.
///
/// Implicit pools (preimages of a random function, lifted block unions) never
/// materialize their members; the oracle only probes membership of the
/// defective items.
pub trait Pool {
    fn universe_size(&self) -> u64;

    fn contains(&self, item: u64) -> bool;

    /// Enumerates the pool into an explicit set. Linear in the universe size.
    fn materialize(&self) -> ItemSet {
        let n = self.universe_size();
        let mut set = ItemSet::empty(n);
        for item in 1..=n {
            if self.contains(item) {
                set.push_ordered(item);
            }
        }
        set
    }
}

impl ItemSet {
    pub fn empty(universe_size: u64) -> Self {
        ItemSet { universe_size, runs: Vec::new(), len: 0 }
    }

    /// The whole universe `{1, …, n}`.
    pub fn full(universe_size: u64) -> Self {
        let runs = if universe_size == 0 { Vec::new() } else { vec![(1, universe_size + 1)] };
        ItemSet { universe_size, runs, len: universe_size }
    }

    /// The contiguous range `{first, …, last}` (inclusive). Empty when `first > last`.
    pub fn interval(universe_size: u64, first: u64, last: u64) -> Result<Self> {
        if first > last {
            return Ok(Self::empty(universe_size));
        }
        for item in [first, last] {
            check_item(item, universe_size)?;
        }
        Ok(ItemSet { universe_size, runs: vec![(first, last + 1)], len: last - first + 1 })
    }

    /// Builds a set from arbitrary ids; duplicates collapse.
    pub fn from_ids<I: IntoIterator<Item = u64>>(universe_size: u64, ids: I) -> Result<Self> {
        let mut ids: Vec<u64> = ids.into_iter().collect();
        for &item in &ids {
            check_item(item, universe_size)?;
        }
        ids.sort_unstable();
        ids.dedup();
        let mut set = Self::empty(universe_size);
        for item in ids {
            set.push_ordered(item);
        }
        Ok(set)
    }

    /// Appends an item larger than every current member.
    fn push_ordered(&mut self, item: u64) {
        debug_assert!(self.runs.last().is_none_or(|&(_, end)| end <= item));
        match self.runs.last_mut() {
            Some((_, end)) if *end == item => *end += 1,
            _ => self.runs.push((item, item + 1)),
        }
        self.len += 1;
    }

    fn push_run(&mut self, start: u64, end: u64) {
        if start >= end {
            return;
        }
        match self.runs.last_mut() {
            Some((_, last_end)) if *last_end >= start => {
                if end > *last_end {
                    self.len += end - *last_end;
                    *last_end = end;
                }
            }
            _ => {
                self.runs.push((start, end));
                self.len += end - start;
            }
        }
    }

    pub fn universe_size(&self) -> u64 {
        self.universe_size
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Half-open runs `[start, end)` in increasing order.
    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn contains(&self, item: u64) -> bool {
        let idx = self.runs.partition_point(|&(start, _)| start <= item);
        idx > 0 && item < self.runs[idx - 1].1
    }

    pub fn first(&self) -> Option<u64> {
        self.runs.first().map(|&(start, _)| start)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|&(start, end)| start..end)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    fn assert_same_universe(&self, other: &ItemSet) {
        assert_eq!(
            self.universe_size, other.universe_size,
            "set algebra across different universes"
        );
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        self.assert_same_universe(other);
        let mut out = ItemSet::empty(self.universe_size);
        let (mut a, mut b) = (self.runs.iter().peekable(), other.runs.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => {
                    if x.0 <= y.0 {
                        a.next()
                    } else {
                        b.next()
                    }
                }
                (Some(_), None) => a.next(),
                (None, Some(_)) => b.next(),
                (None, None) => break,
            };
            let &(start, end) = next.unwrap();
            out.push_run(start, end);
        }
        out
    }

    pub fn intersection(&self, other: &ItemSet) -> ItemSet {
        self.assert_same_universe(other);
        let mut out = ItemSet::empty(self.universe_size);
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let (a0, a1) = self.runs[i];
            let (b0, b1) = other.runs[j];
            out.push_run(a0.max(b0), a1.min(b1));
            if a1 <= b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        out
    }

    pub fn intersects(&self, other: &ItemSet) -> bool {
        self.assert_same_universe(other);
        let (mut i, mut j) = (0, 0);
        while i < self.runs.len() && j < other.runs.len() {
            let (a0, a1) = self.runs[i];
            let (b0, b1) = other.runs[j];
            if a0.max(b0) < a1.min(b1) {
                return true;
            }
            if a1 <= b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        self.assert_same_universe(other);
        let mut out = ItemSet::empty(self.universe_size);
        let mut j = 0;
        for &(start, end) in &self.runs {
            let mut cursor = start;
            while j < other.runs.len() && other.runs[j].1 <= cursor {
                j += 1;
            }
            let mut k = j;
            while cursor < end && k < other.runs.len() && other.runs[k].0 < end {
                let (b0, b1) = other.runs[k];
                out.push_run(cursor, b0.max(cursor).min(end));
                cursor = cursor.max(b1);
                k += 1;
            }
            out.push_run(cursor, end);
        }
        out
    }

    /// The set with `item` removed (no-op when absent).
    pub fn without(&self, item: u64) -> ItemSet {
        let mut out = ItemSet::empty(self.universe_size);
        for &(start, end) in &self.runs {
            if start <= item && item < end {
                out.push_run(start, item);
                out.push_run(item + 1, end);
            } else {
                out.push_run(start, end);
            }
        }
        out
    }

    /// Splits into the `⌈len/2⌉` smallest members and the rest.
    pub fn split_half(&self) -> (ItemSet, ItemSet) {
        let mut take = self.len.div_ceil(2);
        let mut left = ItemSet::empty(self.universe_size);
        let mut right = ItemSet::empty(self.universe_size);
        for &(start, end) in &self.runs {
            let size = end - start;
            if take >= size {
                left.push_run(start, end);
                take -= size;
            } else {
                left.push_run(start, start + take);
                right.push_run(start + take, end);
                take = 0;
            }
        }
        (left, right)
    }
}

fn check_item(item: u64, universe_size: u64) -> Result<()> {
    if (1..=universe_size).contains(&item) {
        Ok(())
    } else {
        Err(Error::ItemOutOfRange { item, universe_size })
    }
}

impl Pool for ItemSet {
    fn universe_size(&self) -> u64 {
        self.universe_size
    }

    fn contains(&self, item: u64) -> bool {
        ItemSet::contains(self, item)
    }

    fn materialize(&self) -> ItemSet {
        self.clone()
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ItemSet[n={}]{{", self.universe_size)?;
        for (i, &(start, end)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if end - start == 1 {
                write!(f, "{start}")?;
            } else {
                write!(f, "{start}..={}", end - 1)?;
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn model(set: &ItemSet) -> BTreeSet<u64> {
        set.iter().collect()
    }

    #[test]
    fn construction_rejects_out_of_range() {
        assert!(ItemSet::from_ids(5, [0]).is_err());
        assert!(ItemSet::from_ids(5, [6]).is_err());
        assert!(ItemSet::interval(5, 2, 9).is_err());
        assert_eq!(ItemSet::from_ids(5, [3, 3, 1]).unwrap().to_vec(), vec![1, 3]);
    }

    #[test]
    fn runs_are_canonical() {
        let a = ItemSet::from_ids(10, [1, 2, 3, 5]).unwrap();
        let b = ItemSet::interval(10, 1, 3).unwrap().union(&ItemSet::from_ids(10, [5]).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.runs(), &[(1, 4), (5, 6)]);
        assert_eq!(format!("{a:?}"), "ItemSet[n=10]{1..=3,5}");
    }

    #[test]
    fn split_half_gives_left_the_ceiling() {
        let set = ItemSet::from_ids(20, [2, 3, 7, 8, 9]).unwrap();
        let (l, r) = set.split_half();
        assert_eq!(l.to_vec(), vec![2, 3, 7]);
        assert_eq!(r.to_vec(), vec![8, 9]);
        let (l, r) = ItemSet::from_ids(20, [4]).unwrap().split_half();
        assert_eq!((l.len(), r.len()), (1, 0));
    }

    #[test]
    fn without_splits_a_run() {
        let g = ItemSet::full(8).without(3);
        assert_eq!(g.to_vec(), vec![1, 2, 4, 5, 6, 7, 8]);
        assert_eq!(g.len(), 7);
        assert_eq!(g.without(42), g);
    }

    fn arb_set(n: u64) -> impl Strategy<Value = ItemSet> {
        proptest::collection::vec(1..=n, 0..40)
            .prop_map(move |ids| ItemSet::from_ids(n, ids).unwrap())
    }

    proptest! {
        #[test]
        fn algebra_matches_btreeset(a in arb_set(64), b in arb_set(64)) {
            let (ma, mb) = (model(&a), model(&b));
            prop_assert_eq!(model(&a.union(&b)), &ma | &mb);
            prop_assert_eq!(model(&a.intersection(&b)), &ma & &mb);
            prop_assert_eq!(model(&a.difference(&b)), &ma - &mb);
            prop_assert_eq!(a.intersects(&b), !(&ma & &mb).is_empty());
            prop_assert_eq!(a.len() as usize, ma.len());
            for item in 0..=65 {
                prop_assert_eq!(a.contains(item), ma.contains(&item));
            }
        }

        #[test]
        fn split_half_partitions_in_id_order(a in arb_set(64)) {
            let (l, r) = a.split_half();
            prop_assert_eq!(l.len(), a.len().div_ceil(2));
            prop_assert_eq!(l.union(&r), a.clone());
            prop_assert!(!l.intersects(&r));
            if let (Some(max_l), Some(min_r)) = (l.iter().last(), r.first()) {
                prop_assert!(max_l < min_r);
            }
        }
    }
}
