//! Integer partitions indexing the ordered product basis of a Verma module.
//!
//! A partition `(p1 >= p2 >= ... >= pk)` stands for the monomial
//! `L_{-p1} L_{-p2} ... L_{-pk}` applied to the highest-weight vector, with
//! the largest index leftmost. The canonical listing at a fixed level is
//! descending-lexicographic, e.g. at level 4:
//! `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.

use std::cmp::Ordering;

/// Non-increasing list of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition; panics unless the parts are positive and
    /// non-increasing.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be non-increasing: {parts:?}"
        );
        assert!(
            parts.iter().all(|&p| p > 0),
            "partition parts must be positive: {parts:?}"
        );
        Partition { parts }
    }

    /// The empty partition (the highest-weight vector itself).
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn level(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// New partition with `part` prepended; panics if that breaks ordering.
    pub fn prepended(&self, part: u32) -> Partition {
        assert!(self.parts.first().is_none_or(|&p| part >= p));
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        parts.push(part);
        parts.extend_from_slice(&self.parts);
        Partition { parts }
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        // Graded, then descending lexicographic within a level so that
        // BTreeMap iteration follows the canonical basis listing.
        self.level()
            .cmp(&other.level())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `level` in canonical order; `[()]` for level 0.
pub fn partitions_of(level: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(level, level.max(1), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_listing_at_level_four() {
        let parts: Vec<Partition> = partitions_of(4);
        let expect = [
            vec![4],
            vec![3, 1],
            vec![2, 2],
            vec![2, 1, 1],
            vec![1, 1, 1, 1],
        ];
        assert_eq!(parts.len(), expect.len());
        for (p, e) in parts.iter().zip(expect.iter()) {
            assert_eq!(p.parts(), e.as_slice());
        }
        // Listing order agrees with Ord.
        assert!(parts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_level() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(Partition::empty().level(), 0);
    }

    #[test]
    fn counts_match_partition_function() {
        // p(1)..p(8) = 1, 2, 3, 5, 7, 11, 15, 22
        let expected = [1, 2, 3, 5, 7, 11, 15, 22];
        for (level, count) in (1u32..=8).zip(expected) {
            assert_eq!(partitions_of(level).len(), count);
        }
    }

    proptest! {
        #[test]
        fn listing_is_sorted_and_consistent(level in 0u32..9) {
            let parts = partitions_of(level);
            for p in &parts {
                prop_assert_eq!(p.level(), level);
            }
            for w in parts.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
        }
    }
}
