//! Bit-indexed subsets of a space's carrier.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign};

/// Largest carrier a [`PointSet`] can index into.
pub const MAX_POINTS: usize = 64;

/// A subset of a space's carrier, stored as a mask over point indices.
///
/// The set itself knows nothing about the space it belongs to; operations on
/// [`crate::Space`] check that masks stay inside the carrier.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn singleton(index: usize) -> PointSet {
        debug_assert!(index < MAX_POINTS);
        PointSet(1 << index)
    }

    /// The set `{0, 1, .., count-1}`.
    pub fn full(count: usize) -> PointSet {
        debug_assert!(count <= MAX_POINTS);
        if count == MAX_POINTS {
            PointSet(!0)
        } else {
            PointSet((1u64 << count) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> PointSet {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, index: usize) -> bool {
        index < MAX_POINTS && self.0 >> index & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        debug_assert!(index < MAX_POINTS);
        self.0 |= 1 << index;
    }

    pub fn remove(&mut self, index: usize) {
        debug_assert!(index < MAX_POINTS);
        self.0 &= !(1 << index);
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: PointSet) -> PointSet {
        PointSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Indices in ascending order.
    pub fn iter(self) -> Indices {
        Indices(self.0)
    }

    /// All submasks of `self`, including the empty set and `self` itself,
    /// in descending mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(self.0) }
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> PointSet {
        let mut set = PointSet::EMPTY;
        for index in iter {
            set.insert(index);
        }
        set
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        self.union(rhs)
    }
}

impl BitOrAssign for PointSet {
    fn bitor_assign(&mut self, rhs: PointSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        self.intersection(rhs)
    }
}

impl BitAndAssign for PointSet {
    fn bitand_assign(&mut self, rhs: PointSet) {
        self.0 &= rhs.0;
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, index) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{index}")?;
        }
        write!(f, "}}")
    }
}

pub struct Indices(u64);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let index = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(index)
    }
}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        let current = self.next?;
        self.next = if current == 0 {
            None
        } else {
            Some((current - 1) & self.mask)
        };
        Some(PointSet(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_operations() {
        let mut s = PointSet::EMPTY;
        s.insert(0);
        s.insert(3);
        assert!(s.contains(0));
        assert!(!s.contains(1));
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3]);
        s.remove(0);
        assert_eq!(s, PointSet::singleton(3));
    }

    #[test]
    fn set_algebra() {
        let a: PointSet = [0, 1, 2].into_iter().collect();
        let b: PointSet = [2, 3].into_iter().collect();
        assert_eq!(a.union(b), [0, 1, 2, 3].into_iter().collect());
        assert_eq!(a.intersection(b), PointSet::singleton(2));
        assert_eq!(a.difference(b), [0, 1].into_iter().collect());
        assert!(PointSet::singleton(2).is_subset_of(a));
        assert!(!a.is_subset_of(b));
    }

    #[test]
    fn full_covers_the_whole_word() {
        assert_eq!(PointSet::full(0), PointSet::EMPTY);
        assert_eq!(PointSet::full(3).len(), 3);
        assert_eq!(PointSet::full(MAX_POINTS).len(), MAX_POINTS);
    }

    #[test]
    fn subsets_enumerates_the_power_set() {
        let s: PointSet = [1, 4, 5].into_iter().collect();
        let all: Vec<PointSet> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&PointSet::EMPTY));
        assert!(all.contains(&s));
        for sub in all {
            assert!(sub.is_subset_of(s));
        }
    }
}
