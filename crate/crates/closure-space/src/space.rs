//! Finite closure spaces.
//!
//! The closure operators handled here are additive: the closure of a set is
//! the union of the closures of its singletons. A [`Space`] therefore stores
//! one [`PointSet`] per carrier point, so `c(∅) = ∅`, additivity, and
//! monotonicity hold by construction, and extensivity (`p ∈ c{p}`) is checked
//! once when a space is built. Carrier points are kept sorted by label, which
//! makes equal spaces compare equal regardless of construction order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::set::{PointSet, MAX_POINTS};

/// Index of a point within one space's carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Space {
    labels: Vec<String>,
    closures: Vec<PointSet>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space has {0} points, more than the supported {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("closure of `{0}` does not contain it")]
    MissingSelf(String),
}

/// Above this carrier size, closed sets are enumerated by joining principal
/// closed sets instead of filtering the whole power set.
const CLOSED_SETS_FILTER_LIMIT: usize = 16;

impl Space {
    pub fn empty() -> Space {
        Space { labels: Vec::new(), closures: Vec::new() }
    }

    /// Builds a space from `(label, closure of that singleton)` entries.
    ///
    /// Every carrier point must appear exactly once as a key and must be a
    /// member of its own closure list.
    pub fn from_closure_lists<S: AsRef<str>>(entries: &[(S, Vec<S>)]) -> Result<Space, SpaceError> {
        if entries.len() > MAX_POINTS {
            return Err(SpaceError::TooManyPoints(entries.len()));
        }
        let mut index = BTreeMap::new();
        for (k, (label, _)) in entries.iter().enumerate() {
            if index.insert(label.as_ref().to_string(), k).is_some() {
                return Err(SpaceError::DuplicateLabel(label.as_ref().to_string()));
            }
        }
        let mut assembled = Vec::with_capacity(entries.len());
        for (k, (label, closure)) in entries.iter().enumerate() {
            let mut mask = PointSet::EMPTY;
            for member in closure {
                match index.get(member.as_ref()) {
                    Some(&m) => mask.insert(m),
                    None => return Err(SpaceError::UnknownLabel(member.as_ref().to_string())),
                }
            }
            if !mask.contains(k) {
                return Err(SpaceError::MissingSelf(label.as_ref().to_string()));
            }
            assembled.push((label.as_ref().to_string(), mask));
        }
        Space::assemble(assembled).map(|(space, _)| space)
    }

    /// Every singleton is closed.
    pub fn discrete<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Space, SpaceError> {
        let entries: Vec<(String, Vec<String>)> = labels
            .into_iter()
            .map(|l| (l.as_ref().to_string(), vec![l.as_ref().to_string()]))
            .collect();
        Space::from_closure_lists(&entries)
    }

    /// Every singleton closes to the whole carrier.
    pub fn indiscrete<S: AsRef<str>>(labels: impl IntoIterator<Item = S>) -> Result<Space, SpaceError> {
        let all: Vec<String> = labels.into_iter().map(|l| l.as_ref().to_string()).collect();
        let entries: Vec<(String, Vec<String>)> =
            all.iter().map(|l| (l.clone(), all.clone())).collect();
        Space::from_closure_lists(&entries)
    }

    /// Builds a space from provisional entries whose closure masks refer to
    /// entry positions. Entries are re-sorted by label; the returned table
    /// maps each entry position to its final point index.
    pub(crate) fn assemble(entries: Vec<(String, PointSet)>) -> Result<(Space, Vec<usize>), SpaceError> {
        if entries.len() > MAX_POINTS {
            return Err(SpaceError::TooManyPoints(entries.len()));
        }
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by(|&a, &b| entries[a].0.cmp(&entries[b].0));
        for pair in order.windows(2) {
            if entries[pair[0]].0 == entries[pair[1]].0 {
                return Err(SpaceError::DuplicateLabel(entries[pair[0]].0.clone()));
            }
        }
        let mut rank = vec![0usize; entries.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut labels = Vec::with_capacity(entries.len());
        let mut closures = vec![PointSet::EMPTY; entries.len()];
        for &old in &order {
            labels.push(entries[old].0.clone());
        }
        for (old, (label, mask)) in entries.iter().enumerate() {
            if !mask.contains(old) {
                return Err(SpaceError::MissingSelf(label.clone()));
            }
            closures[rank[old]] = mask.iter().map(|m| rank[m]).collect();
        }
        Ok((Space { labels, closures }, rank))
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn carrier(&self) -> PointSet {
        PointSet::full(self.labels.len())
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.labels.len()).map(PointId)
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn point(&self, label: &str) -> Option<PointId> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok().map(PointId)
    }

    pub fn require_point(&self, label: &str) -> Result<PointId, SpaceError> {
        self.point(label).ok_or_else(|| SpaceError::UnknownLabel(label.to_string()))
    }

    pub fn singleton_closure(&self, p: PointId) -> PointSet {
        self.closures[p.0]
    }

    /// Closure of an arbitrary subset: the union of its singleton closures.
    pub fn closure(&self, set: PointSet) -> PointSet {
        assert!(set.is_subset_of(self.carrier()), "subset contains points outside the space");
        set.iter().fold(PointSet::EMPTY, |acc, p| acc | self.closures[p])
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        self.closure(set) == set
    }

    /// Whether the closure operator is idempotent. Additivity makes the
    /// singleton check complete: `cc(A) = ∪ cc{p}` over `p ∈ A`.
    pub fn is_topological(&self) -> bool {
        self.closures.iter().all(|&c| self.closure(c) == c)
    }

    /// Smallest closed set containing `set`; the closure is iterated to its
    /// fixed point, which on a carrier of n points takes at most n rounds.
    pub fn tau_closure(&self, set: PointSet) -> PointSet {
        let mut current = set;
        loop {
            let next = self.closure(current);
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// The finest idempotent (topological) closure coarser than this one.
    pub fn topological_modification(&self) -> Space {
        let closures = (0..self.labels.len())
            .map(|p| self.tau_closure(PointSet::singleton(p)))
            .collect();
        Space { labels: self.labels.clone(), closures }
    }

    /// All closed subsets, in ascending mask order. Small carriers filter the
    /// power set; larger ones join principal closed sets, which is
    /// output-sensitive.
    pub fn closed_sets(&self) -> Vec<PointSet> {
        let n = self.labels.len();
        if n <= CLOSED_SETS_FILTER_LIMIT {
            return (0..1u64 << n)
                .map(PointSet::from_bits)
                .filter(|&s| self.is_closed(s))
                .collect();
        }
        let principal: Vec<PointSet> = (0..n)
            .map(|p| self.tau_closure(PointSet::singleton(p)))
            .collect();
        let mut seen = BTreeSet::from([PointSet::EMPTY]);
        let mut stack = vec![PointSet::EMPTY];
        while let Some(s) = stack.pop() {
            for &pr in &principal {
                let joined = s | pr;
                if seen.insert(joined) {
                    stack.push(joined);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn subset_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet, SpaceError> {
        let mut set = PointSet::EMPTY;
        for label in labels {
            set.insert(self.require_point(label.as_ref())?.0);
        }
        Ok(set)
    }

    pub fn labels_of(&self, set: PointSet) -> Vec<&str> {
        set.iter().map(|p| self.labels[p].as_str()).collect()
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space{{")?;
        for (k, label) in self.labels.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}: {:?}", self.labels_of(self.closures[k]))?;
        }
        write!(f, "}}")
    }
}
