//! Maps between closure spaces: continuity, closed maps, subspaces, and the
//! three closed-inclusion conditions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::set::PointSet;
use crate::space::{PointId, Space};

/// A total function between the carriers of two spaces. Totality and
/// well-typedness are enforced at construction; continuity is a predicate,
/// not an invariant, so non-continuous maps can be represented and tested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    domain: Space,
    codomain: Space,
    assignment: Vec<PointId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("assignment covers {got} points, domain has {want}")]
    WrongArity { got: usize, want: usize },
    #[error("assignment target out of range")]
    TargetOutOfRange,
    #[error("no assignment for domain point `{0}`")]
    Unassigned(String),
    #[error("assignment key `{0}` is not a domain point")]
    ForeignKey(String),
    #[error("assignment value `{0}` is not a codomain point")]
    ForeignValue(String),
    #[error("codomain of the first map differs from domain of the second")]
    NotComposable,
}

impl SpaceMap {
    pub fn new(domain: Space, codomain: Space, assignment: Vec<PointId>) -> Result<SpaceMap, MapError> {
        if assignment.len() != domain.point_count() {
            return Err(MapError::WrongArity { got: assignment.len(), want: domain.point_count() });
        }
        if assignment.iter().any(|t| t.0 >= codomain.point_count()) {
            return Err(MapError::TargetOutOfRange);
        }
        Ok(SpaceMap { domain, codomain, assignment })
    }

    /// Builds a map from a label-to-label table. The table must assign every
    /// domain point exactly once and nothing else.
    pub fn from_label_pairs(
        domain: Space,
        codomain: Space,
        pairs: &BTreeMap<String, String>,
    ) -> Result<SpaceMap, MapError> {
        for key in pairs.keys() {
            if domain.point(key).is_none() {
                return Err(MapError::ForeignKey(key.clone()));
            }
        }
        let mut assignment = Vec::with_capacity(domain.point_count());
        for p in domain.points() {
            let label = domain.label(p);
            let target = pairs.get(label).ok_or_else(|| MapError::Unassigned(label.to_string()))?;
            let t = codomain.point(target).ok_or_else(|| MapError::ForeignValue(target.clone()))?;
            assignment.push(t);
        }
        SpaceMap::new(domain, codomain, assignment)
    }

    pub fn identity(space: &Space) -> SpaceMap {
        SpaceMap {
            domain: space.clone(),
            codomain: space.clone(),
            assignment: space.points().collect(),
        }
    }

    pub fn constant(domain: Space, codomain: Space, target: PointId) -> SpaceMap {
        let n = domain.point_count();
        assert!(target.0 < codomain.point_count());
        SpaceMap { domain, codomain, assignment: vec![target; n] }
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn assignment(&self) -> &[PointId] {
        &self.assignment
    }

    pub fn apply(&self, p: PointId) -> PointId {
        self.assignment[p.0]
    }

    pub fn image_of(&self, set: PointSet) -> PointSet {
        set.iter().map(|p| self.assignment[p].0).collect()
    }

    pub fn preimage_of(&self, set: PointSet) -> PointSet {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, t)| set.contains(t.0))
            .map(|(p, _)| p)
            .collect()
    }

    pub fn image(&self) -> PointSet {
        self.image_of(self.domain.carrier())
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.domain.point_count()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.codomain.carrier()
    }

    /// Continuity, `f(c_X A) ⊆ c_Y(f A)` for every subset `A`. Additivity on
    /// both sides reduces this to singletons: `f(c_X{p}) ⊆ c_Y{f(p)}`.
    pub fn is_continuous(&self) -> bool {
        self.domain.points().all(|p| {
            self.image_of(self.domain.singleton_closure(p))
                .is_subset_of(self.codomain.singleton_closure(self.apply(p)))
        })
    }

    /// Whether images of closed sets are closed.
    pub fn is_closed_map(&self) -> bool {
        self.domain
            .closed_sets()
            .into_iter()
            .all(|b| self.codomain.is_closed(self.image_of(b)))
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap, MapError> {
        if self.codomain != other.domain {
            return Err(MapError::NotComposable);
        }
        let assignment = self.assignment.iter().map(|&p| other.apply(p)).collect();
        SpaceMap::new(self.domain.clone(), other.codomain.clone(), assignment)
    }

    pub fn label_pairs(&self) -> BTreeMap<String, String> {
        self.domain
            .points()
            .map(|p| {
                (self.domain.label(p).to_string(), self.codomain.label(self.apply(p)).to_string())
            })
            .collect()
    }

    /// Whether this map is an isomorphism onto a subspace of its codomain:
    /// injective, with `c_dom{a}` carried exactly onto `c_cod{f a} ∩ image`.
    pub fn is_subspace_embedding(&self) -> bool {
        if !self.is_injective() {
            return false;
        }
        let image = self.image();
        self.domain.points().all(|p| {
            let carried = self.image_of(self.domain.singleton_closure(p));
            let restricted = self.codomain.singleton_closure(self.apply(p)).intersection(image);
            carried == restricted
        })
    }
}

/// The subspace on `members` (closures restricted by intersection) together
/// with its inclusion map.
pub fn subspace(space: &Space, members: PointSet) -> (Space, SpaceMap) {
    assert!(members.is_subset_of(space.carrier()), "subset contains points outside the space");
    let parents: Vec<usize> = members.iter().collect();
    let entries: Vec<(String, PointSet)> = parents
        .iter()
        .map(|&p| {
            let restricted = space.singleton_closure(PointId(p)).intersection(members);
            let local: PointSet =
                restricted.iter().map(|q| parents.binary_search(&q).unwrap()).collect();
            (space.label(PointId(p)).to_string(), local)
        })
        .collect();
    // Labels of a subspace are a sorted subset of sorted labels, so assemble
    // keeps entry order and the rank table is the identity.
    let (sub, rank) = Space::assemble(entries).expect("subspace of a valid space is valid");
    let assignment = rank
        .iter()
        .enumerate()
        .map(|(old, &new)| (new, PointId(parents[old])))
        .collect::<BTreeMap<_, _>>()
        .into_values()
        .collect();
    let inclusion = SpaceMap::new(sub.clone(), space.clone(), assignment)
        .expect("inclusion of a subspace is a valid map");
    (sub, inclusion)
}

/// The three equivalent characterizations of a closed inclusion, evaluated
/// independently so their agreement can be tested rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedInclusionConditions {
    /// The inclusion map of the subspace is a closed map.
    pub inclusion_is_closed_map: bool,
    /// The subset is closed in the ambient space.
    pub subset_is_closed: bool,
    /// The subspace closure of every subset agrees with the ambient closure.
    pub closure_restricts: bool,
}

impl ClosedInclusionConditions {
    pub fn all(&self) -> bool {
        self.inclusion_is_closed_map && self.subset_is_closed && self.closure_restricts
    }

    pub fn agree(&self) -> bool {
        self.inclusion_is_closed_map == self.subset_is_closed
            && self.subset_is_closed == self.closure_restricts
    }
}

pub fn closed_inclusion_conditions(space: &Space, members: PointSet) -> ClosedInclusionConditions {
    let (sub, inclusion) = subspace(space, members);
    let inclusion_is_closed_map = sub
        .closed_sets()
        .into_iter()
        .all(|b| space.is_closed(inclusion.image_of(b)));
    let subset_is_closed = space.is_closed(members);
    // c_A(B) = c_X(B) ∩ A equals c_X(B) for every B ⊆ A iff it does on
    // singletons, i.e. iff c_X{p} ⊆ A for every p ∈ A.
    let closure_restricts = members
        .iter()
        .all(|p| space.singleton_closure(PointId(p)).is_subset_of(members));
    ClosedInclusionConditions { inclusion_is_closed_map, subset_is_closed, closure_restricts }
}

/// Evaluates the closed-inclusion conditions for an arbitrary map, provided
/// it embeds its domain as a subspace; `None` otherwise.
pub fn map_closed_inclusion_conditions(map: &SpaceMap) -> Option<ClosedInclusionConditions> {
    if !map.is_subspace_embedding() {
        return None;
    }
    Some(closed_inclusion_conditions(map.codomain(), map.image()))
}
