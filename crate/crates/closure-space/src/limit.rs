//! Finite limits: binary products and equalizers.
//!
//! Only what the rest of the crate needs. The product closure is taken
//! componentwise on singletons, `c{(x, y)} = c{x} × c{y}`, which is the
//! initial closure for the two projections. Equalizers are subspaces of the
//! agreement set.

use thiserror::Error;

use crate::map::{subspace, MapError, SpaceMap};
use crate::set::PointSet;
use crate::space::{PointId, Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("maps are not parallel")]
    NotParallel,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

pub(crate) fn pair_label(left: &str, right: &str) -> String {
    format!("({left},{right})")
}

/// Binary product with componentwise closure. Points are labeled
/// `(left,right)`. Fails if the product would exceed the carrier limit.
pub fn product(left: &Space, right: &Space) -> Result<(Space, SpaceMap, SpaceMap), LimitError> {
    let (nl, nr) = (left.point_count(), right.point_count());
    let mut entries = Vec::with_capacity(nl * nr);
    for p in left.points() {
        for q in right.points() {
            let label = pair_label(left.label(p), right.label(q));
            let mut closure = PointSet::EMPTY;
            for cp in left.singleton_closure(p).iter() {
                for cq in right.singleton_closure(q).iter() {
                    closure.insert(cp * nr + cq);
                }
            }
            entries.push((label, closure));
        }
    }
    let (space, rank) = Space::assemble(entries)?;
    let fst = SpaceMap::new(
        space.clone(),
        left.clone(),
        {
            let mut assignment = vec![PointId(0); nl * nr];
            for p in 0..nl {
                for q in 0..nr {
                    assignment[rank[p * nr + q]] = PointId(p);
                }
            }
            assignment
        },
    )?;
    let snd = SpaceMap::new(
        space.clone(),
        right.clone(),
        {
            let mut assignment = vec![PointId(0); nl * nr];
            for p in 0..nl {
                for q in 0..nr {
                    assignment[rank[p * nr + q]] = PointId(q);
                }
            }
            assignment
        },
    )?;
    Ok((space, fst, snd))
}

/// Equalizer of a parallel pair: the agreement set as a subspace of the
/// domain, with its inclusion.
pub fn equalizer(f: &SpaceMap, g: &SpaceMap) -> Result<(Space, SpaceMap), LimitError> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(LimitError::NotParallel);
    }
    let agree: PointSet = f
        .domain()
        .points()
        .filter(|&p| f.apply(p) == g.apply(p))
        .map(|p| p.0)
        .collect();
    Ok(subspace(f.domain(), agree))
}
