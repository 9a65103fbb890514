//! Reference pushout computed entirely inside topological spaces.
//!
//! Given a span of idempotent spaces, glue the carriers, enumerate every
//! subset of the result, keep those whose preimages under both legs are
//! closed, and read singleton closures off as smallest closed supersets.
//! That is the pushout the category of topological spaces would produce,
//! and it is what the glueing-then-coarsening route is checked against.
//!
//! Deliberately self-contained: everything here works from raw singleton
//! data (`singleton_closure`, map assignments) and re-derives closedness,
//! idempotence, merging, and labeling from scratch. It must not call the
//! closure-evaluation or closed-set machinery on `Space`, nor anything in
//! the glueing constructors, so that an agreement between the two routes is
//! evidence rather than a tautology.

use thiserror::Error;

use crate::set::PointSet;
use crate::space::{PointId, Space, SpaceError};
use crate::Span;

/// Subset enumeration is exponential in the glued carrier; refuse anything
/// bigger than this.
pub const ORACLE_CARRIER_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopOracleError {
    #[error("span member `{0}` is not idempotent, so the reference pushout is undefined")]
    NotTopological(&'static str),
    #[error("glued carrier has {0} points, too many to enumerate subsets of")]
    CarrierTooLarge(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// `set` contains the closure of each of its singletons. By additivity that
/// is exactly closedness.
fn closed_under(space: &Space, set: PointSet) -> bool {
    set.iter().all(|p| space.singleton_closure(PointId(p)).is_subset_of(set))
}

fn space_is_idempotent(space: &Space) -> bool {
    space.points().all(|p| closed_under(space, space.singleton_closure(p)))
}

/// The pushout of `span` in topological spaces, as a space on the glued
/// carrier with the smallest-closed-superset closure. Requires both feet of
/// the span to be idempotent.
pub fn top_pushout(span: &Span) -> Result<Space, TopOracleError> {
    let (x, y) = (span.x(), span.y());
    if !space_is_idempotent(x) {
        return Err(TopOracleError::NotTopological("X"));
    }
    if !space_is_idempotent(y) {
        return Err(TopOracleError::NotTopological("Y"));
    }
    let (nx, ny) = (x.point_count(), y.point_count());

    // Glue the carriers: repeatedly replace representatives until the
    // relation i(a) ~ f(a) is exhausted. Tagged points are (side, index)
    // with side 0 for Y and 1 for X.
    let mut rep: Vec<usize> = (0..nx + ny).collect();
    for a in span.apex().points() {
        let u = rep[nx + span.f().apply(a).0];
        let v = rep[span.i().apply(a).0];
        if u != v {
            for r in rep.iter_mut() {
                if *r == v {
                    *r = u;
                }
            }
        }
    }
    let tag_key = |t: usize| -> (&str, usize, usize) {
        if t < nx {
            (x.label(PointId(t)), 1, t)
        } else {
            (y.label(PointId(t - nx)), 0, t - nx)
        }
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    {
        let mut by_rep = std::collections::BTreeMap::new();
        for t in 0..nx + ny {
            by_rep.entry(rep[t]).or_insert_with(Vec::new).push(t);
        }
        for (_, mut members) in by_rep {
            members.sort_by_key(|&t| tag_key(t));
            classes.push(members);
        }
        classes.sort_by(|a, b| {
            let ka = a.iter().map(|&t| tag_key(t));
            let kb = b.iter().map(|&t| tag_key(t));
            ka.cmp(kb)
        });
    }
    let nz = classes.len();
    if nz > ORACLE_CARRIER_LIMIT {
        return Err(TopOracleError::CarrierTooLarge(nz));
    }

    // Least member label wins; later identical wants get a ~k suffix, in
    // class order. Must agree with the labeling scheme the glueing
    // constructors use, which is checked wherever the two routes are
    // compared.
    let mut labels: Vec<String> = Vec::with_capacity(nz);
    {
        let mut taken = std::collections::BTreeMap::new();
        for class in &classes {
            let want = tag_key(class[0]).0.to_string();
            let count = taken.get(&want).copied().unwrap_or(0) + 1;
            taken.insert(want.clone(), count);
            if count == 1 {
                labels.push(want);
                continue;
            }
            let mut k = count;
            loop {
                let candidate = format!("{want}~{k}");
                if !taken.contains_key(&candidate) {
                    taken.insert(candidate.clone(), 1);
                    labels.push(candidate);
                    break;
                }
                k += 1;
            }
        }
    }
    let mut class_of = vec![0usize; nx + ny];
    for (k, class) in classes.iter().enumerate() {
        for &t in class {
            class_of[t] = k;
        }
    }

    // A subset of the glued carrier is closed exactly when both preimages
    // are. Collect them all, then close each singleton by intersecting the
    // closed sets that contain it.
    let mut closed_masks: Vec<u64> = Vec::new();
    for mask in 0u64..(1u64 << nz) {
        let mut x_pre = PointSet::EMPTY;
        let mut y_pre = PointSet::EMPTY;
        for t in 0..nx + ny {
            if mask >> class_of[t] & 1 == 1 {
                if t < nx {
                    x_pre.insert(t);
                } else {
                    y_pre.insert(t - nx);
                }
            }
        }
        if closed_under(x, x_pre) && closed_under(y, y_pre) {
            closed_masks.push(mask);
        }
    }
    let entries: Vec<(String, Vec<String>)> = (0..nz)
        .map(|z| {
            let hull = closed_masks
                .iter()
                .filter(|&&mask| mask >> z & 1 == 1)
                .fold(u64::MAX >> (64 - nz.max(1)), |acc, &mask| acc & mask);
            let closure = (0..nz).filter(|&w| hull >> w & 1 == 1).map(|w| labels[w].clone());
            (labels[z].clone(), closure.collect())
        })
        .collect();
    Ok(Space::from_closure_lists(&entries)?)
}
