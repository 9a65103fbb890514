//! Seeded random generation of spaces, maps, spans, and attachment plans.
//!
//! Everything takes the RNG by argument, so callers own the seed and runs
//! are reproducible. Fallbacks are arranged so the generators always
//! terminate: constant maps are continuous into any target, and constant
//! maps to closed points are closed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cell::{boundary_sphere, closed_points, DiskStyle, StageSpec};
use crate::colimit::Span;
use crate::map::{subspace, SpaceMap};
use crate::set::PointSet;
use crate::space::{PointId, Space};

/// A space on 1..=`max_points` points, labeled `"0"`, `"1"`, .. with each
/// off-diagonal closure membership drawn independently.
pub fn random_space(rng: &mut impl Rng, max_points: usize) -> Space {
    assert!(max_points >= 1);
    let n = rng.gen_range(1..=max_points);
    let entries = (0..n)
        .map(|p| {
            let mut closure = PointSet::singleton(p);
            for q in 0..n {
                if q != p && rng.gen_bool(0.3) {
                    closure.insert(q);
                }
            }
            (p.to_string(), closure)
        })
        .collect();
    Space::assemble(entries).expect("random closures are extensive and in range").0
}

pub fn random_topological_space(rng: &mut impl Rng, max_points: usize) -> Space {
    random_space(rng, max_points).topological_modification()
}

/// A uniformly random function between the carriers. The codomain must be
/// nonempty unless the domain is empty too.
pub fn random_map(rng: &mut impl Rng, domain: &Space, codomain: &Space) -> SpaceMap {
    assert!(!codomain.is_empty() || domain.is_empty(), "no maps into the empty space");
    let assignment = domain
        .points()
        .map(|_| PointId(rng.gen_range(0..codomain.point_count().max(1))))
        .collect();
    SpaceMap::new(domain.clone(), codomain.clone(), assignment).expect("targets are in range")
}

/// Rejection-samples a continuous map, falling back to a constant (always
/// continuous) if none shows up quickly.
pub fn random_continuous_map(rng: &mut impl Rng, domain: &Space, codomain: &Space) -> SpaceMap {
    assert!(!codomain.is_empty() || domain.is_empty(), "no maps into the empty space");
    for _ in 0..32 {
        let candidate = random_map(rng, domain, codomain);
        if candidate.is_continuous() {
            return candidate;
        }
    }
    let target = PointId(rng.gen_range(0..codomain.point_count().max(1)));
    SpaceMap::constant(domain.clone(), codomain.clone(), target)
}

/// A span with arbitrary continuous legs out of a random apex.
pub fn random_span(rng: &mut impl Rng, max_apex: usize, max_side: usize) -> Span {
    let apex = random_space(rng, max_apex);
    let x = random_space(rng, max_side);
    let y = random_space(rng, max_side);
    let i = random_continuous_map(rng, &apex, &x);
    let f = random_continuous_map(rng, &apex, &y);
    Span::new(f, i).expect("legs are continuous by construction")
}

/// A span whose `i`-leg includes a randomly chosen closed subset of `X` as
/// a subspace.
pub fn random_closed_inclusion_span(rng: &mut impl Rng, max_x: usize, max_y: usize) -> Span {
    let x = random_space(rng, max_x);
    let closed = x.closed_sets();
    let members = *closed.choose(rng).expect("the empty set is always closed");
    let (apex, inclusion) = subspace(&x, members);
    let y = random_space(rng, max_y);
    let f = random_continuous_map(rng, &apex, &y);
    Span::new(f, inclusion).expect("legs are continuous by construction")
}

/// Size limits for random attachment plans.
#[derive(Debug, Clone, Copy)]
pub struct PlanBounds {
    pub max_base_points: usize,
    pub max_stages: usize,
    pub max_cells_per_stage: usize,
    pub max_dim: usize,
    pub max_total_points: usize,
}

impl Default for PlanBounds {
    fn default() -> PlanBounds {
        PlanBounds {
            max_base_points: 4,
            max_stages: 3,
            max_cells_per_stage: 3,
            max_dim: 2,
            max_total_points: 40,
        }
    }
}

/// An attaching map that is continuous and a closed map, so the attachment
/// theorems apply. Rejection-samples, then falls back to a constant map
/// onto a closed point, which the target is guaranteed to have here.
fn random_closed_attaching(
    rng: &mut impl Rng,
    sphere: &Space,
    target: &Space,
) -> BTreeMap<String, String> {
    for _ in 0..32 {
        let candidate = random_map(rng, sphere, target);
        if candidate.is_continuous() && candidate.is_closed_map() {
            return candidate.label_pairs();
        }
    }
    let anchors: Vec<usize> = closed_points(target).iter().collect();
    let anchor = *anchors.choose(rng).expect("plan targets keep a closed point");
    SpaceMap::constant(sphere.clone(), target.clone(), PointId(anchor)).label_pairs()
}

/// A random base with a closed point plus staged cell attachments whose
/// attaching maps are all continuous closed maps. Replaying the returned
/// plan with `build_cw` reproduces the spaces the generator saw.
pub fn random_cw_plan(rng: &mut impl Rng, bounds: &PlanBounds) -> (Space, Vec<StageSpec>) {
    let mut base = Space::discrete(["0"]).expect("one point fits");
    for _ in 0..16 {
        let candidate = random_topological_space(rng, bounds.max_base_points);
        if !closed_points(&candidate).is_empty() {
            base = candidate;
            break;
        }
    }
    let mut stages = Vec::new();
    let mut current = base.clone();
    for _ in 0..rng.gen_range(1..=bounds.max_stages.max(1)) {
        let dim = rng.gen_range(0..=bounds.max_dim);
        let style = if rng.gen_bool(0.5) { DiskStyle::Cone } else { DiskStyle::Cylinder };
        let sphere = boundary_sphere(dim).expect("plan dimensions stay in range");
        let added_per_cell = if dim == 0 || style == DiskStyle::Cone {
            1
        } else {
            2 * sphere.point_count()
        };
        let headroom =
            bounds.max_total_points.saturating_sub(current.point_count()) / added_per_cell;
        let cell_cap = bounds.max_cells_per_stage.min(headroom);
        let cells: Vec<BTreeMap<String, String>> = (0..rng.gen_range(0..=cell_cap))
            .map(|_| random_closed_attaching(rng, &sphere, &current))
            .collect();
        let spec = StageSpec { dim, style, cells };
        current = crate::cell::build_cw(current, std::slice::from_ref(&spec))
            .expect("generated stages attach cleanly")
            .final_space()
            .clone();
        stages.push(spec);
    }
    (base, stages)
}
