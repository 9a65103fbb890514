//! Exhaustive enumeration of small spaces and maps.
//!
//! Everything here is exponential and meant for carriers of four or five
//! points, where the checking suites sweep entire universes of spaces. The
//! space counts have independent cross-checks: spaces on a labeled n-point
//! carrier are exactly reflexive relations (2^(n(n-1)) of them), and the
//! idempotent ones are the finite topologies, whose counts are tabulated in
//! OEIS (A000798 labeled, A001930 up to homeomorphism).

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::map::SpaceMap;
use crate::set::PointSet;
use crate::space::{PointId, Space};

/// Hard cap for the enumerators; 2^(n(n-1)) spaces stops being fun above
/// this.
pub const MAX_ENUM_POINTS: usize = 5;

/// Every closure space on the labeled carrier `"0", .., "n-1"`, in a fixed
/// order.
pub fn all_spaces(n: usize) -> Vec<Space> {
    assert!(n <= MAX_ENUM_POINTS, "enumeration bound exceeded");
    if n == 0 {
        return vec![Space::empty()];
    }
    let full = PointSet::full(n);
    let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    (0..n)
        .map(|p| full.subsets().filter(|s| s.contains(p)).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|closures| {
            let entries = labels.iter().cloned().zip(closures).collect();
            Space::assemble(entries).expect("chosen closures are extensive and in range").0
        })
        .collect()
}

pub fn all_topologies(n: usize) -> Vec<Space> {
    all_spaces(n).into_iter().filter(Space::is_topological).collect()
}

/// The least relabeling of a space: the singleton-closure table, as raw
/// bits, minimized over all permutations of the points. Two spaces are
/// isomorphic exactly when their forms agree.
pub fn canonical_form(space: &Space) -> Vec<u64> {
    let n = space.point_count();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut sig = vec![0u64; n];
            for old in 0..n {
                let mut bits = 0u64;
                for q in space.singleton_closure(PointId(old)).iter() {
                    bits |= 1 << perm[q];
                }
                sig[perm[old]] = bits;
            }
            sig
        })
        .min()
        .unwrap_or_default()
}

pub fn is_isomorphic(a: &Space, b: &Space) -> bool {
    a.point_count() == b.point_count() && canonical_form(a) == canonical_form(b)
}

fn space_from_form(form: &[u64]) -> Space {
    let entries = form
        .iter()
        .enumerate()
        .map(|(p, &bits)| (p.to_string(), PointSet::from_bits(bits)))
        .collect();
    Space::assemble(entries).expect("canonical forms come from valid spaces").0
}

/// One space per isomorphism class on `n` points, realized on the carrier
/// `"0", .., "n-1"` and sorted by canonical form.
pub fn canonical_spaces(n: usize) -> Vec<Space> {
    let forms: BTreeSet<Vec<u64>> = all_spaces(n).iter().map(canonical_form).collect();
    forms.iter().map(|form| space_from_form(form)).collect()
}

pub fn canonical_topologies(n: usize) -> Vec<Space> {
    canonical_spaces(n).into_iter().filter(Space::is_topological).collect()
}

/// Cached `canonical_spaces`, for the universal-property sweeps that keep
/// revisiting every small cocone carrier. Only `n <= 4` is cached.
pub fn canonical_spaces_cached(n: usize) -> &'static [Space] {
    static CACHE: OnceLock<Vec<Vec<Space>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..=4).map(canonical_spaces).collect());
    &cache[n]
}

/// Every function between the carriers, continuous or not, in base-|B|
/// counting order with the first domain point as the least significant
/// digit.
pub fn all_maps(domain: &Space, codomain: &Space) -> Vec<SpaceMap> {
    let (na, nb) = (domain.point_count(), codomain.point_count());
    let total = (nb as u64).checked_pow(na as u32).expect("map space overflow");
    assert!(total <= 1 << 24, "map enumeration bound exceeded");
    (0..total)
        .map(|code| {
            let mut rest = code;
            let assignment = (0..na)
                .map(|_| {
                    let digit = (rest % nb as u64) as usize;
                    rest /= nb as u64;
                    PointId(digit)
                })
                .collect();
            SpaceMap::new(domain.clone(), codomain.clone(), assignment)
                .expect("digits are in range")
        })
        .collect()
}

pub fn continuous_maps(domain: &Space, codomain: &Space) -> Vec<SpaceMap> {
    all_maps(domain, codomain).into_iter().filter(SpaceMap::is_continuous).collect()
}
