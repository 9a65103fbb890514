//! Cross-cutting laws: operator axioms under shrinkable random data,
//! exhaustive small-space characterizations, and the coherence of the
//! different routes to the same colimit.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use closure_space::cell::closed_points;
use closure_space::enumerate::{all_maps, all_spaces, all_topologies, canonical_spaces, is_isomorphic};
use closure_space::gen::{self, PlanBounds};
use closure_space::map::subspace;
use closure_space::verify::for_each_closed_inclusion_span;
use closure_space::{
    build_cw, coequalizer, coproduct, product, pushout, pushout_along_closed_inclusion,
    MiningBounds, PointId, PointSet, Space, SpaceMap, Span,
};

fn space_from_masks(n: usize, masks: &[u64]) -> Space {
    let entries: Vec<(String, Vec<String>)> = masks
        .iter()
        .enumerate()
        .map(|(p, &mask)| {
            let closure: Vec<String> =
                (0..n).filter(|&q| q == p || (mask >> q) & 1 == 1).map(|q| q.to_string()).collect();
            (p.to_string(), closure)
        })
        .collect();
    Space::from_closure_lists(&entries).expect("valid by construction")
}

// Up to six points, labels "0".."5", so label order and point order agree.
fn arb_space() -> impl Strategy<Value = Space> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(0u64..(1u64 << n), n)
            .prop_map(move |masks| space_from_masks(n, &masks))
    })
}

proptest! {
    #[test]
    fn closure_axioms(space in arb_space()) {
        let n = space.point_count();
        prop_assert!(space.closure(PointSet::EMPTY).is_empty());
        for bits in 0..(1u64 << n) {
            let a = PointSet::from_bits(bits);
            let ca = space.closure(a);
            prop_assert!(a.is_subset_of(ca));
            let mut from_singletons = PointSet::EMPTY;
            for p in a.iter() {
                from_singletons = from_singletons.union(space.singleton_closure(PointId(p)));
            }
            prop_assert_eq!(ca, from_singletons);
        }
    }

    #[test]
    fn closure_is_monotone(space in arb_space(), raw in any::<(u64, u64)>()) {
        let full = space.carrier();
        let a = PointSet::from_bits(raw.0).intersection(full);
        let b = a.union(PointSet::from_bits(raw.1).intersection(full));
        prop_assert!(space.closure(a).is_subset_of(space.closure(b)));
    }

    #[test]
    fn subspace_closure_is_the_trace(space in arb_space(), raw in any::<u64>()) {
        let members = PointSet::from_bits(raw).intersection(space.carrier());
        let (sub, emb) = subspace(&space, members);
        for bits in 0..(1u64 << sub.point_count()) {
            let s = PointSet::from_bits(bits);
            prop_assert_eq!(
                emb.image_of(sub.closure(s)),
                space.closure(emb.image_of(s)).intersection(members)
            );
        }
    }

    #[test]
    fn tau_is_idempotent_and_fixes_topologies(space in arb_space()) {
        let tau = space.topological_modification();
        prop_assert!(tau.is_topological());
        prop_assert_eq!(tau.topological_modification(), tau.clone());
        for p in space.points() {
            prop_assert!(space.singleton_closure(p).is_subset_of(tau.singleton_closure(p)));
        }
        if space.is_topological() {
            prop_assert_eq!(tau, space);
        }
    }

    #[test]
    fn composites_of_continuous_maps_are_continuous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_space(&mut rng, 4);
        let b = gen::random_space(&mut rng, 4);
        let c = gen::random_space(&mut rng, 4);
        let f = gen::random_continuous_map(&mut rng, &a, &b);
        let g = gen::random_continuous_map(&mut rng, &b, &c);
        prop_assert!(f.then(&g).unwrap().is_continuous());
    }

    #[test]
    fn glueing_agrees_with_the_quotient_route(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let span = gen::random_span(&mut rng, 3, 4);
        let direct = pushout(&span).unwrap();
        let (q, j, g) = pushout_via_quotient(&span);
        prop_assert!(same_glueing_up_to_iso(
            &span,
            (&direct.space, &direct.j, &direct.g),
            (&q, &j, &g),
        ));
    }
}

/// The other route to the same colimit: sum the feet, then divide by the
/// relation the legs generate.
fn pushout_via_quotient(span: &Span) -> (Space, SpaceMap, SpaceMap) {
    let (_, injections) = coproduct(&[span.x().clone(), span.y().clone()]).unwrap();
    let into_x = &injections[0];
    let into_y = &injections[1];
    let f_prime = span.i().then(into_x).unwrap();
    let g_prime = span.f().then(into_y).unwrap();
    let (q, project) = coequalizer(&f_prime, &g_prime).unwrap();
    let j = into_y.then(&project).unwrap();
    let g = into_x.then(&project).unwrap();
    (q, j, g)
}

/// Two cocones over one span are the same glueing when the correspondence
/// the legs force is a well-defined bijection that transports singleton
/// closures; labels are allowed to differ.
fn same_glueing_up_to_iso(
    span: &Span,
    left: (&Space, &SpaceMap, &SpaceMap),
    right: (&Space, &SpaceMap, &SpaceMap),
) -> bool {
    let (lz, lj, lg) = left;
    let (rz, rj, rg) = right;
    if lz.point_count() != rz.point_count() {
        return false;
    }
    let mut slots: Vec<Option<PointId>> = vec![None; lz.point_count()];
    let forced = span
        .y()
        .points()
        .map(|p| (lj.apply(p), rj.apply(p)))
        .chain(span.x().points().map(|p| (lg.apply(p), rg.apply(p))));
    for (from, to) in forced {
        match &mut slots[from.0] {
            slot @ None => *slot = Some(to),
            Some(have) => {
                if *have != to {
                    return false;
                }
            }
        }
    }
    let Some(phi) = slots.into_iter().collect::<Option<Vec<PointId>>>() else {
        return false;
    };
    let mut seen = PointSet::EMPTY;
    for &q in &phi {
        if seen.contains(q.0) {
            return false;
        }
        seen.insert(q.0);
    }
    lz.points().all(|p| {
        let transported: PointSet = lz.singleton_closure(p).iter().map(|i| phi[i].0).collect();
        transported == rz.singleton_closure(phi[p.0])
    })
}

#[test]
fn the_quotient_route_agrees_on_every_tiny_span() {
    let apexes: Vec<Space> = (0..=2).flat_map(canonical_spaces).collect();
    let feet: Vec<Space> = (0..=2).flat_map(canonical_spaces).collect();
    let mut spans = 0u64;
    for apex in &apexes {
        for x in &feet {
            for i in closure_space::enumerate::continuous_maps(apex, x) {
                for y in &feet {
                    for f in closure_space::enumerate::continuous_maps(apex, y) {
                        let span = Span::new(f, i.clone()).unwrap();
                        let direct = pushout(&span).unwrap();
                        let (q, j, g) = pushout_via_quotient(&span);
                        assert!(
                            same_glueing_up_to_iso(
                                &span,
                                (&direct.space, &direct.j, &direct.g),
                                (&q, &j, &g),
                            ),
                            "routes disagree on a span with apex {:?}",
                            apex.labels()
                        );
                        spans += 1;
                    }
                }
            }
        }
    }
    assert!(spans > 300, "only {spans} spans swept");
}

#[test]
fn the_closed_inclusion_route_matches_the_general_one() {
    let bounds = MiningBounds { max_apex: 2, max_x: 3, max_y: 3 };
    let mut spans = 0u64;
    for_each_closed_inclusion_span(&bounds, |span| {
        spans += 1;
        let general = pushout(span).unwrap();
        let along = pushout_along_closed_inclusion(span).unwrap();
        assert!(same_glueing_up_to_iso(
            span,
            (&general.space, &general.j, &general.g),
            (&along.space, &along.j, &along.g),
        ));
        // The closed-inclusion route promises the base keeps its names.
        for p in span.y().points() {
            assert_eq!(along.space.label(along.j.apply(p)), span.y().label(p));
        }
        // Both record where every original point went.
        let expected = span.x().point_count() + span.y().point_count();
        assert_eq!(general.provenance.0.len(), expected);
        assert_eq!(along.provenance.0.len(), expected);
    });
    assert!(spans > 500, "only {spans} spans swept");
}

#[test]
fn tau_is_the_least_idempotent_coarsening() {
    for n in 0..=3 {
        let topologies = all_topologies(n);
        for space in all_spaces(n) {
            let tau = space.topological_modification();
            for t in &topologies {
                let dominates = space
                    .points()
                    .all(|p| space.singleton_closure(p).is_subset_of(t.singleton_closure(p)));
                if dominates {
                    assert!(
                        space
                            .points()
                            .all(|p| tau.singleton_closure(p).is_subset_of(t.singleton_closure(p))),
                        "a coarsening below tau exists for {:?}",
                        space.labels()
                    );
                }
            }
        }
    }
}

#[test]
fn continuity_matches_the_subset_formulation() {
    let spaces: Vec<Space> = (0..=2).flat_map(all_spaces).collect();
    for domain in &spaces {
        for codomain in &spaces {
            for map in all_maps(domain, codomain) {
                let by_subsets = (0..(1u64 << domain.point_count())).all(|bits| {
                    let s = PointSet::from_bits(bits);
                    map.image_of(domain.closure(s)).is_subset_of(codomain.closure(map.image_of(s)))
                });
                assert_eq!(map.is_continuous(), by_subsets);
            }
        }
    }
}

#[test]
fn coproduct_injections_are_closed_embeddings() {
    let spaces: Vec<Space> = (0..=2).flat_map(canonical_spaces).collect();
    for left in &spaces {
        for right in &spaces {
            let (sum, injections) = coproduct(&[left.clone(), right.clone()]).unwrap();
            for inj in &injections {
                assert!(inj.is_subspace_embedding());
                assert!(sum.is_closed(inj.image()));
                assert!(inj.is_closed_map());
            }
            let components_topological = left.is_topological() && right.is_topological();
            assert_eq!(sum.is_topological(), components_topological);
        }
    }
}

#[test]
fn products_are_topological_exactly_when_factors_are() {
    let spaces: Vec<Space> = (1..=2).flat_map(canonical_spaces).collect();
    for left in &spaces {
        for right in &spaces {
            let (prod, fst, snd) = product(left, right).unwrap();
            assert!(fst.is_continuous() && snd.is_continuous());
            assert_eq!(prod.is_topological(), left.is_topological() && right.is_topological());
        }
    }
}

#[test]
fn quotients_can_leave_topological_spaces() {
    let pair_a = Space::indiscrete(["0", "1"]).unwrap();
    let pair_b = Space::indiscrete(["1", "2"]).unwrap();
    let (sum, _) = coproduct(&[pair_a, pair_b]).unwrap();
    assert!(sum.is_topological());
    let dot = Space::discrete(["s"]).unwrap();
    let table_f: BTreeMap<String, String> = [("s".to_string(), "0:1".to_string())].into();
    let table_g: BTreeMap<String, String> = [("s".to_string(), "1:1".to_string())].into();
    let f = SpaceMap::from_label_pairs(dot.clone(), sum.clone(), &table_f).unwrap();
    let g = SpaceMap::from_label_pairs(dot, sum, &table_g).unwrap();
    let (q, project) = coequalizer(&f, &g).unwrap();
    assert!(project.is_continuous() && project.is_surjective());
    assert_eq!(q.point_count(), 3);
    assert!(!q.is_topological(), "identifying the shared point must break idempotence");

    // It is the same non-topological space the span formulation produces.
    let span_doc: closure_space::doc::SpanDoc = closure_space::doc::read_json(
        &std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures/two_indiscrete_pairs_span.json"),
    )
    .unwrap();
    let span = span_doc
        .build(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").as_path())
        .unwrap();
    assert!(is_isomorphic(&q, &pushout(&span).unwrap().space));
}

#[test]
fn staged_builds_keep_their_structure_maps_coherent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let bounds = PlanBounds::default();
    for _ in 0..25 {
        let (base, stages) = gen::random_cw_plan(&mut rng, &bounds);
        let build = build_cw(base, &stages).unwrap();
        let mut previous_closed = closed_points_labels(&build.base);
        for stage in &build.stages {
            assert!(stage.inclusion.is_subspace_embedding());
            assert!(stage.space.is_closed(stage.inclusion.image()));
            for (cell, chi) in stage.attachment.cells().iter().zip(&stage.characteristic) {
                assert!(chi.is_continuous());
                // disk restricted to its boundary lands where the
                // attaching map said it would
                assert_eq!(
                    cell.boundary().then(chi).unwrap(),
                    cell.attaching().then(&stage.inclusion).unwrap()
                );
            }
            // closed points survive the attachment under their own names
            let now_closed = closed_points_labels(&stage.space);
            for label in &previous_closed {
                assert!(now_closed.contains(label), "{label} stopped being closed");
            }
            previous_closed = now_closed;
        }
        let through_all = build.base_inclusion().unwrap();
        assert!(through_all.is_injective() && through_all.is_continuous());
    }
}

fn closed_points_labels(space: &Space) -> Vec<String> {
    space.labels_of(closed_points(space)).into_iter().map(str::to_string).collect()
}
