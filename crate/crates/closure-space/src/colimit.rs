//! Colimits of closure spaces: coproducts, coequalizers, and pushouts.
//!
//! Carriers are the set-level colimits. Closures come from the colimit
//! formulas: componentwise for coproducts, `p(c(p⁻¹ B))` for coequalizers,
//! and `j(c_Y(j⁻¹ B)) ∪ g(c_X(g⁻¹ B))` for pushouts. Colimit points are
//! labeled by the least original label in their equivalence class; when two
//! classes want the same label, later ones (in canonical class order) get a
//! `~k` suffix.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::map::{MapError, SpaceMap};
use crate::set::PointSet;
use crate::space::{PointId, Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColimitError {
    #[error("span legs have different domains")]
    MismatchedDomains,
    #[error("span leg `{0}` is not continuous")]
    DiscontinuousLeg(&'static str),
    #[error("maps are not parallel")]
    NotParallel,
    #[error("the i-leg is not a closed subspace inclusion")]
    NotClosedInclusion,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A span `Y ←f– A –i→ X` of continuous maps out of a shared apex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    f: SpaceMap,
    i: SpaceMap,
}

impl Span {
    pub fn new(f: SpaceMap, i: SpaceMap) -> Result<Span, ColimitError> {
        if f.domain() != i.domain() {
            return Err(ColimitError::MismatchedDomains);
        }
        if !f.is_continuous() {
            return Err(ColimitError::DiscontinuousLeg("f"));
        }
        if !i.is_continuous() {
            return Err(ColimitError::DiscontinuousLeg("i"));
        }
        Ok(Span { f, i })
    }

    pub fn apex(&self) -> &Space {
        self.f.domain()
    }

    pub fn x(&self) -> &Space {
        self.i.codomain()
    }

    pub fn y(&self) -> &Space {
        self.f.codomain()
    }

    pub fn f(&self) -> &SpaceMap {
        &self.f
    }

    pub fn i(&self) -> &SpaceMap {
        &self.i
    }
}

/// Where each original point of `X` and `Y` landed, keyed by `x:<label>` or
/// `y:<label>`. Fibers of the glueing are recoverable by grouping values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance(pub BTreeMap<String, String>);

impl Provenance {
    /// Original points (tagged `x:`/`y:`) that landed on `z`.
    pub fn fiber(&self, z: &str) -> Vec<&str> {
        self.0.iter().filter(|(_, v)| v.as_str() == z).map(|(k, _)| k.as_str()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PushoutResult {
    pub space: Space,
    /// Leg `Y → Z`.
    pub j: SpaceMap,
    /// Leg `X → Z`.
    pub g: SpaceMap,
    pub provenance: Provenance,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Resolves label collisions: the first taker keeps the label, later ones
/// get `~2`, `~3`, .. in input order.
fn disambiguate(desired: Vec<String>) -> Vec<String> {
    let mut taken: BTreeMap<String, usize> = BTreeMap::new();
    desired
        .into_iter()
        .map(|want| {
            let count = taken.get(&want).copied().unwrap_or(0) + 1;
            taken.insert(want.clone(), count);
            if count == 1 {
                return want;
            }
            let mut k = count;
            loop {
                let candidate = format!("{want}~{k}");
                if !taken.contains_key(&candidate) {
                    taken.insert(candidate.clone(), 1);
                    return candidate;
                }
                k += 1;
            }
        })
        .collect()
}

/// Disjoint union with componentwise closure. Original labels are kept when
/// globally distinct; otherwise every point is prefixed with its component
/// index as `k:label`.
pub fn coproduct(spaces: &[Space]) -> Result<(Space, Vec<SpaceMap>), ColimitError> {
    let total: usize = spaces.iter().map(Space::point_count).sum();
    let mut seen = std::collections::BTreeSet::new();
    let distinct = spaces
        .iter()
        .flat_map(|s| s.labels())
        .all(|l| seen.insert(l.clone()));
    let mut entries = Vec::with_capacity(total);
    let mut offset = Vec::with_capacity(spaces.len());
    for (k, space) in spaces.iter().enumerate() {
        offset.push(entries.len());
        for p in space.points() {
            let label = if distinct {
                space.label(p).to_string()
            } else {
                format!("{k}:{}", space.label(p))
            };
            let shifted: PointSet = space
                .singleton_closure(p)
                .iter()
                .map(|q| q + offset[k])
                .collect();
            entries.push((label, shifted));
        }
    }
    let (space, rank) = Space::assemble(entries)?;
    let injections = spaces
        .iter()
        .enumerate()
        .map(|(k, component)| {
            let assignment =
                component.points().map(|p| PointId(rank[offset[k] + p.0])).collect();
            SpaceMap::new(component.clone(), space.clone(), assignment).map_err(ColimitError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((space, injections))
}

/// Coequalizer of a parallel pair: the quotient of the shared codomain by
/// the relation `f(x) ~ g(x)`, with closure `p(c_Y(p⁻¹ B))`. Classes are
/// labeled by their least member label.
pub fn coequalizer(f: &SpaceMap, g: &SpaceMap) -> Result<(Space, SpaceMap), ColimitError> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(ColimitError::NotParallel);
    }
    let y = f.codomain();
    let mut uf = UnionFind::new(y.point_count());
    for x in f.domain().points() {
        uf.union(f.apply(x).0, g.apply(x).0);
    }
    let mut members: BTreeMap<usize, PointSet> = BTreeMap::new();
    for p in 0..y.point_count() {
        members.entry(uf.find(p)).or_insert(PointSet::EMPTY).insert(p);
    }
    let classes: Vec<PointSet> = members.into_values().collect();
    let mut class_of = vec![0usize; y.point_count()];
    for (k, class) in classes.iter().enumerate() {
        for p in class.iter() {
            class_of[p] = k;
        }
    }
    let entries: Vec<(String, PointSet)> = classes
        .iter()
        .map(|&class| {
            let label = y.label(PointId(class.iter().next().expect("classes are nonempty")));
            let closure: PointSet = y.closure(class).iter().map(|q| class_of[q]).collect();
            (label.to_string(), closure)
        })
        .collect();
    let (space, rank) = Space::assemble(entries)?;
    let assignment = (0..y.point_count()).map(|p| PointId(rank[class_of[p]])).collect();
    let projection = SpaceMap::new(y.clone(), space.clone(), assignment)?;
    Ok((space, projection))
}

/// Tagged point of the disjoint union `X ⊔ Y` underlying a pushout.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Tag {
    // Y sorts before X so that ties between equal labels resolve the same
    // way everywhere.
    Y(usize),
    X(usize),
}

/// Pushout of a span, glueing `X` and `Y` along `i(a) ~ f(a)`. The closure
/// of `B ⊆ Z` is `j(c_Y(j⁻¹ B)) ∪ g(c_X(g⁻¹ B))`, evaluated on singletons.
pub fn pushout(span: &Span) -> Result<PushoutResult, ColimitError> {
    let (x, y) = (span.x(), span.y());
    let (nx, ny) = (x.point_count(), y.point_count());
    let mut uf = UnionFind::new(nx + ny);
    for a in span.apex().points() {
        uf.union(span.i().apply(a).0, nx + span.f().apply(a).0);
    }
    let mut grouped: BTreeMap<usize, Vec<Tag>> = BTreeMap::new();
    for t in 0..nx + ny {
        let tag = if t < nx { Tag::X(t) } else { Tag::Y(t - nx) };
        grouped.entry(uf.find(t)).or_default().push(tag);
    }
    let tag_label = |tag: &Tag| match *tag {
        Tag::X(p) => x.label(PointId(p)),
        Tag::Y(p) => y.label(PointId(p)),
    };
    let mut classes: Vec<Vec<Tag>> = grouped.into_values().collect();
    for class in classes.iter_mut() {
        class.sort_by(|a, b| tag_label(a).cmp(tag_label(b)).then(a.cmp(b)));
    }
    classes.sort_by(|a, b| {
        let ka = a.iter().map(|t| (tag_label(t), t));
        let kb = b.iter().map(|t| (tag_label(t), t));
        ka.cmp(kb)
    });
    let mut x_class = vec![0usize; nx];
    let mut y_class = vec![0usize; ny];
    for (k, class) in classes.iter().enumerate() {
        for tag in class {
            match *tag {
                Tag::X(p) => x_class[p] = k,
                Tag::Y(p) => y_class[p] = k,
            }
        }
    }
    let desired = classes.iter().map(|class| tag_label(&class[0]).to_string()).collect();
    let labels = disambiguate(desired);
    let entries: Vec<(String, PointSet)> = classes
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let j_pre: PointSet = (0..ny).filter(|&p| y_class[p] == k).collect();
            let g_pre: PointSet = (0..nx).filter(|&p| x_class[p] == k).collect();
            let mut closure: PointSet = y.closure(j_pre).iter().map(|q| y_class[q]).collect();
            closure |= x.closure(g_pre).iter().map(|q| x_class[q]).collect();
            (labels[k].clone(), closure)
        })
        .collect();
    let (space, rank) = Space::assemble(entries)?;
    let j = SpaceMap::new(
        y.clone(),
        space.clone(),
        (0..ny).map(|p| PointId(rank[y_class[p]])).collect(),
    )?;
    let g = SpaceMap::new(
        x.clone(),
        space.clone(),
        (0..nx).map(|p| PointId(rank[x_class[p]])).collect(),
    )?;
    debug_assert!(j.is_continuous() && g.is_continuous());
    let mut provenance = BTreeMap::new();
    for p in x.points() {
        provenance.insert(format!("x:{}", x.label(p)), space.label(g.apply(p)).to_string());
    }
    for p in y.points() {
        provenance.insert(format!("y:{}", y.label(p)), space.label(j.apply(p)).to_string());
    }
    Ok(PushoutResult { space, j, g, provenance: Provenance(provenance) })
}

/// Pushout along a closed subspace inclusion `i`, built on the carrier
/// `Y ⊔ (X ∖ A)` with closure `c_Y(B ∩ Y) ∪ g(c_X(B ∩ (X ∖ A)))` instead of
/// the general glueing. Rejects spans whose `i`-leg does not embed the apex
/// as a closed subspace.
///
/// Unlike [`pushout`], which names a merged class after its least member,
/// this route keeps the labels of `Y` and `X ∖ A` verbatim (collisions are
/// suffixed, `Y` first): a base space never has its points renamed by the
/// boundary that was glued onto it. The two routes therefore agree up to a
/// leg-respecting isomorphism, not necessarily on labels.
pub fn pushout_along_closed_inclusion(span: &Span) -> Result<PushoutResult, ColimitError> {
    let i = span.i();
    if !i.is_subspace_embedding() {
        return Err(ColimitError::NotClosedInclusion);
    }
    let (x, y) = (span.x(), span.y());
    let a_image = i.image();
    if !x.is_closed(a_image) {
        return Err(ColimitError::NotClosedInclusion);
    }
    let mut apex_point = vec![None; x.point_count()];
    for a in span.apex().points() {
        apex_point[i.apply(a).0] = Some(a);
    }
    let rest: Vec<usize> = x.carrier().difference(a_image).iter().collect();
    let ny = y.point_count();
    // Provisional order: all of Y, then X ∖ A.
    let mut desired: Vec<String> = y.labels().to_vec();
    desired.extend(rest.iter().map(|&p| x.label(PointId(p)).to_string()));
    let labels = disambiguate(desired);
    // Where each X point lands, in provisional indices.
    let g_target: Vec<usize> = (0..x.point_count())
        .map(|p| match apex_point[p] {
            Some(a) => span.f().apply(a).0,
            None => ny + rest.binary_search(&p).unwrap(),
        })
        .collect();
    let mut entries: Vec<(String, PointSet)> = Vec::with_capacity(ny + rest.len());
    for p in y.points() {
        entries.push((labels[p.0].clone(), y.singleton_closure(p)));
    }
    for (k, &p) in rest.iter().enumerate() {
        let closure: PointSet =
            x.singleton_closure(PointId(p)).iter().map(|q| g_target[q]).collect();
        entries.push((labels[ny + k].clone(), closure));
    }
    let (space, rank) = Space::assemble(entries)?;
    let j = SpaceMap::new(
        y.clone(),
        space.clone(),
        (0..ny).map(|p| PointId(rank[p])).collect(),
    )?;
    let g = SpaceMap::new(
        x.clone(),
        space.clone(),
        (0..x.point_count()).map(|p| PointId(rank[g_target[p]])).collect(),
    )?;
    debug_assert!(j.is_subspace_embedding() && space.is_closed(j.image()));
    let mut provenance = BTreeMap::new();
    for p in x.points() {
        provenance.insert(format!("x:{}", x.label(p)), space.label(g.apply(p)).to_string());
    }
    for p in y.points() {
        provenance.insert(format!("y:{}", y.label(p)), space.label(j.apply(p)).to_string());
    }
    Ok(PushoutResult { space, j, g, provenance: Provenance(provenance) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(entries: &[(&str, Vec<&str>)]) -> Space {
        Space::from_closure_lists(entries).unwrap()
    }

    fn map(domain: &Space, codomain: &Space, pairs: &[(&str, &str)]) -> SpaceMap {
        let table: BTreeMap<String, String> =
            pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        SpaceMap::from_label_pairs(domain.clone(), codomain.clone(), &table).unwrap()
    }

    fn indiscrete_pair_span() -> Span {
        let a = Space::discrete(["1"]).unwrap();
        let x = Space::indiscrete(["0", "1"]).unwrap();
        let y = Space::indiscrete(["1", "2"]).unwrap();
        Span::new(map(&a, &y, &[("1", "1")]), map(&a, &x, &[("1", "1")])).unwrap()
    }

    fn interval_attachment_span() -> Span {
        let a = Space::discrete(["p", "q"]).unwrap();
        let x = space(&[("m", vec!["m", "p", "q"]), ("p", vec!["p"]), ("q", vec!["q"])]);
        let y = Space::indiscrete(["0", "1"]).unwrap();
        Span::new(
            map(&a, &y, &[("p", "0"), ("q", "0")]),
            map(&a, &x, &[("p", "p"), ("q", "q")]),
        )
        .unwrap()
    }

    #[test]
    fn coproduct_keeps_distinct_labels_and_prefixes_collisions() {
        let s = Space::discrete(["a", "b"]).unwrap();
        let t = Space::indiscrete(["c", "d"]).unwrap();
        let (sum, injections) = coproduct(&[s.clone(), t.clone()]).unwrap();
        assert_eq!(sum.labels(), &["a", "b", "c", "d"]);
        assert!(injections.iter().all(|inj| inj.is_continuous() && inj.is_closed_map()));
        assert_eq!(
            sum.labels_of(sum.singleton_closure(sum.point("c").unwrap())),
            vec!["c", "d"]
        );

        let (clash, _) = coproduct(&[s.clone(), s.clone()]).unwrap();
        assert_eq!(clash.labels(), &["0:a", "0:b", "1:a", "1:b"]);
    }

    #[test]
    fn coproduct_edge_cases() {
        let (none, injections) = coproduct(&[]).unwrap();
        assert!(none.is_empty());
        assert!(injections.is_empty());
        let s = space(&[("u", vec!["u", "v"]), ("v", vec!["v"])]);
        let (one, _) = coproduct(std::slice::from_ref(&s)).unwrap();
        assert_eq!(one, s);
    }

    #[test]
    fn coequalizer_collapsing_sierpinski_to_a_point() {
        let a = Space::discrete(["s"]).unwrap();
        let y = space(&[("a", vec!["a"]), ("b", vec!["a", "b"])]);
        let f = map(&a, &y, &[("s", "a")]);
        let g = map(&a, &y, &[("s", "b")]);
        let (q, projection) = coequalizer(&f, &g).unwrap();
        assert_eq!(q, Space::indiscrete(["a"]).unwrap());
        assert!(projection.is_surjective());
    }

    #[test]
    fn coequalizer_identifying_two_chain_points() {
        let a = Space::discrete(["s", "t"]).unwrap();
        let y = space(&[("0", vec!["0", "1"]), ("1", vec!["1", "2"]), ("2", vec!["2"])]);
        let f = map(&a, &y, &[("s", "0"), ("t", "2")]);
        let g = map(&a, &y, &[("s", "1"), ("t", "2")]);
        let (q, projection) = coequalizer(&f, &g).unwrap();
        let expected = space(&[("0", vec!["0", "2"]), ("2", vec!["2"])]);
        assert_eq!(q, expected);
        assert_eq!(projection.label_pairs().get("1").map(String::as_str), Some("0"));
    }

    #[test]
    fn coequalizer_of_equal_maps_is_the_identity_quotient() {
        let y = space(&[("0", vec!["0", "1"]), ("1", vec!["1"])]);
        let f = SpaceMap::identity(&y);
        let (q, projection) = coequalizer(&f, &f).unwrap();
        assert_eq!(q, y);
        assert_eq!(projection, SpaceMap::identity(&y));
    }

    #[test]
    fn coequalizer_rejects_non_parallel_pairs() {
        let y = Space::discrete(["0"]).unwrap();
        let z = Space::discrete(["1"]).unwrap();
        let f = SpaceMap::identity(&y);
        let g = SpaceMap::identity(&z);
        assert_eq!(coequalizer(&f, &g).unwrap_err(), ColimitError::NotParallel);
    }

    #[test]
    fn pushout_of_indiscrete_pairs_gives_the_glued_three_point_space() {
        let result = pushout(&indiscrete_pair_span()).unwrap();
        let expected = space(&[
            ("0", vec!["0", "1"]),
            ("1", vec!["0", "1", "2"]),
            ("2", vec!["1", "2"]),
        ]);
        assert_eq!(result.space, expected);
        assert_eq!(result.provenance.0.get("x:1"), Some(&"1".to_string()));
        assert_eq!(result.provenance.0.get("y:1"), Some(&"1".to_string()));
        assert_eq!(result.provenance.fiber("1"), vec!["x:1", "y:1"]);
        assert!(result.j.is_continuous() && result.g.is_continuous());
    }

    #[test]
    fn pushout_squares_commute() {
        let span = interval_attachment_span();
        let result = pushout(&span).unwrap();
        assert_eq!(
            span.f().then(&result.j).unwrap(),
            span.i().then(&result.g).unwrap()
        );
    }

    #[test]
    fn pushout_with_empty_apex_is_the_coproduct() {
        let x = Space::discrete(["a"]).unwrap();
        let y = Space::indiscrete(["b", "c"]).unwrap();
        let a = Space::empty();
        let span = Span::new(
            SpaceMap::new(a.clone(), y.clone(), vec![]).unwrap(),
            SpaceMap::new(a, x.clone(), vec![]).unwrap(),
        )
        .unwrap();
        let result = pushout(&span).unwrap();
        let (sum, _) = coproduct(&[x, y]).unwrap();
        assert_eq!(result.space, sum);
    }

    #[test]
    fn pushout_label_collisions_get_suffixes() {
        let x = Space::discrete(["a"]).unwrap();
        let y = Space::discrete(["a"]).unwrap();
        let empty = Space::empty();
        let span = Span::new(
            SpaceMap::new(empty.clone(), y, vec![]).unwrap(),
            SpaceMap::new(empty, x, vec![]).unwrap(),
        )
        .unwrap();
        let result = pushout(&span).unwrap();
        assert_eq!(result.space.labels(), &["a", "a~2"]);
        // Y sorts first in the canonical class order, so it keeps the label.
        assert_eq!(result.provenance.0.get("y:a"), Some(&"a".to_string()));
        assert_eq!(result.provenance.0.get("x:a"), Some(&"a~2".to_string()));
    }

    #[test]
    fn pushout_along_closed_inclusion_matches_the_general_route() {
        let span = interval_attachment_span();
        let direct = pushout(&span).unwrap();
        let along = pushout_along_closed_inclusion(&span).unwrap();
        assert_eq!(along.space, direct.space);
        assert_eq!(along.j, direct.j);
        assert_eq!(along.g, direct.g);

        let z = &along.space;
        let m = z.point("m").unwrap();
        assert_eq!(z.labels_of(z.singleton_closure(m)), vec!["0", "m"]);
        let twice = z.closure(z.singleton_closure(m));
        assert_eq!(z.labels_of(twice), vec!["0", "1", "m"]);
    }

    #[test]
    fn pushout_along_closed_inclusion_rejects_non_closed_legs() {
        // The apex embeds as {0} in the indiscrete pair, which is not closed.
        let a = Space::discrete(["0"]).unwrap();
        let x = Space::indiscrete(["0", "1"]).unwrap();
        let y = Space::discrete(["w"]).unwrap();
        let span = Span::new(
            map(&a, &y, &[("0", "w")]),
            map(&a, &x, &[("0", "0")]),
        )
        .unwrap();
        assert_eq!(
            pushout_along_closed_inclusion(&span).unwrap_err(),
            ColimitError::NotClosedInclusion
        );

        // A collapsing i-leg is not an inclusion at all.
        let a2 = Space::indiscrete(["u", "v"]).unwrap();
        let x2 = Space::discrete(["0"]).unwrap();
        let span2 = Span::new(
            map(&a2, &y, &[("u", "w"), ("v", "w")]),
            map(&a2, &x2, &[("u", "0"), ("v", "0")]),
        )
        .unwrap();
        assert_eq!(
            pushout_along_closed_inclusion(&span2).unwrap_err(),
            ColimitError::NotClosedInclusion
        );
    }

    #[test]
    fn span_construction_rejects_bad_legs() {
        let a = Space::indiscrete(["u", "v"]).unwrap();
        let x = Space::discrete(["0", "1"]).unwrap();
        let y = Space::discrete(["w"]).unwrap();
        let collapse = map(&a, &y, &[("u", "w"), ("v", "w")]);
        let separate = map(&a, &x, &[("u", "0"), ("v", "1")]);
        assert_eq!(
            Span::new(collapse, separate).unwrap_err(),
            ColimitError::DiscontinuousLeg("i")
        );
    }

    #[test]
    fn disambiguation_is_stable() {
        let labels = disambiguate(vec![
            "a".to_string(),
            "a".to_string(),
            "a~2".to_string(),
            "a".to_string(),
        ]);
        assert_eq!(labels, vec!["a", "a~2", "a~2~2", "a~3"]);
    }
}
