//! The theorem-checking harness.
//!
//! Two statements get exercised here. For a span where the apex sits in
//! `X` as a closed subspace and both feet are idempotent: if the other leg
//! is a closed map, the glued space is already topological and coincides
//! with the reference pushout; and conversely, if it coincides and the
//! boundary satisfies the trace condition below, the leg must have been
//! closed. The staged version says closed attachments over a topological
//! base stay topological forever.
//!
//! Checks produce reports with explicit hypothesis gates, so a failed
//! hypothesis is distinguishable from a failed conclusion. Counterexample
//! mining sweeps the hypothesis-satisfying spans and records every glueing
//! that fails idempotence as a replayable certificate.

use std::collections::BTreeSet;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell::{build_cw, CellError, DiskStyle, StageSpec};
use crate::colimit::{pushout, ColimitError, PushoutResult, Span};
use crate::doc::{DocError, SpanDoc};
use crate::enumerate::{canonical_spaces_cached, canonical_topologies, continuous_maps};
use crate::map::{map_closed_inclusion_conditions, subspace, MapError, SpaceMap};
use crate::set::PointSet;
use crate::space::{PointId, Space, SpaceError};
use crate::top_oracle::top_pushout;

/// Subset sweeps are exponential; refuse anything wider than this.
pub const SWEEP_LIMIT: usize = 20;

/// Largest cocone carrier the universal-property check enumerates.
pub const DEFAULT_COCONE_BOUND: usize = 4;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{what} has {size} points, too many to sweep")]
    TooLarge { what: &'static str, size: usize },
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Doc(#[from] DocError),
}

/// The trace condition: every closed subset of the subspace `a` occurs as
/// `closure(B) ∩ a` for some `B` disjoint from `a`.
pub fn condition_b(space: &Space, a: PointSet) -> Result<bool, VerifyError> {
    assert!(a.is_subset_of(space.carrier()));
    let rest = space.carrier().difference(a);
    if a.len() > SWEEP_LIMIT {
        return Err(VerifyError::TooLarge { what: "the subspace", size: a.len() });
    }
    if rest.len() > SWEEP_LIMIT {
        return Err(VerifyError::TooLarge { what: "the complement", size: rest.len() });
    }
    let reachable: BTreeSet<PointSet> =
        rest.subsets().map(|b| space.closure(b).intersection(a)).collect();
    Ok(a
        .subsets()
        .filter(|&c| space.closure(c).intersection(a) == c)
        .all(|c| reachable.contains(&c)))
}

/// Everything the single-attachment statement talks about, evaluated on
/// one span. Implication fields are `None` when their hypotheses fail or
/// the reference pushout is unavailable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub apex_topological: bool,
    pub x_topological: bool,
    pub y_topological: bool,
    pub i_is_closed_inclusion: bool,
    /// `x` and `y` idempotent and `i` a closed inclusion.
    pub hypotheses_met: bool,
    pub f_closed: bool,
    pub condition_b: Option<bool>,
    pub pushout_topological: bool,
    /// The glued space equals the reference pushout on the nose.
    pub agrees_with_top: Option<bool>,
    /// Its idempotent coarsening does.
    pub tau_agrees_with_top: Option<bool>,
    /// `f` closed implies agreement.
    pub forward_ok: Option<bool>,
    /// Agreement plus the trace condition implies `f` closed.
    pub reverse_ok: Option<bool>,
    /// First point whose closure fails idempotence, if any.
    pub witness: Option<Vec<String>>,
}

impl Prop1Report {
    pub fn implications_hold(&self) -> bool {
        self.forward_ok != Some(false) && self.reverse_ok != Some(false)
    }
}

fn non_idempotent_witness(space: &Space) -> Option<Vec<String>> {
    space
        .points()
        .find(|&p| {
            let once = space.singleton_closure(p);
            space.closure(once) != once
        })
        .map(|p| vec![space.label(p).to_string()])
}

pub fn check_prop1(span: &Span) -> Result<Prop1Report, VerifyError> {
    let apex_topological = span.apex().is_topological();
    let x_topological = span.x().is_topological();
    let y_topological = span.y().is_topological();
    let i_is_closed_inclusion =
        map_closed_inclusion_conditions(span.i()).is_some_and(|c| c.all());
    let hypotheses_met = x_topological && y_topological && i_is_closed_inclusion;
    let f_closed = span.f().is_closed_map();
    let condition_b_value = if i_is_closed_inclusion {
        condition_b(span.x(), span.i().image()).ok()
    } else {
        None
    };
    let result = pushout(span)?;
    let pushout_topological = result.space.is_topological();
    let witness = non_idempotent_witness(&result.space);
    let oracle =
        if x_topological && y_topological { top_pushout(span).ok() } else { None };
    let agrees_with_top = oracle.as_ref().map(|o| o == &result.space);
    let tau_agrees_with_top =
        oracle.as_ref().map(|o| &result.space.topological_modification() == o);
    let forward_ok = if hypotheses_met {
        agrees_with_top.map(|agrees| !f_closed || agrees)
    } else {
        None
    };
    let reverse_ok = if hypotheses_met {
        match (agrees_with_top, condition_b_value) {
            (Some(agrees), Some(cb)) => Some(!(agrees && cb) || f_closed),
            _ => None,
        }
    } else {
        None
    };
    Ok(Prop1Report {
        apex_topological,
        x_topological,
        y_topological,
        i_is_closed_inclusion,
        hypotheses_met,
        f_closed,
        condition_b: condition_b_value,
        pushout_topological,
        agrees_with_top,
        tau_agrees_with_top,
        forward_ok,
        reverse_ok,
        witness,
    })
}

/// Per-stage record for the staged statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCheck {
    pub dim: usize,
    pub style: String,
    pub cell_count: usize,
    /// Every attaching map in the stage is a closed map.
    pub attaching_closed: bool,
    /// The space being attached to was topological.
    pub input_topological: bool,
    pub hypotheses_met: bool,
    pub space_topological: bool,
    /// `Some(space_topological)` when the hypotheses held, `None` when the
    /// statement asserts nothing about this stage.
    pub assertion: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainReport {
    pub base_topological: bool,
    pub final_points: usize,
    pub stages: Vec<StageCheck>,
}

impl MainReport {
    pub fn gated_assertions_hold(&self) -> bool {
        self.stages.iter().all(|s| s.assertion != Some(false))
    }
}

pub fn check_theorem_main(base: Space, stages: &[StageSpec]) -> Result<MainReport, VerifyError> {
    let build = build_cw(base, stages)?;
    let base_topological = build.base.is_topological();
    let mut input_topological = base_topological;
    let mut checks = Vec::with_capacity(stages.len());
    for (spec, stage) in stages.iter().zip(&build.stages) {
        let attaching_closed =
            stage.attachment.cells().iter().all(|c| c.attaching().is_closed_map());
        let hypotheses_met = input_topological && attaching_closed;
        let space_topological = stage.space.is_topological();
        let style = if spec.dim == 0 { DiskStyle::Cone } else { spec.style };
        checks.push(StageCheck {
            dim: spec.dim,
            style: style.to_string(),
            cell_count: spec.cells.len(),
            attaching_closed,
            input_topological,
            hypotheses_met,
            space_topological,
            assertion: hypotheses_met.then_some(space_topological),
        });
        input_topological = space_topological;
    }
    Ok(MainReport {
        base_topological,
        final_points: build.final_space().point_count(),
        stages: checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// The glued space is not idempotent.
    NonIdempotentPushout,
    /// The span does not satisfy the statement's hypotheses.
    HypothesisFailure,
    /// Some cocone has no mediator or several.
    UniversalPropertyFailure,
}

/// A replayable finding: the span the claim is about, the witness points,
/// and the full report at mining time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub span: SpanDoc,
    pub witness: Vec<String>,
    pub narrative: Prop1Report,
}

impl Certificate {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }

    /// Rebuilds the span and re-derives the claim from scratch; true when
    /// the claim still holds.
    pub fn replay(&self, dir: &Path) -> Result<bool, VerifyError> {
        let span = self.span.build(dir)?;
        match self.kind {
            CertificateKind::NonIdempotentPushout => {
                let result = pushout(&span)?;
                Ok(!self.witness.is_empty()
                    && self.witness.iter().all(|label| match result.space.point(label) {
                        Some(p) => {
                            let once = result.space.singleton_closure(p);
                            result.space.closure(once) != once
                        }
                        None => false,
                    }))
            }
            CertificateKind::HypothesisFailure => {
                Ok(!check_prop1(&span)?.hypotheses_met)
            }
            CertificateKind::UniversalPropertyFailure => {
                let result = pushout(&span)?;
                Ok(!verify_universal_property(&span, &result, DEFAULT_COCONE_BOUND)?)
            }
        }
    }
}

/// Span universe bounds for mining and the exhaustive sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningBounds {
    pub max_apex: usize,
    pub max_x: usize,
    pub max_y: usize,
}

impl Default for MiningBounds {
    fn default() -> MiningBounds {
        MiningBounds { max_apex: 3, max_x: 4, max_y: 4 }
    }
}

/// Visits every span, up to isomorphism of the feet, where the apex is a
/// closed subspace of an idempotent `X` and `Y` is idempotent: all closed
/// subsets of all topologies on up to `max_x` points, against all
/// continuous maps into all topologies on up to `max_y` points, in a fixed
/// order.
pub fn for_each_closed_inclusion_span<F: FnMut(&Span)>(bounds: &MiningBounds, mut visit: F) {
    let xs: Vec<Space> = (1..=bounds.max_x).flat_map(canonical_topologies).collect();
    let ys: Vec<Space> = (1..=bounds.max_y).flat_map(canonical_topologies).collect();
    for x in &xs {
        for members in x.closed_sets() {
            if members.len() > bounds.max_apex {
                continue;
            }
            let (apex, inclusion) = subspace(x, members);
            for y in &ys {
                for f in continuous_maps(&apex, y) {
                    let span = Span::new(f, inclusion.clone())
                        .expect("legs are continuous by construction");
                    visit(&span);
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    /// Spans the stream produced (after the closed-`f` filter, if any).
    pub scanned: u64,
    /// Spans actually checked.
    pub sampled: usize,
    pub certificates: Vec<Certificate>,
}

/// Reservoir-samples `budget` spans from the bounded universe and checks
/// each one, recording every non-idempotent glueing as a certificate. The
/// same seed, bounds, and budget always produce the same certificates.
/// With `require_closed_f` the stream is restricted to spans the forward
/// statement covers, so any certificate at all is a refutation.
pub fn mine_certificates(
    bounds: &MiningBounds,
    budget: usize,
    seed: u64,
    require_closed_f: bool,
) -> Result<MiningOutcome, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reservoir: Vec<Span> = Vec::with_capacity(budget.min(1 << 16));
    let mut scanned: u64 = 0;
    for_each_closed_inclusion_span(bounds, |span| {
        if require_closed_f && !span.f().is_closed_map() {
            return;
        }
        let t = scanned;
        scanned += 1;
        if (t as usize) < budget {
            reservoir.push(span.clone());
        } else {
            let j = rng.gen_range(0..=t);
            if (j as usize) < budget {
                reservoir[j as usize] = span.clone();
            }
        }
    });
    let mut certificates = Vec::new();
    for span in &reservoir {
        let report = check_prop1(span)?;
        if !report.pushout_topological {
            certificates.push(Certificate {
                kind: CertificateKind::NonIdempotentPushout,
                span: SpanDoc::from_span(span),
                witness: report.witness.clone().unwrap_or_default(),
                narrative: report,
            });
        }
    }
    certificates.sort_by(|a, b| a.to_json_line().cmp(&b.to_json_line()));
    certificates.dedup_by(|a, b| a.to_json_line() == b.to_json_line());
    Ok(MiningOutcome { scanned, sampled: reservoir.len(), certificates })
}

/// Exhaustively checks the glueing's mapping property against every cocone
/// whose carrier has at most `max_cocone_points` points, one space per
/// isomorphism class (the property is isomorphism-invariant). True when
/// every commuting cocone factors through exactly one continuous map.
pub fn verify_universal_property(
    span: &Span,
    result: &PushoutResult,
    max_cocone_points: usize,
) -> Result<bool, VerifyError> {
    assert!(max_cocone_points <= 4, "cached cocone carriers stop at four points");
    if span.f().then(&result.j)? != span.i().then(&result.g)? {
        return Ok(false);
    }
    if !result.j.is_continuous() || !result.g.is_continuous() {
        return Ok(false);
    }
    let (x, y, z) = (span.x(), span.y(), &result.space);
    for n in 0..=max_cocone_points {
        for z_prime in canonical_spaces_cached(n) {
            let j_candidates = continuous_maps(y, z_prime);
            let g_candidates = continuous_maps(x, z_prime);
            for j_prime in &j_candidates {
                'pairs: for g_prime in &g_candidates {
                    for a in span.apex().points() {
                        if g_prime.apply(span.i().apply(a)) != j_prime.apply(span.f().apply(a)) {
                            continue 'pairs;
                        }
                    }
                    // A mediator is pinned down on the leg images; points
                    // outside both images (impossible for a real pushout,
                    // possible for a corrupted one) stay free.
                    let mut forced: Vec<Option<PointId>> = vec![None; z.point_count()];
                    let mut consistent = true;
                    for p in y.points() {
                        let want = j_prime.apply(p);
                        match &mut forced[result.j.apply(p).0] {
                            slot @ None => *slot = Some(want),
                            Some(have) if *have == want => {}
                            _ => consistent = false,
                        }
                    }
                    for p in x.points() {
                        let want = g_prime.apply(p);
                        match &mut forced[result.g.apply(p).0] {
                            slot @ None => *slot = Some(want),
                            Some(have) if *have == want => {}
                            _ => consistent = false,
                        }
                    }
                    if !consistent {
                        return Ok(false);
                    }
                    let free: Vec<usize> = forced
                        .iter()
                        .enumerate()
                        .filter(|(_, slot)| slot.is_none())
                        .map(|(p, _)| p)
                        .collect();
                    let nz_prime = z_prime.point_count() as u64;
                    let completions = nz_prime.pow(free.len() as u32);
                    let mut mediators = 0u64;
                    for code in 0..completions {
                        let mut assignment: Vec<PointId> =
                            forced.iter().map(|slot| slot.unwrap_or(PointId(0))).collect();
                        let mut rest = code;
                        for &p in &free {
                            assignment[p] = PointId((rest % nz_prime) as usize);
                            rest /= nz_prime;
                        }
                        let mediator = SpaceMap::new(z.clone(), z_prime.clone(), assignment)?;
                        if mediator.is_continuous() {
                            mediators += 1;
                            if mediators > 1 {
                                break;
                            }
                        }
                    }
                    if mediators != 1 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
