//! JSON documents for spaces, maps, spans, and attachment plans.
//!
//! The wire format is plain: a space is its point list plus a closure
//! table (points missing from the table default to closing onto
//! themselves), a map is a label table, and the larger documents compose
//! those, inline or by file path relative to the referencing document.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell::{build_cw, CellError, CwBuild, StageSpec};
use crate::colimit::{ColimitError, Span};
use crate::map::{MapError, SpaceMap};
use crate::set::MAX_POINTS;
use crate::space::{Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("point `{0}` is listed more than once")]
    DuplicatePoint(String),
    #[error("closure table mentions `{0}`, which is not a point")]
    UnknownClosureKey(String),
    #[error("closure of `{owner}` contains `{label}`, which is not a point")]
    ForeignPoint { owner: String, label: String },
    #[error("closure of `{0}` does not contain `{0}` itself")]
    Extensivity(String),
    #[error("{0} points will not fit (limit {MAX_POINTS})")]
    TooManyPoints(usize),
}

fn violations_text(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("invalid space document: {}", violations_text(.0))]
    Invalid(Vec<Violation>),
    #[error("incompatible pieces: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Cell(#[from] CellError),
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, DocError> {
    let text = fs::read_to_string(path)
        .map_err(|source| DocError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text)
        .map_err(|source| DocError::Parse { path: path.display().to_string(), source })
}

/// A space on the wire: `{"points": [..], "closure": {"p": ["p", ..]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub closure: BTreeMap<String, Vec<String>>,
}

impl SpaceDoc {
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for p in &self.points {
            if !seen.insert(p) {
                violations.push(Violation::DuplicatePoint(p.clone()));
            }
        }
        if self.points.len() > MAX_POINTS {
            violations.push(Violation::TooManyPoints(self.points.len()));
        }
        for (owner, closure) in &self.closure {
            if !seen.contains(owner.as_str()) {
                violations.push(Violation::UnknownClosureKey(owner.clone()));
                continue;
            }
            for label in closure {
                if !seen.contains(label.as_str()) {
                    violations.push(Violation::ForeignPoint {
                        owner: owner.clone(),
                        label: label.clone(),
                    });
                }
            }
            if !closure.contains(owner) {
                violations.push(Violation::Extensivity(owner.clone()));
            }
        }
        violations
    }

    pub fn build(&self) -> Result<Space, DocError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(DocError::Invalid(violations));
        }
        let entries: Vec<(String, Vec<String>)> = self
            .points
            .iter()
            .map(|p| {
                let closure =
                    self.closure.get(p).cloned().unwrap_or_else(|| vec![p.clone()]);
                (p.clone(), closure)
            })
            .collect();
        Ok(Space::from_closure_lists(&entries)?)
    }

    /// Writes every closure out explicitly, so the document round-trips
    /// regardless of defaults.
    pub fn from_space(space: &Space) -> SpaceDoc {
        SpaceDoc {
            points: space.labels().to_vec(),
            closure: space
                .points()
                .map(|p| {
                    let closure = space
                        .labels_of(space.singleton_closure(p))
                        .into_iter()
                        .map(str::to_string)
                        .collect();
                    (space.label(p).to_string(), closure)
                })
                .collect(),
        }
    }
}

/// Either a relative path to a space file or the space spelled inline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDoc),
}

impl SpaceRef {
    pub fn resolve(&self, dir: &Path) -> Result<Space, DocError> {
        match self {
            SpaceRef::Path(p) => read_json::<SpaceDoc>(&dir.join(p))?.build(),
            SpaceRef::Inline(doc) => doc.build(),
        }
    }
}

/// A standalone map file: domain, codomain, and the label table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    pub assignment: BTreeMap<String, String>,
}

impl MapDoc {
    pub fn build(&self, dir: &Path) -> Result<SpaceMap, DocError> {
        let domain = self.domain.resolve(dir)?;
        let codomain = self.codomain.resolve(dir)?;
        Ok(SpaceMap::from_label_pairs(domain, codomain, &self.assignment)?)
    }

    pub fn from_map(map: &SpaceMap) -> MapDoc {
        MapDoc {
            domain: SpaceRef::Inline(SpaceDoc::from_space(map.domain())),
            codomain: SpaceRef::Inline(SpaceDoc::from_space(map.codomain())),
            assignment: map.label_pairs(),
        }
    }
}

/// A map inside a span document: a path to a `MapDoc` file or an inline
/// label table (the endpoints are implied by the span slots).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Path(String),
    Assignment(BTreeMap<String, String>),
}

impl MapSpec {
    fn realize(
        &self,
        dir: &Path,
        domain: &Space,
        codomain: &Space,
        role: &str,
    ) -> Result<SpaceMap, DocError> {
        match self {
            MapSpec::Assignment(table) => {
                Ok(SpaceMap::from_label_pairs(domain.clone(), codomain.clone(), table)?)
            }
            MapSpec::Path(p) => {
                let map = read_json::<MapDoc>(&dir.join(p))?.build(dir)?;
                if map.domain() != domain {
                    return Err(DocError::Incompatible(format!(
                        "map `{role}` has a different domain than the span slot"
                    )));
                }
                if map.codomain() != codomain {
                    return Err(DocError::Incompatible(format!(
                        "map `{role}` has a different codomain than the span slot"
                    )));
                }
                Ok(map)
            }
        }
    }
}

/// A span `Y ←f– A –i→ X` on the wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanDoc {
    #[serde(rename = "A")]
    pub a: SpaceRef,
    #[serde(rename = "X")]
    pub x: SpaceRef,
    #[serde(rename = "Y")]
    pub y: SpaceRef,
    pub f: MapSpec,
    pub i: MapSpec,
}

impl SpanDoc {
    pub fn build(&self, dir: &Path) -> Result<Span, DocError> {
        let a = self.a.resolve(dir)?;
        let x = self.x.resolve(dir)?;
        let y = self.y.resolve(dir)?;
        let f = self.f.realize(dir, &a, &y, "f")?;
        let i = self.i.realize(dir, &a, &x, "i")?;
        Ok(Span::new(f, i)?)
    }

    pub fn from_span(span: &Span) -> SpanDoc {
        SpanDoc {
            a: SpaceRef::Inline(SpaceDoc::from_space(span.apex())),
            x: SpaceRef::Inline(SpaceDoc::from_space(span.x())),
            y: SpaceRef::Inline(SpaceDoc::from_space(span.y())),
            f: MapSpec::Assignment(span.f().label_pairs()),
            i: MapSpec::Assignment(span.i().label_pairs()),
        }
    }
}

/// One batch of cells onto a base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachDoc {
    pub base: SpaceRef,
    #[serde(flatten)]
    pub stage: StageSpec,
}

impl AttachDoc {
    pub fn build(&self, dir: &Path) -> Result<CwBuild, DocError> {
        Ok(build_cw(self.base.resolve(dir)?, std::slice::from_ref(&self.stage))?)
    }
}

/// A staged build plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CwDoc {
    pub base: SpaceRef,
    pub stages: Vec<StageSpec>,
}

impl CwDoc {
    pub fn build(&self, dir: &Path) -> Result<CwBuild, DocError> {
        Ok(build_cw(self.base.resolve(dir)?, &self.stages)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::DiskStyle;
    use crate::colimit::pushout;
    use std::collections::BTreeMap;

    fn n3() -> Space {
        Space::from_closure_lists(&[
            ("0", vec!["0", "1"]),
            ("1", vec!["1", "2"]),
            ("2", vec!["2"]),
        ])
        .unwrap()
    }

    #[test]
    fn space_documents_round_trip() {
        for space in [n3(), Space::empty(), Space::indiscrete(["a", "b"]).unwrap()] {
            let doc = SpaceDoc::from_space(&space);
            let text = serde_json::to_string(&doc).unwrap();
            let back: SpaceDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back.build().unwrap(), space);
        }
    }

    #[test]
    fn missing_closure_entries_default_to_the_point_alone() {
        let doc: SpaceDoc =
            serde_json::from_str(r#"{"points": ["a", "b"]}"#).unwrap();
        assert_eq!(doc.build().unwrap(), Space::discrete(["a", "b"]).unwrap());

        let doc: SpaceDoc = serde_json::from_str(
            r#"{"points": ["a", "b"], "closure": {"b": ["a", "b"]}}"#,
        )
        .unwrap();
        let expected =
            Space::from_closure_lists(&[("a", vec!["a"]), ("b", vec!["a", "b"])]).unwrap();
        assert_eq!(doc.build().unwrap(), expected);
    }

    #[test]
    fn validation_reports_every_problem() {
        let doc: SpaceDoc = serde_json::from_str(
            r#"{
                "points": ["a", "a", "b"],
                "closure": {"b": ["c"], "d": ["d"]}
            }"#,
        )
        .unwrap();
        let violations = doc.validate();
        assert!(violations.contains(&Violation::DuplicatePoint("a".to_string())));
        assert!(violations.contains(&Violation::ForeignPoint {
            owner: "b".to_string(),
            label: "c".to_string()
        }));
        assert!(violations.contains(&Violation::Extensivity("b".to_string())));
        assert!(violations.contains(&Violation::UnknownClosureKey("d".to_string())));
        assert!(matches!(doc.build(), Err(DocError::Invalid(_))));
    }

    #[test]
    fn oversized_documents_are_rejected() {
        let doc = SpaceDoc {
            points: (0..65).map(|k| k.to_string()).collect(),
            closure: BTreeMap::new(),
        };
        assert_eq!(doc.validate(), vec![Violation::TooManyPoints(65)]);
    }

    #[test]
    fn space_refs_parse_as_path_or_inline() {
        let path: SpaceRef = serde_json::from_str(r#""spaces/n3.json""#).unwrap();
        assert_eq!(path, SpaceRef::Path("spaces/n3.json".to_string()));
        let inline: SpaceRef =
            serde_json::from_str(r#"{"points": ["a"]}"#).unwrap();
        assert!(matches!(inline, SpaceRef::Inline(_)));
    }

    #[test]
    fn span_documents_build_and_round_trip() {
        let text = r#"{
            "A": {"points": ["1"]},
            "X": {"points": ["0", "1"], "closure": {"0": ["0", "1"], "1": ["0", "1"]}},
            "Y": {"points": ["1", "2"], "closure": {"1": ["1", "2"], "2": ["1", "2"]}},
            "f": {"1": "1"},
            "i": {"1": "1"}
        }"#;
        let doc: SpanDoc = serde_json::from_str(text).unwrap();
        let span = doc.build(Path::new(".")).unwrap();
        assert_eq!(span.x(), &Space::indiscrete(["0", "1"]).unwrap());
        let z = pushout(&span).unwrap().space;
        assert_eq!(z.point_count(), 3);

        let back = SpanDoc::from_span(&span).build(Path::new(".")).unwrap();
        assert_eq!(&back, &span);
    }

    #[test]
    fn cw_documents_build() {
        let text = r#"{
            "base": {"points": []},
            "stages": [
                {"dim": 0, "cells": [{}, {}]},
                {"dim": 1, "style": "cone", "cells": [{"p": "0:a", "q": "1:a"}]}
            ]
        }"#;
        let doc: CwDoc = serde_json::from_str(text).unwrap();
        assert_eq!(doc.stages[0].style, DiskStyle::Cone);
        let build = doc.build(Path::new(".")).unwrap();
        assert_eq!(build.final_space().point_count(), 3);
    }

    #[test]
    fn missing_files_surface_as_io_errors() {
        let missing = SpaceRef::Path("does-not-exist.json".to_string());
        assert!(matches!(
            missing.resolve(Path::new(".")),
            Err(DocError::Io { .. })
        ));
    }
}
