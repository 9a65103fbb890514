//! Sphere and disk models and cell attachment.
//!
//! Spheres are the minimal finite models: `S^0` is a discrete pair and each
//! higher sphere adds two points whose closures cover everything below, so
//! `S^n` has `2(n+1)` points. A disk over a sphere comes in two styles: a
//! cone adds a single apex closing to the whole space, and a cylinder is
//! the product with the three-point interval, glued along one end. Cells
//! are attached by pushing the disk out along its boundary inclusion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colimit::{coproduct, pushout_along_closed_inclusion, ColimitError, Provenance, Span};
use crate::limit::{pair_label, product, LimitError};
use crate::map::{MapError, SpaceMap};
use crate::set::PointSet;
use crate::space::{PointId, Space, SpaceError};

/// Largest sphere dimension the models support; cells can go one higher.
pub const SPHERE_DIM_BOUND: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error("no sphere model for dimension {0}")]
    DimensionTooLarge(usize),
    #[error("boundary and attaching map have different domains")]
    MismatchedBoundary,
    #[error("boundary map is not a closed subspace inclusion")]
    BoundaryNotClosedInclusion,
    #[error("attaching map is not continuous")]
    AttachingNotContinuous,
    #[error("attaching map does not land in the base space")]
    WrongBase,
    #[error("unknown disk style `{0}`, expected `cone` or `cylinder`")]
    UnknownStyle(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
}

impl From<LimitError> for CellError {
    fn from(e: LimitError) -> CellError {
        match e {
            LimitError::Space(e) => CellError::Space(e),
            LimitError::Map(e) => CellError::Map(e),
            LimitError::NotParallel => unreachable!("products do not raise parallelism errors"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskStyle {
    #[default]
    Cone,
    Cylinder,
}

impl fmt::Display for DiskStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiskStyle::Cone => "cone",
            DiskStyle::Cylinder => "cylinder",
        })
    }
}

impl FromStr for DiskStyle {
    type Err = CellError;

    fn from_str(s: &str) -> Result<DiskStyle, CellError> {
        match s {
            "cone" => Ok(DiskStyle::Cone),
            "cylinder" => Ok(DiskStyle::Cylinder),
            other => Err(CellError::UnknownStyle(other.to_string())),
        }
    }
}

/// The minimal sphere of the given dimension: points `p`, `q` and pairs
/// `m1, m2`, `m3, m4`, .. one pair per dimension, each new point closing to
/// itself and everything of lower level.
pub fn sphere_model(dim: usize) -> Result<Space, CellError> {
    if dim > SPHERE_DIM_BOUND {
        return Err(CellError::DimensionTooLarge(dim));
    }
    let mut entries: Vec<(String, Vec<String>)> = vec![
        ("p".to_string(), vec!["p".to_string()]),
        ("q".to_string(), vec!["q".to_string()]),
    ];
    for level in 1..=dim {
        let below: Vec<String> = entries.iter().map(|(label, _)| label.clone()).collect();
        for m in [2 * level - 1, 2 * level] {
            let label = format!("m{m}");
            let mut closure = below.clone();
            closure.push(label.clone());
            entries.push((label, closure));
        }
    }
    Ok(Space::from_closure_lists(&entries)?)
}

/// The boundary sphere of a cell of the given dimension; a 0-cell has an
/// empty boundary.
pub fn boundary_sphere(dim: usize) -> Result<Space, CellError> {
    if dim == 0 {
        Ok(Space::empty())
    } else {
        sphere_model(dim - 1)
    }
}

/// Three points `p`, `m`, `q` where `m` closes to everything: the
/// interval object the cylinder disk is built from.
pub fn pseudo_interval() -> Space {
    Space::from_closure_lists(&[
        ("p", vec!["p"]),
        ("m", vec!["m", "p", "q"]),
        ("q", vec!["q"]),
    ])
    .expect("interval model is well formed")
}

fn fresh_label(taken: &[String], want: &str) -> String {
    if !taken.iter().any(|l| l == want) {
        return want.to_string();
    }
    (0..)
        .map(|k| format!("{want}{k}"))
        .find(|candidate| !taken.iter().any(|l| l == candidate))
        .expect("the naturals do not run out")
}

/// A disk over the given sphere, with the boundary inclusion. Cones add an
/// apex (labeled `a`, or `a0`, `a1`, .. if taken) whose closure is the
/// whole disk. Cylinders are `sphere × interval` glued along the `p` end;
/// note the cylinder over the empty sphere is empty.
pub fn disk_model(sphere: &Space, style: DiskStyle) -> Result<(Space, SpaceMap), CellError> {
    match style {
        DiskStyle::Cone => {
            let apex = fresh_label(sphere.labels(), "a");
            let mut entries: Vec<(String, Vec<String>)> = sphere
                .points()
                .map(|p| {
                    let closure =
                        sphere.labels_of(sphere.singleton_closure(p));
                    (
                        sphere.label(p).to_string(),
                        closure.into_iter().map(str::to_string).collect(),
                    )
                })
                .collect();
            let everything: Vec<String> =
                sphere.labels().iter().cloned().chain([apex.clone()]).collect();
            entries.push((apex.clone(), everything));
            let disk = Space::from_closure_lists(&entries)?;
            let assignment = sphere
                .labels()
                .iter()
                .map(|l| disk.require_point(l))
                .collect::<Result<_, _>>()?;
            let boundary = SpaceMap::new(sphere.clone(), disk, assignment)?;
            Ok((boundary.codomain().clone(), boundary))
        }
        DiskStyle::Cylinder => {
            let (disk, _, _) = product(sphere, &pseudo_interval())?;
            let assignment = sphere
                .points()
                .map(|p| disk.require_point(&pair_label(sphere.label(p), "p")))
                .collect::<Result<_, _>>()?;
            let boundary = SpaceMap::new(sphere.clone(), disk, assignment)?;
            Ok((boundary.codomain().clone(), boundary))
        }
    }
}

/// A single cell: a boundary inclusion `S → D` and an attaching map
/// `S → base` out of the same sphere.
#[derive(Debug, Clone)]
pub struct Cell {
    dim: usize,
    boundary: SpaceMap,
    attaching: SpaceMap,
}

impl Cell {
    pub fn new(dim: usize, boundary: SpaceMap, attaching: SpaceMap) -> Result<Cell, CellError> {
        if boundary.domain() != attaching.domain() {
            return Err(CellError::MismatchedBoundary);
        }
        if !boundary.is_subspace_embedding()
            || !boundary.codomain().is_closed(boundary.image())
        {
            return Err(CellError::BoundaryNotClosedInclusion);
        }
        if !attaching.is_continuous() {
            return Err(CellError::AttachingNotContinuous);
        }
        Ok(Cell { dim, boundary, attaching })
    }

    /// A cell with the standard sphere and disk models for its dimension.
    pub fn standard(
        dim: usize,
        style: DiskStyle,
        attaching: SpaceMap,
    ) -> Result<Cell, CellError> {
        let sphere = boundary_sphere(dim)?;
        if attaching.domain() != &sphere {
            return Err(CellError::MismatchedBoundary);
        }
        let (_, boundary) = disk_model(&sphere, style)?;
        Cell::new(dim, boundary, attaching)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sphere(&self) -> &Space {
        self.boundary.domain()
    }

    pub fn disk(&self) -> &Space {
        self.boundary.codomain()
    }

    pub fn boundary(&self) -> &SpaceMap {
        &self.boundary
    }

    pub fn attaching(&self) -> &SpaceMap {
        &self.attaching
    }
}

/// A batch of cells to be glued onto a common base in one pushout.
#[derive(Debug, Clone)]
pub struct CellAttachment {
    base: Space,
    cells: Vec<Cell>,
}

/// The glued space with its structure maps.
#[derive(Debug, Clone)]
pub struct Attached {
    pub space: Space,
    /// The base sits inside the result as a closed subspace.
    pub base_inclusion: SpaceMap,
    /// One disk map per cell, in input order.
    pub characteristic: Vec<SpaceMap>,
    pub provenance: Provenance,
}

impl CellAttachment {
    pub fn new(base: Space, cells: Vec<Cell>) -> Result<CellAttachment, CellError> {
        if cells.iter().any(|cell| cell.attaching.codomain() != &base) {
            return Err(CellError::WrongBase);
        }
        Ok(CellAttachment { base, cells })
    }

    pub fn base(&self) -> &Space {
        &self.base
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn assemble_span(&self) -> Result<(Span, Vec<SpaceMap>), CellError> {
        let spheres: Vec<Space> = self.cells.iter().map(|c| c.sphere().clone()).collect();
        let disks: Vec<Space> = self.cells.iter().map(|c| c.disk().clone()).collect();
        let (sphere_sum, sphere_in) = coproduct(&spheres)?;
        let (disk_sum, disk_in) = coproduct(&disks)?;
        let mut i_assignment = vec![PointId(0); sphere_sum.point_count()];
        let mut f_assignment = vec![PointId(0); sphere_sum.point_count()];
        for (k, cell) in self.cells.iter().enumerate() {
            for s in cell.sphere().points() {
                let src = sphere_in[k].apply(s);
                i_assignment[src.0] = disk_in[k].apply(cell.boundary.apply(s));
                f_assignment[src.0] = cell.attaching.apply(s);
            }
        }
        let i = SpaceMap::new(sphere_sum.clone(), disk_sum, i_assignment)?;
        let f = SpaceMap::new(sphere_sum, self.base.clone(), f_assignment)?;
        Ok((Span::new(f, i)?, disk_in))
    }

    /// The span whose pushout performs the attachment: the summed boundary
    /// inclusion against the summed attaching map.
    pub fn span(&self) -> Result<Span, CellError> {
        Ok(self.assemble_span()?.0)
    }

    pub fn attach(&self) -> Result<Attached, CellError> {
        let (span, disk_in) = self.assemble_span()?;
        let result = pushout_along_closed_inclusion(&span)?;
        let characteristic = disk_in
            .iter()
            .map(|inj| inj.then(&result.g))
            .collect::<Result<_, _>>()?;
        Ok(Attached {
            space: result.space,
            base_inclusion: result.j,
            characteristic,
            provenance: result.provenance,
        })
    }
}

/// One build stage: some cells of a single dimension and style, given as
/// label tables from the standard sphere into the space built so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpec {
    pub dim: usize,
    #[serde(default)]
    pub style: DiskStyle,
    pub cells: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone)]
pub struct CwStage {
    pub attachment: CellAttachment,
    pub space: Space,
    /// Previous stage's space included in this one.
    pub inclusion: SpaceMap,
    pub characteristic: Vec<SpaceMap>,
}

#[derive(Debug, Clone)]
pub struct CwBuild {
    pub base: Space,
    pub stages: Vec<CwStage>,
}

impl CwBuild {
    pub fn final_space(&self) -> &Space {
        self.stages.last().map(|s| &s.space).unwrap_or(&self.base)
    }

    /// The base included in the final space, through every stage.
    pub fn base_inclusion(&self) -> Result<SpaceMap, MapError> {
        let mut inclusion = SpaceMap::identity(&self.base);
        for stage in &self.stages {
            inclusion = inclusion.then(&stage.inclusion)?;
        }
        Ok(inclusion)
    }
}

/// Runs the stages in order, each one a batch attachment onto the previous
/// result. A 0-cell in cylinder style would attach nothing (the cylinder
/// over the empty sphere is empty), so dimension 0 always uses cones.
pub fn build_cw(base: Space, stages: &[StageSpec]) -> Result<CwBuild, CellError> {
    let mut build = CwBuild { base, stages: Vec::with_capacity(stages.len()) };
    for spec in stages {
        let current = build.final_space().clone();
        let style = if spec.dim == 0 { DiskStyle::Cone } else { spec.style };
        let sphere = boundary_sphere(spec.dim)?;
        let cells = spec
            .cells
            .iter()
            .map(|table| {
                let attaching =
                    SpaceMap::from_label_pairs(sphere.clone(), current.clone(), table)?;
                Cell::standard(spec.dim, style, attaching)
            })
            .collect::<Result<Vec<_>, CellError>>()?;
        let attachment = CellAttachment::new(current, cells)?;
        let attached = attachment.attach()?;
        build.stages.push(CwStage {
            attachment,
            space: attached.space,
            inclusion: attached.base_inclusion,
            characteristic: attached.characteristic,
        });
    }
    Ok(build)
}

/// True when every singleton of `subset` has a closed singleton closure;
/// used by generators that need somewhere closed to send things.
pub fn closed_points(space: &Space) -> PointSet {
    space
        .points()
        .filter(|&p| space.singleton_closure(p) == PointSet::singleton(p.0))
        .map(|p| p.0)
        .collect()
}
