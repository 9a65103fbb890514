//! Finite closure spaces: carriers with an additive closure operator that
//! need not be idempotent, together with the maps, colimits, and cell
//! attachments that make them a place to do combinatorial topology, and a
//! harness for checking when glueing stays inside topological spaces.
//!
//! The core types are [`Space`] (a labeled carrier with per-point closure
//! sets) and [`SpaceMap`]. Glueing lives in [`colimit`], products in
//! [`limit`], sphere and disk models in [`cell`]. The [`top_oracle`] module
//! recomputes pushouts entirely inside topological spaces by subset
//! enumeration, independently of the glueing code, and [`verify`] checks
//! the two against each other, gates theorem hypotheses, and mines
//! counterexample certificates. [`doc`] is the JSON layer, [`enumerate`]
//! sweeps all small spaces, and [`gen`] draws random ones.

pub mod cell;
pub mod colimit;
pub mod doc;
pub mod enumerate;
pub mod gen;
pub mod limit;
pub mod map;
pub mod set;
pub mod space;
pub mod top_oracle;
pub mod verify;

pub use cell::{
    boundary_sphere, build_cw, disk_model, pseudo_interval, sphere_model, Cell, CellAttachment,
    CellError, CwBuild, DiskStyle, StageSpec,
};
pub use colimit::{
    coequalizer, coproduct, pushout, pushout_along_closed_inclusion, ColimitError, Provenance,
    PushoutResult, Span,
};
pub use limit::{equalizer, product, LimitError};
pub use map::{
    closed_inclusion_conditions, map_closed_inclusion_conditions, subspace,
    ClosedInclusionConditions, MapError, SpaceMap,
};
pub use set::{PointSet, MAX_POINTS};
pub use space::{PointId, Space, SpaceError};
pub use top_oracle::{top_pushout, TopOracleError, ORACLE_CARRIER_LIMIT};
pub use verify::{
    check_prop1, check_theorem_main, condition_b, mine_certificates, verify_universal_property,
    Certificate, CertificateKind, MainReport, MiningBounds, MiningOutcome, Prop1Report,
    VerifyError,
};
