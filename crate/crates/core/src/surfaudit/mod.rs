//! Surface patches, zebra (isophote) values and continuity audits of patch joints.

mod audit;
mod patch;

use thiserror::Error;

pub use audit::{
    audit_joint, zebra_value, AuditTolerances, BoundarySpec, Edge, JointAudit, Station, Verdict, DEFAULT_BANDS,
    DEFAULT_STATIONS,
};
pub use patch::{PatchJet, SurfacePatch};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("parameter ({u}, {v}) is outside the unit square")]
    OutOfDomain { u: f64, v: f64 },
    #[error("surface normal is degenerate at ({u}, {v})")]
    DegenerateNormal { u: f64, v: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
