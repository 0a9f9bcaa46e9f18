//! Core grids, fields, differential operators, quadrature, and rigid
//! motions shared by every other module.

mod chart;
pub mod csv;
mod field;
mod motion;
pub mod quad;

pub use chart::{AnnulusSpec, Chart, GridShape, SlabSpec};
pub use field::{ComplexField, Field, RealField};
pub use motion::{fit_rigid_motion, RigidMotion};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("invalid grid specification: {0}")]
    InvalidSpec(String),
    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("matrix is not a proper rotation (orthogonality defect {0:.3e})")]
    NotARotation(f64),
    #[error("degenerate point cloud: {0}")]
    DegeneratePointCloud(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("io: {0}")]
    Io(String),
}
