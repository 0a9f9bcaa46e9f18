//! Reconstruction of the minimal immersion from a Liouville solution:
//! frame integration of the Gauss–Weingarten system on the slab, boundary
//! sphere location, fundamental-piece decomposition, and the flux/torque
//! identities of the fundamental piece.

mod decompose;
mod flux;
mod frame;
mod spheres;

pub use decompose::{decompose, decompose_with_tol, fundamental_piece, synthetic_rotated_frame, DecompClass, FundamentalDecomposition};
pub use flux::{flux_and_torque, EdgeReport, FluxReport};
pub use frame::{compatibility_residual, frame_integrate, frame_integrate_with, verify_condition_1, FrameField, FrameSeed, MarchOrder};
pub use spheres::{find_spheres, SphereFinding};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RebuildError {
    #[error("C0 = 0 is the flat degenerate case; rejected")]
    DegenerateC0,
    #[error(
        "field does not satisfy the slab Liouville equation (relative compatibility residual {0:.3e})"
    )]
    Incompatible(f64),
    #[error("metric degenerates (|ṽ| exceeds the overflow cap)")]
    MetricDegenerate,
    #[error("boundary geodesic curvature is {0:.6}, not ±1; upstream inconsistency")]
    NotUnitCurvature(f64),
    #[error("piece map is not a pure rotation (axial translation {0:.3e})")]
    ScrewMotion(f64),
    #[error("rotation angle has no rational multiple of 2π within resolution (angle {0:.6})")]
    NonClosing(f64),
    #[error("fundamental piece needs at least 2 copies, got {0}")]
    TooFewCopies(usize),
    #[error("certifier: {0}")]
    Certify(#[from] crate::curvelab::CertifyError),
    #[error("curve: {0}")]
    Curve(#[from] crate::curvelab::CurveError),
    #[error("geometry: {0}")]
    Geom(#[from] crate::geomkit::GeomError),
}
