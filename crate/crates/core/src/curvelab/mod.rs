//! Frenet analysis of space curves, the spherical-curve criterion, and the
//! certifier that produces orthogonal spheres from intrinsic curve data.

mod certify;
mod criterion;
mod curve;
mod surface;

pub use certify::{
    certify_orthogonal_sphere, CertBranch, CertGeometry, SphereCertificate,
};
pub use criterion::{
    spherical_criterion, sphere_normal_field, CriterionReport, SphereNormalField,
    SphericalVerdict,
};
pub use curve::{frenet_analyze, frenet_analyze_resampled, SpaceCurve};
pub use surface::{curve_on_surface, CurveOnSurface};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("need at least 8 points, got {0}")]
    TooFewPoints(usize),
    #[error("consecutive points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("chart path leaves the host chart at point {0}")]
    OutsideChart(usize),
    #[error("host patch is not conformal (residual {0:.3e})")]
    NotConformal(f64),
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("curve is not a line of curvature (residual {0:.3e})")]
    NotACurvatureLine(f64),
    #[error("geodesic curvature is not constant (relative deviation {0:.3e})")]
    NonConstantGeodesicCurvature(f64),
    #[error("normal curvature vanishes at {0:.1}% of nodes")]
    TooManyFlatPoints(f64),
    #[error("no consistent sphere center for either orientation sign")]
    InconsistentCenter,
    #[error("curve piece too short to certify ({0} nodes)")]
    PieceTooShort(usize),
    #[error("curve: {0}")]
    Curve(#[from] CurveError),
}
