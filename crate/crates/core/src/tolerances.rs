//! Central tolerance registry.
//!
//! Every threshold used by the library is defined here and serialized into
//! run manifests, so a report always records the exact gates it was judged
//! against.

use serde::{Deserialize, Serialize};

/// Newton acceptance: max-norm residual of the discretized system.
pub const NEWTON_TOL: f64 = 1e-10;
/// Newton iteration cap.
pub const NEWTON_MAX_ITER: usize = 50;
/// Damping factor floor (halving stops here).
pub const NEWTON_DAMPING_FLOOR: f64 = 9.5367431640625e-7; // 2^-20
/// e^v overflow guard: reject iterates with v above this.
pub const EXP_OVERFLOW_CAP: f64 = 700.0;
/// Linear solver relative residual target inside a Newton step.
pub const LINEAR_TOL: f64 = 1e-13;

/// |g| above this counts as a pole node of the Gauss map.
pub const POLE_THRESHOLD: f64 = 1e8;
/// |ω̂| below this counts as a zero of the one-form.
pub const ZERO_THRESHOLD: f64 = 1e-8;

/// Relative max-deviation allowed when testing constancy along a curve.
pub const CONSTANCY_REL_TOL: f64 = 1e-4;
/// Curvature floor (scaled by inverse curve length) below which torsion is
/// reported as zero.
pub const KAPPA_FLOOR: f64 = 1e-8;
/// Torsion floor as a fraction of max |κ|; below it a node joins the
/// planar branch.
pub const TAU_FLOOR_REL: f64 = 1e-6;
/// Fraction of nodes allowed below the normal-curvature floor
/// ("vanishes only at finitely many points" made testable).
pub const FLAT_NODE_FRACTION: f64 = 0.05;
/// Normal-curvature floor as a fraction of its max.
pub const NORMAL_CURVATURE_FLOOR_REL: f64 = 1e-6;
/// Curvature-line residual gate for the certifier.
pub const CURVATURE_LINE_TOL: f64 = 1e-3;
/// Per-piece sphere centers must agree to this (relative to the radius).
pub const CENTER_MERGE_REL_TOL: f64 = 1e-3;
/// Tie band for the center-sign disambiguation: variance ratios within
/// 10% of each other are ambiguous.
pub const CENTER_SIGN_TIE_RATIO: f64 = 0.1;

/// Compatibility (Gauss equation) residual gate before frame integration,
/// relative to the source-term scale.
pub const COMPAT_REL_TOL: f64 = 1e-2;
/// |geodesic curvature| − 1 gate when locating the boundary spheres.
pub const UNIT_CURVATURE_TOL: f64 = 1e-3;
/// Two sphere centers closer than this count as concentric.
pub const CONCENTRIC_TOL: f64 = 1e-4;
/// Piece-count cap for the decomposition classifier.
pub const DECOMP_N_MAX: usize = 64;
/// |angle·N − 2πk| acceptance for the rational-angle classifier.
pub const DECOMP_ANGLE_TOL: f64 = 1e-6;
/// RMS gate for T-equivariance of the decomposition.
pub const DECOMP_RMS_TOL: f64 = 1e-5;

/// Winding integrals must round to an integer within this defect.
pub const WINDING_DEFECT_MAX: f64 = 0.1;
/// Minimum |g'| on the closure for the injectivity report.
pub const GZ_MIN_THRESHOLD: f64 = 1e-8;
/// Relative floor: min |g'| below this fraction of max |g'| also counts
/// as a vanishing derivative on sampled data.
pub const GZ_MIN_REL: f64 = 1e-6;
/// Test points closer than this many polyline segment lengths to an image
/// curve are excluded from the winding grid.
pub const WINDING_EXCLUSION_SEGMENTS: f64 = 2.0;
/// Injectivity test-point grid resolution per axis.
pub const INJECTIVITY_GRID: usize = 64;

/// Serializable snapshot of every tolerance above; embedded in run
/// manifests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub newton_damping_floor: f64,
    pub exp_overflow_cap: f64,
    pub linear_tol: f64,
    pub pole_threshold: f64,
    pub zero_threshold: f64,
    pub constancy_rel_tol: f64,
    pub kappa_floor: f64,
    pub tau_floor_rel: f64,
    pub flat_node_fraction: f64,
    pub normal_curvature_floor_rel: f64,
    pub curvature_line_tol: f64,
    pub center_merge_rel_tol: f64,
    pub center_sign_tie_ratio: f64,
    pub compat_rel_tol: f64,
    pub unit_curvature_tol: f64,
    pub concentric_tol: f64,
    pub decomp_n_max: usize,
    pub decomp_angle_tol: f64,
    pub decomp_rms_tol: f64,
    pub winding_defect_max: f64,
    pub gz_min_threshold: f64,
    pub gz_min_rel: f64,
    pub winding_exclusion_segments: f64,
    pub injectivity_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            newton_tol: NEWTON_TOL,
            newton_max_iter: NEWTON_MAX_ITER,
            newton_damping_floor: NEWTON_DAMPING_FLOOR,
            exp_overflow_cap: EXP_OVERFLOW_CAP,
            linear_tol: LINEAR_TOL,
            pole_threshold: POLE_THRESHOLD,
            zero_threshold: ZERO_THRESHOLD,
            constancy_rel_tol: CONSTANCY_REL_TOL,
            kappa_floor: KAPPA_FLOOR,
            tau_floor_rel: TAU_FLOOR_REL,
            flat_node_fraction: FLAT_NODE_FRACTION,
            normal_curvature_floor_rel: NORMAL_CURVATURE_FLOOR_REL,
            curvature_line_tol: CURVATURE_LINE_TOL,
            center_merge_rel_tol: CENTER_MERGE_REL_TOL,
            center_sign_tie_ratio: CENTER_SIGN_TIE_RATIO,
            compat_rel_tol: COMPAT_REL_TOL,
            unit_curvature_tol: UNIT_CURVATURE_TOL,
            concentric_tol: CONCENTRIC_TOL,
            decomp_n_max: DECOMP_N_MAX,
            decomp_angle_tol: DECOMP_ANGLE_TOL,
            decomp_rms_tol: DECOMP_RMS_TOL,
            winding_defect_max: WINDING_DEFECT_MAX,
            gz_min_threshold: GZ_MIN_THRESHOLD,
            gz_min_rel: GZ_MIN_REL,
            winding_exclusion_segments: WINDING_EXCLUSION_SEGMENTS,
            injectivity_grid: INJECTIVITY_GRID,
        }
    }
}
