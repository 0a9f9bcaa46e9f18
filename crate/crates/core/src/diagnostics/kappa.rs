//! Boundary geodesic curvature expressed through the Gauss map:
//! κ_g = (1/|c|)[(2/(1+|g|²))(1/|g_θ|) Im(g_θθ/g_θ - (2|g|²/(1+|g|²)) g_θ/g)]|g_θ|².
//!
//! The bracketed factor is independent of the boundary parametrization
//! (it equals λ²‖κ⃗‖ of the Gauss image); the trailing |g_θ|² is not, so
//! the product recovers the geodesic curvature in the conformal boundary
//! coordinate θ of the annulus.

use num_complex::Complex64;
use serde::Serialize;

use super::hopf::{compact_periodic_d1, compact_periodic_d2};
use super::DiagError;

#[derive(Debug, Clone, Serialize)]
pub struct KappaGReport {
    pub kappa_g: Vec<f64>,
    /// The parametrization-independent bracketed factor.
    pub bracket: Vec<f64>,
    pub g_theta_mod: Vec<f64>,
}

/// Evaluate the formula on a 2π-periodic uniformly sampled boundary trace
/// of the Gauss map. θ-derivatives use compact fourth-order periodic
/// differences.
pub fn remark42_kappa_g(g_boundary: &[Complex64], c: f64) -> Result<KappaGReport, DiagError> {
    let n = g_boundary.len();
    assert!(n >= 8, "need a sampled closed boundary");
    assert!(c != 0.0, "geodesic curvature constant must be nonzero");
    let h = std::f64::consts::TAU / n as f64;
    let g_t = compact_periodic_d1(g_boundary, h);
    let g_tt = compact_periodic_d2(g_boundary, h);
    let mut kappa_g = Vec::with_capacity(n);
    let mut bracket = Vec::with_capacity(n);
    let mut g_theta_mod = Vec::with_capacity(n);
    for k in 0..n {
        let g = g_boundary[k];
        if g.norm() < 1e-14 || g_t[k].norm() < 1e-14 {
            return Err(DiagError::FormulaSingularity(k));
        }
        let g2 = g.norm_sqr();
        let term = g_tt[k] / g_t[k] - (2.0 * g2 / (1.0 + g2)) * (g_t[k] / g);
        let br = 2.0 / (1.0 + g2) / g_t[k].norm() * term.im;
        bracket.push(br);
        g_theta_mod.push(g_t[k].norm());
        kappa_g.push(br * g_t[k].norm_sqr() / c.abs());
    }
    Ok(KappaGReport {
        kappa_g,
        bracket,
        g_theta_mod,
    })
}
