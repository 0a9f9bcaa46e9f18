//! The spherical space-curve criterion and the sphere normal field.
//!
//! A curve with τ ≠ 0 and κ' ≠ 0 lies on a sphere of radius R exactly when
//! (1/κ)² + ((1/κ)')²(1/τ)² ≡ R², and the sphere's unit normal along the
//! curve is -(1/(Rκ))n + (κ'/(Rκ²τ))b.

use nalgebra::Vector3;

use super::curve::SpaceCurve;
use super::CertifyError;
use crate::tolerances::{CENTER_SIGN_TIE_RATIO, CONSTANCY_REL_TOL, KAPPA_FLOOR, TAU_FLOOR_REL};

#[derive(Debug, Clone, PartialEq)]
pub enum SphericalVerdict {
    /// Criterion constant on the generic-torsion nodes.
    Spherical { radius: f64 },
    /// τ ≡ 0 with constant curvature: a planar circle.
    PlanarCircle { radius: f64 },
    NotSpherical,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// Per-node criterion value; `None` where the node is routed to the
    /// planar branch (τ below floor) or κ is floored.
    pub values: Vec<Option<f64>>,
    pub verdict: SphericalVerdict,
    /// Relative spread of the criterion over the generic nodes.
    pub spread: f64,
    pub tau_floor: f64,
}

/// Torsion floor used to split generic vs planar nodes.
pub fn tau_floor_for(curve: &SpaceCurve) -> f64 {
    let kmax = curve.kappa.iter().fold(0.0f64, |a, &b| a.max(b));
    TAU_FLOOR_REL * kmax.max(1e-300)
}

/// Evaluate (1/κ)² + ((1/κ)')²(1/τ)² per node and judge constancy.
pub fn spherical_criterion(curve: &SpaceCurve) -> CriterionReport {
    let n = curve.len();
    let kappa_floor = KAPPA_FLOOR / curve.total_length();
    let tau_floor = tau_floor_for(curve);
    let mut values: Vec<Option<f64>> = vec![None; n];
    let mut generic: Vec<f64> = Vec::new();
    for i in 0..n {
        let (k, t) = (curve.kappa[i], curve.tau[i]);
        if k > kappa_floor && t.abs() > tau_floor {
            // (1/κ)' = -κ'/κ²
            let inv_k = 1.0 / k;
            let d_inv_k = -curve.kappa_prime[i] / (k * k);
            let val = inv_k * inv_k + d_inv_k * d_inv_k / (t * t);
            values[i] = Some(val);
            generic.push(val);
        }
    }
    if generic.is_empty() {
        // planar branch: a circle iff κ is constant
        let ks: Vec<f64> = curve.kappa.clone();
        let mean = ks.iter().sum::<f64>() / n as f64;
        let dev = ks
            .iter()
            .map(|k| (k - mean).abs())
            .fold(0.0f64, f64::max);
        if mean > kappa_floor && dev / mean < CONSTANCY_REL_TOL {
            return CriterionReport {
                values,
                verdict: SphericalVerdict::PlanarCircle { radius: 1.0 / mean },
                spread: dev / mean,
                tau_floor,
            };
        }
        return CriterionReport {
            values,
            verdict: SphericalVerdict::NotSpherical,
            spread: f64::NAN,
            tau_floor,
        };
    }
    let mean = generic.iter().sum::<f64>() / generic.len() as f64;
    let dev = generic
        .iter()
        .map(|v| (v - mean).abs())
        .fold(0.0f64, f64::max);
    let spread = dev / mean.abs().max(1e-300);
    let verdict = if mean > 0.0 && spread < CONSTANCY_REL_TOL {
        SphericalVerdict::Spherical {
            radius: mean.sqrt(),
        }
    } else {
        SphericalVerdict::NotSpherical
    };
    CriterionReport {
        values,
        verdict,
        spread,
        tau_floor,
    }
}

#[derive(Debug, Clone)]
pub struct SphereNormalField {
    /// Per-node unit sphere normal (generic nodes only).
    pub normals: Vec<Option<Vector3<f64>>>,
    /// Consistent center implied by X ± R·normal.
    pub center: Vector3<f64>,
    /// Weighted RMS spread of the per-node center estimates.
    pub center_spread: f64,
    /// Chosen orientation sign.
    pub sign: f64,
}

/// Per-node sphere normal -(1/(Rκ))n + (κ'/(Rκ²τ))b with the center sign
/// resolved by the smaller variance of the implied centers; a tie within
/// 10% is reported as inconsistent.
///
/// Center estimates are weighted by τ² so that nodes near torsion zeros,
/// where the b-term is a 0/0 limit, do not dominate the estimate.
pub fn sphere_normal_field(
    curve: &SpaceCurve,
    radius: f64,
) -> Result<SphereNormalField, CertifyError> {
    sphere_normal_field_on(curve, radius, &(0..curve.len()).collect::<Vec<_>>())
}

/// Same, restricted to a node subset (used per analytic piece).
pub fn sphere_normal_field_on(
    curve: &SpaceCurve,
    radius: f64,
    nodes: &[usize],
) -> Result<SphereNormalField, CertifyError> {
    let kappa_floor = KAPPA_FLOOR / curve.total_length();
    let tau_floor = tau_floor_for(curve);
    let tau_max = nodes
        .iter()
        .map(|&i| curve.tau[i].abs())
        .fold(0.0f64, f64::max);
    let mut normals: Vec<Option<Vector3<f64>>> = vec![None; curve.len()];
    let mut ests: Vec<(usize, Vector3<f64>, f64)> = Vec::new(); // (node, normal, weight)
    for &i in nodes {
        let (k, t) = (curve.kappa[i], curve.tau[i]);
        if k <= kappa_floor || t.abs() <= tau_floor.max(0.05 * tau_max) {
            continue;
        }
        let m = -1.0 / (radius * k) * curve.normal[i]
            + curve.kappa_prime[i] / (radius * k * k * t) * curve.binormal[i];
        let m = m.normalize();
        normals[i] = Some(m);
        ests.push((i, m, t * t));
    }
    if ests.len() < 3 {
        return Err(CertifyError::PieceTooShort(ests.len()));
    }
    let center_stats = |sign: f64| -> (Vector3<f64>, f64) {
        let mut wsum = 0.0;
        let mut mean = Vector3::zeros();
        for (i, m, w) in &ests {
            mean += (curve.samples[*i] + sign * radius * m) * *w;
            wsum += w;
        }
        mean /= wsum;
        let mut var = 0.0;
        for (i, m, w) in &ests {
            var += w * (curve.samples[*i] + sign * radius * m - mean).norm_squared();
        }
        (mean, (var / wsum).sqrt())
    };
    let (c_plus, s_plus) = center_stats(1.0);
    let (c_minus, s_minus) = center_stats(-1.0);
    let ratio = (s_plus - s_minus).abs() / s_plus.max(s_minus).max(1e-300);
    if ratio < CENTER_SIGN_TIE_RATIO {
        return Err(CertifyError::InconsistentCenter);
    }
    let (center, center_spread, sign) = if s_plus < s_minus {
        (c_plus, s_plus, 1.0)
    } else {
        (c_minus, s_minus, -1.0)
    };
    Ok(SphereNormalField {
        normals,
        center,
        center_spread,
        sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvelab::curve::{frenet_analyze, frenet_analyze_resampled};
    use std::f64::consts::TAU;

    pub(crate) fn lissajous_on_sphere(n: usize, offset: Vector3<f64>) -> Vec<Vector3<f64>> {
        (0..n)
            .map(|j| {
                let p = TAU * j as f64 / n as f64;
                let z = 0.6 * (2.0 * p).sin();
                let rho = (1.0 - z * z).sqrt();
                Vector3::new(rho * p.cos(), rho * p.sin(), z) + offset
            })
            .collect()
    }

    #[test]
    fn great_circle_routes_to_the_planar_branch() {
        let pts: Vec<Vector3<f64>> = (0..256)
            .map(|j| {
                let p = TAU * j as f64 / 256.0;
                Vector3::new(2.0 * p.cos(), 2.0 * p.sin(), 0.0)
            })
            .collect();
        let c = frenet_analyze(&pts, true).unwrap();
        let rep = spherical_criterion(&c);
        match rep.verdict {
            SphericalVerdict::PlanarCircle { radius } => {
                assert!((radius - 2.0).abs() < 1e-7, "radius {radius}");
            }
            ref v => panic!("expected planar circle, got {v:?}"),
        }
    }

    #[test]
    fn unit_sphere_lissajous_meets_the_criterion() {
        let pts = lissajous_on_sphere(16384, Vector3::zeros());
        let c = frenet_analyze_resampled(&pts, true, 2048).unwrap();
        let rep = spherical_criterion(&c);
        match rep.verdict {
            SphericalVerdict::Spherical { radius } => {
                assert!((radius - 1.0).abs() < 1e-5, "radius {radius}");
            }
            ref v => panic!("expected spherical, got {v:?} (spread {})", rep.spread),
        }
    }

    #[test]
    fn plane_ellipse_is_not_spherical() {
        let pts: Vec<Vector3<f64>> = (0..512)
            .map(|j| {
                let p = TAU * j as f64 / 512.0;
                Vector3::new(2.0 * p.cos(), 1.0 * p.sin(), -0.3)
            })
            .collect();
        let c = frenet_analyze(&pts, true).unwrap();
        let rep = spherical_criterion(&c);
        assert_eq!(rep.verdict, SphericalVerdict::NotSpherical);
    }

    #[test]
    fn center_recovery_on_and_off_origin() {
        let pts = lissajous_on_sphere(16384, Vector3::zeros());
        let c = frenet_analyze_resampled(&pts, true, 2048).unwrap();
        let f = sphere_normal_field(&c, 1.0).unwrap();
        assert!(f.center.norm() < 1e-6, "center {:?}", f.center);

        let shift = Vector3::new(1.0, 2.0, 3.0);
        let pts = lissajous_on_sphere(16384, shift);
        let c = frenet_analyze_resampled(&pts, true, 2048).unwrap();
        let f = sphere_normal_field(&c, 1.0).unwrap();
        assert!((f.center - shift).norm() < 1e-6, "center {:?}", f.center);
    }

    #[test]
    fn planar_circle_is_out_of_domain_for_the_normal_field() {
        let pts: Vec<Vector3<f64>> = (0..256)
            .map(|j| {
                let p = TAU * j as f64 / 256.0;
                Vector3::new(p.cos(), p.sin(), 0.0)
            })
            .collect();
        let c = frenet_analyze(&pts, true).unwrap();
        assert!(sphere_normal_field(&c, 1.0).is_err());
    }
}
