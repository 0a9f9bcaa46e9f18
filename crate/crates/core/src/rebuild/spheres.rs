//! Locating the two orthogonal spheres along the boundary level curves.

use nalgebra::Vector3;
use serde::Serialize;

use super::frame::FrameField;
use super::RebuildError;
use crate::curvelab::{certify_orthogonal_sphere, CurveOnSurface};
use crate::tolerances::{CONCENTRIC_TOL, UNIT_CURVATURE_TOL};

/// Outcome of certifying both boundary level curves.
#[derive(Debug, Clone, Serialize)]
pub struct SphereFinding {
    pub o1: [f64; 3],
    pub o2: [f64; 3],
    /// 1/|c| per boundary; both 1 by construction when |c| = 1 passes.
    pub radii: [f64; 2],
    pub orthogonality_residuals: [f64; 2],
    pub sphericity_residuals: [f64; 2],
    /// |geodesic curvature| - 1 per boundary.
    pub unit_curvature_defects: [f64; 2],
    pub separation: f64,
    pub concentric: bool,
}

impl SphereFinding {
    pub fn center1(&self) -> Vector3<f64> {
        Vector3::from_row_slice(&self.o1)
    }

    pub fn center2(&self) -> Vector3<f64> {
        Vector3::from_row_slice(&self.o2)
    }
}

fn boundary_curve(frame: &FrameField, row: usize) -> Result<CurveOnSurface, RebuildError> {
    let sh = frame.shape();
    let mut pts: Vec<Vector3<f64>> = (0..sh.n1).map(|j| frame.position(row, j)).collect();
    let mut nrm: Vec<Vector3<f64>> = (0..sh.n1)
        .map(|j| frame.normal[sh.idx(row, j)])
        .collect();
    let scale = pts.iter().map(|p| p.norm()).fold(0.0f64, f64::max).max(1.0);
    let defect = pts[sh.n1 - 1] - pts[0];
    let closed = defect.norm() < 1e-4 * scale;
    if closed {
        // the integration drift concentrates at the seam; a curvature
        // stencil would amplify the jump by 1/h², so spread it as a linear
        // ramp before treating the row as a closed curve
        let n = sh.n1 as f64;
        let n_defect = nrm[sh.n1 - 1] - nrm[0];
        for j in 0..sh.n1 {
            let w = j as f64 / (n - 1.0);
            pts[j] -= w * defect;
            nrm[j] = (nrm[j] - w * n_defect).normalize();
        }
    }
    let gamma = CurveOnSurface::from_samples(&pts, &nrm, closed, pts.len())?;
    let mean_kg =
        gamma.geodesic_curvature.iter().sum::<f64>() / gamma.geodesic_curvature.len() as f64;
    if mean_kg >= 0.0 {
        return Ok(gamma);
    }
    // traverse the other way so the certified constant is +|c|
    pts.reverse();
    nrm.reverse();
    Ok(CurveOnSurface::from_samples(&pts, &nrm, closed, pts.len())?)
}

/// Extract the level curves Im ξ = 0 and Im ξ = log R, check their
/// geodesic curvature is ±1, and certify the orthogonal unit spheres.
pub fn find_spheres(frame: &FrameField) -> Result<SphereFinding, RebuildError> {
    let sh = frame.shape();
    let mut centers = [Vector3::zeros(), Vector3::zeros()];
    let mut radii = [0.0f64; 2];
    let mut ortho = [0.0f64; 2];
    let mut spher = [0.0f64; 2];
    let mut defect = [0.0f64; 2];
    for (slot, row) in [(0usize, 0usize), (1, sh.n0 - 1)] {
        let gamma = boundary_curve(frame, row)?;
        let mean_kg =
            gamma.geodesic_curvature.iter().sum::<f64>() / gamma.geodesic_curvature.len() as f64;
        defect[slot] = (mean_kg.abs() - 1.0).abs();
        if defect[slot] > UNIT_CURVATURE_TOL {
            return Err(RebuildError::NotUnitCurvature(mean_kg));
        }
        let cert = certify_orthogonal_sphere(&gamma)?;
        let center = cert
            .center()
            .ok_or(crate::curvelab::CertifyError::InconsistentCenter)?;
        centers[slot] = center;
        radii[slot] = cert.radius;
        ortho[slot] = cert.orthogonality_residual;
        spher[slot] = cert.sphericity_residual;
    }
    let separation = (centers[0] - centers[1]).norm();
    Ok(SphereFinding {
        o1: [centers[0][0], centers[0][1], centers[0][2]],
        o2: [centers[1][0], centers[1][1], centers[1][2]],
        radii,
        orthogonality_residuals: ortho,
        sphericity_residuals: spher,
        unit_curvature_defects: defect,
        separation,
        concentric: separation < CONCENTRIC_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{Chart, SlabSpec};
    use crate::rebuild::frame::{frame_integrate, FrameSeed};

    #[test]
    fn catenoid_boundary_spheres_are_unit_and_concentric() {
        let cat = CriticalCatenoid::new();
        let spec = SlabSpec::new(cat.r_outer, 129, 257).unwrap();
        let vt = cat.symmetric_solution().evaluate_lift(&Chart::Slab(spec));
        let frame = frame_integrate(&vt, cat.c0, &FrameSeed::default()).unwrap();
        let finding = find_spheres(&frame).unwrap();
        assert!(finding.unit_curvature_defects[0] < 1e-4);
        assert!(finding.unit_curvature_defects[1] < 1e-4);
        assert!((finding.radii[0] - 1.0).abs() < 1e-4);
        assert!((finding.radii[1] - 1.0).abs() < 1e-4);
        assert!(
            finding.concentric,
            "separation {} should be concentric",
            finding.separation
        );
        assert!(finding.orthogonality_residuals[0] < 1e-4);
        assert!(finding.orthogonality_residuals[1] < 1e-4);
    }

    #[test]
    fn non_unit_geodesic_curvature_is_an_upstream_error() {
        // a synthetic frame from a scaled catenoid: boundary curvature ≠ 1
        let cat = CriticalCatenoid::new();
        let spec = SlabSpec::new(cat.r_outer, 65, 129).unwrap();
        let vt = cat.symmetric_solution().evaluate_lift(&Chart::Slab(spec));
        let mut frame = frame_integrate(&vt, cat.c0, &FrameSeed::default()).unwrap();
        for p in &mut frame.positions {
            *p *= 1.5;
        }
        assert!(matches!(
            find_spheres(&frame),
            Err(RebuildError::NotUnitCurvature(_))
        ));
    }
}
