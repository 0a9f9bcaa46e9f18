//! Curves traced on a host surface patch with the {N, t, ν} frame.

use nalgebra::Vector3;

use super::curve::{diff_vec, frenet_analyze_resampled, SpaceCurve};
use super::CurveError;
use crate::numerics::interp::sample_grid;
use crate::numerics::spline::CubicSpline;
use crate::numerics::FdOrder;
use crate::weierstrass::{conformality_residual, SurfacePatch};

/// A curve on a surface with the positively oriented frame {N, t, ν},
/// ν = N × t, and the intrinsic curvatures along it.
#[derive(Debug, Clone)]
pub struct CurveOnSurface {
    pub curve: SpaceCurve,
    /// Chart coordinates per resampled node (empty for synthetic hosts).
    pub chart_trace: Vec<(f64, f64)>,
    pub conormal: Vec<Vector3<f64>>,
    pub surface_normal: Vec<Vector3<f64>>,
    /// ⟨∇_t t, ν⟩ per node.
    pub geodesic_curvature: Vec<f64>,
    /// ⟨∇_t t, N⟩ per node.
    pub normal_curvature: Vec<f64>,
    /// ⟨∇_t N, ν⟩ per node; zero along lines of curvature.
    pub curvature_line_residual: Vec<f64>,
}

impl CurveOnSurface {
    /// Assemble the frame and curvature data from consistent samples of
    /// positions and surface normals along the curve. Positions must be
    /// (approximately) uniformly spaced in arclength; the Frenet pass
    /// re-samples internally and the normals are spline-resampled in step.
    pub fn from_samples(
        points: &[Vector3<f64>],
        normals: &[Vector3<f64>],
        closed: bool,
        n_out: usize,
    ) -> Result<Self, CurveError> {
        assert_eq!(points.len(), normals.len());
        let curve = frenet_analyze_resampled(points, closed, n_out)?;
        // resample the normals against the same chord parameter
        let mut pts = points.to_vec();
        let mut nrm = normals.to_vec();
        if closed {
            let scale = pts.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
            if (pts[0] - pts[pts.len() - 1]).norm() < 1e-12 * scale.max(1.0) {
                pts.pop();
                nrm.pop();
            }
        }
        let n_in = pts.len();
        let mut s = vec![0.0f64; n_in];
        for i in 1..n_in {
            s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
        }
        let total = if closed {
            s[n_in - 1] + (pts[0] - pts[n_in - 1]).norm()
        } else {
            s[n_in - 1]
        };
        let comp_spline = |k: usize| {
            let ys: Vec<f64> = nrm.iter().map(|p| p[k]).collect();
            if closed {
                CubicSpline::periodic(&s, &ys, total)
            } else {
                CubicSpline::natural(&s, &ys)
            }
        };
        let splines = [comp_spline(0), comp_spline(1), comp_spline(2)];
        let n = curve.len();
        let surface_normal: Vec<Vector3<f64>> = (0..n)
            .map(|j| {
                let sj = curve.arclength[j];
                Vector3::new(
                    splines[0].eval(sj),
                    splines[1].eval(sj),
                    splines[2].eval(sj),
                )
                .normalize()
            })
            .collect();
        Ok(Self::assemble(curve, Vec::new(), surface_normal))
    }

    fn assemble(
        curve: SpaceCurve,
        chart_trace: Vec<(f64, f64)>,
        surface_normal: Vec<Vector3<f64>>,
    ) -> Self {
        let n = curve.len();
        let h = curve.spacing;
        // ∇_t t and ∇_t N via arclength differences of the resampled data
        let d1 = diff_vec(&curve.samples, h, 1, FdOrder::Four, curve.closed);
        let d2 = diff_vec(&curve.samples, h, 2, FdOrder::Four, curve.closed);
        let dn = diff_vec(&surface_normal, h, 1, FdOrder::Four, curve.closed);
        let mut conormal = Vec::with_capacity(n);
        let mut geodesic = Vec::with_capacity(n);
        let mut normal_c = Vec::with_capacity(n);
        let mut clr = Vec::with_capacity(n);
        for i in 0..n {
            let speed = d1[i].norm();
            let t = d1[i] / speed;
            let nu = surface_normal[i].cross(&t);
            // acceleration with the tangential part projected out, per unit
            // arclength²: ∇_t t = (X'' - (X''·t)t)/|X'|²
            let acc = (d2[i] - d2[i].dot(&t) * t) / (speed * speed);
            conormal.push(nu);
            geodesic.push(acc.dot(&nu));
            normal_c.push(acc.dot(&surface_normal[i]));
            clr.push(dn[i].dot(&nu) / speed);
        }
        CurveOnSurface {
            curve,
            chart_trace,
            conormal,
            surface_normal,
            geodesic_curvature: geodesic,
            normal_curvature: normal_c,
            curvature_line_residual: clr,
        }
    }

    /// Contact angle θ between the {b, n} and {N, ν} normal-plane frames,
    /// from b = cos θ N + sin θ ν; unwrapped to a continuous branch.
    pub fn contact_angle(&self) -> Vec<f64> {
        let n = self.curve.len();
        let mut theta = Vec::with_capacity(n);
        let mut prev: Option<f64> = None;
        for i in 0..n {
            let b = self.curve.binormal[i];
            let mut th = b.dot(&self.conormal[i]).atan2(b.dot(&self.surface_normal[i]));
            if let Some(p) = prev {
                while th - p > std::f64::consts::PI {
                    th -= std::f64::consts::TAU;
                }
                while p - th > std::f64::consts::PI {
                    th += std::f64::consts::TAU;
                }
            }
            prev = Some(th);
            theta.push(th);
        }
        theta
    }
}

/// Trace a chart path on a host patch.
///
/// Path coordinates are chart values ((t, θ) on the annulus, (Im ξ, Re ξ)
/// on the slab); the angular coordinate may wind without wrapping. The
/// host must be conformal. Positions and normals are interpolated
/// bicubically, resampled by arclength, and assembled into the frame data.
pub fn curve_on_surface(
    host: &SurfacePatch,
    chart_path: &[(f64, f64)],
    closed: bool,
) -> Result<CurveOnSurface, CurveError> {
    let conf = conformality_residual(host);
    if conf > 0.05 {
        return Err(CurveError::NotConformal(conf));
    }
    let sh = host.shape();
    let grid_coords: Vec<(f64, f64)> = chart_path
        .iter()
        .enumerate()
        .map(|(k, &(x0, x1))| {
            let s0 = (x0 - sh.x0_min) / sh.h0;
            let mut s1 = (x1 - sh.x1_min) / sh.h1;
            if !(-1e-9..=(sh.n0 - 1) as f64 + 1e-9).contains(&s0) {
                return Err(CurveError::OutsideChart(k));
            }
            if sh.periodic1 {
                s1 = s1.rem_euclid(sh.n1 as f64);
            } else if !(-1e-9..=(sh.n1 - 1) as f64 + 1e-9).contains(&s1) {
                return Err(CurveError::OutsideChart(k));
            }
            Ok((s0, s1))
        })
        .collect::<Result<_, _>>()?;

    let mut nx = Vec::with_capacity(3);
    for k in 0..3 {
        nx.push(
            host.normals
                .iter()
                .map(|v| v[k])
                .collect::<Vec<f64>>(),
        );
    }
    let mut px = Vec::with_capacity(3);
    for k in 0..3 {
        px.push(
            host.positions
                .iter()
                .map(|v| v[k])
                .collect::<Vec<f64>>(),
        );
    }
    let sample3 = |fields: &[Vec<f64>], s0: f64, s1: f64| {
        Vector3::new(
            sample_grid(&fields[0], &sh, s0, s1),
            sample_grid(&fields[1], &sh, s0, s1),
            sample_grid(&fields[2], &sh, s0, s1),
        )
    };
    let points: Vec<Vector3<f64>> = grid_coords
        .iter()
        .map(|&(s0, s1)| sample3(&px, s0, s1))
        .collect();
    let normals: Vec<Vector3<f64>> = grid_coords
        .iter()
        .map(|&(s0, s1)| sample3(&nx, s0, s1).normalize())
        .collect();
    let mut on_surface =
        CurveOnSurface::from_samples(&points, &normals, closed, chart_path.len())?;
    // keep the (coarse) chart trace for reporting
    on_surface.chart_trace = chart_path.to_vec();
    Ok(on_surface)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{AnnulusSpec, Chart, SlabSpec};
    use crate::weierstrass::SurfacePatch;
    use num_complex::Complex64;
    use std::f64::consts::TAU;

    /// Conformal (Mercator-like) sphere patch on a slab chart, centered so
    /// the equator is the middle grid row.
    pub(crate) fn sphere_host(n_im: usize, n_re: usize) -> SurfacePatch {
        let spec = SlabSpec::new(4.0, n_im, n_re).unwrap();
        let chart = Chart::Slab(spec);
        let sh = chart.shape();
        let mid = sh.x0((sh.n0 - 1) / 2);
        let mut positions = Vec::with_capacity(sh.len());
        let mut normals = Vec::with_capacity(sh.len());
        let mut lambda = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let t = sh.x0(i) - mid;
                let u = sh.x1(j);
                let sech = 1.0 / t.cosh();
                let p = Vector3::new(sech * u.cos(), sech * u.sin(), t.tanh());
                positions.push(p);
                normals.push(p);
                lambda.push(sech);
            }
        }
        SurfacePatch {
            chart,
            positions,
            normals,
            lambda,
            hopf: vec![Complex64::default(); sh.len()],
            closure_defect: 0.0,
        }
    }

    #[test]
    fn catenoid_boundary_circle_has_unit_geodesic_curvature() {
        let cat = CriticalCatenoid::new();
        let spec = AnnulusSpec::new(cat.r_outer, 65, 128).unwrap();
        let patch = cat.analytic_annulus_patch(spec);
        // traverse θ downward so the inner conormal convention gives +1
        let path: Vec<(f64, f64)> = (0..128)
            .map(|j| (0.0, TAU - j as f64 * TAU / 128.0))
            .collect();
        let gamma = curve_on_surface(&patch, &path, true).unwrap();
        for (i, &kg) in gamma.geodesic_curvature.iter().enumerate() {
            assert!((kg - 1.0).abs() < 1e-4, "kg[{i}] = {kg}");
        }
        // curvature line: residual vanishes
        for &r in &gamma.curvature_line_residual {
            assert!(r.abs() < 1e-6, "line-of-curvature residual {r}");
        }
    }

    #[test]
    fn sphere_equator_is_a_geodesic() {
        let host = sphere_host(65, 129);
        let sh = host.shape();
        let mid_t = sh.x0((sh.n0 - 1) / 2);
        let path: Vec<(f64, f64)> = (0..128).map(|j| (mid_t, j as f64 * TAU / 128.0)).collect();
        let gamma = curve_on_surface(&host, &path, true).unwrap();
        for &kg in &gamma.geodesic_curvature {
            assert!(kg.abs() < 1e-5, "equator kg {kg}");
        }
        // every curve on a sphere is a line of curvature
        for &r in &gamma.curvature_line_residual {
            assert!(r.abs() < 1e-5);
        }
    }

    #[test]
    fn flat_patch_circle_has_geodesic_curvature_one_over_r() {
        // flat annulus patch: X = (r cos θ, r sin θ, 0)
        let spec = AnnulusSpec::new(4.0, 65, 128).unwrap();
        let chart = Chart::Annulus(spec);
        let sh = chart.shape();
        let mut positions = Vec::with_capacity(sh.len());
        let mut lambda = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let r = sh.x0(i).exp();
                let th = sh.x1(j);
                positions.push(Vector3::new(r * th.cos(), r * th.sin(), 0.0));
                lambda.push(1.0);
            }
        }
        let normals = vec![Vector3::new(0.0, 0.0, 1.0); sh.len()];
        let patch = SurfacePatch {
            chart,
            positions,
            normals,
            lambda,
            hopf: vec![Complex64::default(); sh.len()],
            closure_defect: 0.0,
        };
        let r_mid = sh.x0(32).exp();
        let path: Vec<(f64, f64)> = (0..128).map(|j| (sh.x0(32), j as f64 * TAU / 128.0)).collect();
        let gamma = curve_on_surface(&patch, &path, true).unwrap();
        for &kg in &gamma.geodesic_curvature {
            assert!((kg.abs() - 1.0 / r_mid).abs() < 1e-6, "kg {kg} vs 1/r {}", 1.0 / r_mid);
        }
    }

    #[test]
    fn path_outside_the_chart_is_rejected() {
        let host = sphere_host(17, 33);
        let path = vec![(-(1.0), 0.0), (0.0, 0.1)];
        assert!(matches!(
            curve_on_surface(&host, &path, false),
            Err(CurveError::OutsideChart(0))
        ));
    }
}
