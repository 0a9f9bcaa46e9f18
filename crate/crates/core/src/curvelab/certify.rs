//! The orthogonal-sphere certifier.
//!
//! A line of curvature with constant geodesic curvature c on its host meets
//! a sphere of radius 1/|c| orthogonally (a plane when c = 0). The
//! generic-torsion and planar branches are handled per analytic piece and
//! merged by continuity; pieces whose spheres disagree produce a
//! union-of-spheres certificate instead of a single sphere.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::criterion::{sphere_normal_field_on, tau_floor_for};
use super::surface::CurveOnSurface;
use super::CertifyError;
use crate::tolerances::{
    CENTER_MERGE_REL_TOL, CONSTANCY_REL_TOL, CURVATURE_LINE_TOL, FLAT_NODE_FRACTION,
    NORMAL_CURVATURE_FLOOR_REL,
};

const MIN_RUN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertBranch {
    /// Lemma-3.1 route: non-vanishing torsion pieces.
    Generic,
    /// Lemma-3.2 route: vanishing torsion, circular pieces.
    Planar,
    /// Piece spheres disagree; certificate carries the union.
    Piecewise,
}

#[derive(Debug, Clone, Serialize)]
pub enum CertGeometry {
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
    Plane {
        normal: [f64; 3],
        offset: f64,
    },
    SphereUnion {
        spheres: Vec<([f64; 3], f64)>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SphereCertificate {
    pub branch: CertBranch,
    pub geometry: CertGeometry,
    /// 1/|c| (infinite for the plane case).
    pub radius: f64,
    /// The constant geodesic curvature c.
    pub geodesic_curvature: f64,
    /// max |⟨N, X - center⟩| over curve nodes (|⟨N, n_plane⟩| for planes).
    pub orthogonality_residual: f64,
    /// max ||X - center| - radius| (distance-to-plane spread for planes).
    pub sphericity_residual: f64,
    /// Contact angle θ per node from b = cos θ N + sin θ ν.
    pub contact_angle: Vec<f64>,
}

impl SphereCertificate {
    pub fn center(&self) -> Option<Vector3<f64>> {
        match &self.geometry {
            CertGeometry::Sphere { center, .. } => Some(Vector3::from_row_slice(center)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
struct Piece {
    center: Vector3<f64>,
    weight: f64,
    generic: bool,
}

/// Certify per Proposition 3.1. Preconditions checked here: the curve is a
/// line of curvature, its geodesic curvature is constant, and the normal
/// curvature vanishes at only a small fraction of nodes.
pub fn certify_orthogonal_sphere(
    gamma: &CurveOnSurface,
) -> Result<SphereCertificate, CertifyError> {
    let n = gamma.curve.len();
    let kn_max = gamma
        .normal_curvature
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    let clr = gamma
        .curvature_line_residual
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    if clr > CURVATURE_LINE_TOL * kn_max.max(1e-300) {
        return Err(CertifyError::NotACurvatureLine(clr / kn_max.max(1e-300)));
    }

    let c = gamma.geodesic_curvature.iter().sum::<f64>() / n as f64;
    let acc_scale = gamma
        .geodesic_curvature
        .iter()
        .zip(&gamma.normal_curvature)
        .map(|(g, nc)| (g * g + nc * nc).sqrt())
        .fold(0.0f64, f64::max);
    let contact_angle = gamma.contact_angle();

    // c = 0: a principal geodesic lies in a plane orthogonal to the host;
    // the plane normal is the (constant) conormal
    if c.abs() < 1e-6 * acc_scale {
        let dev = gamma
            .geodesic_curvature
            .iter()
            .map(|g| (g - c).abs())
            .fold(0.0f64, f64::max);
        if dev > CONSTANCY_REL_TOL * acc_scale {
            return Err(CertifyError::NonConstantGeodesicCurvature(dev / acc_scale));
        }
        let mut normal = Vector3::zeros();
        for nu in &gamma.conormal {
            normal += if nu.dot(&gamma.conormal[0]) >= 0.0 {
                *nu
            } else {
                -*nu
            };
        }
        let normal = normal.normalize();
        let offset =
            gamma.curve.samples.iter().map(|p| p.dot(&normal)).sum::<f64>() / n as f64;
        let planarity = gamma
            .curve
            .samples
            .iter()
            .map(|p| (p.dot(&normal) - offset).abs())
            .fold(0.0f64, f64::max);
        let ortho = gamma
            .surface_normal
            .iter()
            .map(|nv| nv.dot(&normal).abs())
            .fold(0.0f64, f64::max);
        return Ok(SphereCertificate {
            branch: CertBranch::Planar,
            geometry: CertGeometry::Plane {
                normal: [normal[0], normal[1], normal[2]],
                offset,
            },
            radius: f64::INFINITY,
            geodesic_curvature: 0.0,
            orthogonality_residual: ortho,
            sphericity_residual: planarity,
            contact_angle,
        });
    }

    let dev = gamma
        .geodesic_curvature
        .iter()
        .map(|g| (g - c).abs())
        .fold(0.0f64, f64::max);
    if dev > CONSTANCY_REL_TOL * c.abs() {
        return Err(CertifyError::NonConstantGeodesicCurvature(dev / c.abs()));
    }
    let kn_floor = NORMAL_CURVATURE_FLOOR_REL * kn_max;
    let flat = gamma
        .normal_curvature
        .iter()
        .filter(|nc| nc.abs() < kn_floor)
        .count();
    if (flat as f64) >= FLAT_NODE_FRACTION * n as f64 {
        return Err(CertifyError::TooManyFlatPoints(
            100.0 * flat as f64 / n as f64,
        ));
    }

    let radius = 1.0 / c.abs();
    let pieces = split_and_solve(gamma, radius)?;
    if pieces.is_empty() {
        return Err(CertifyError::PieceTooShort(0));
    }
    let (branch, geometry, center) = merge_pieces(&pieces, radius);
    let (ortho, spher) = match center {
        Some(ctr) => residuals_about(gamma, &ctr, radius),
        None => (f64::NAN, f64::NAN),
    };
    Ok(SphereCertificate {
        branch,
        geometry,
        radius,
        geodesic_curvature: c,
        orthogonality_residual: ortho,
        sphericity_residual: spher,
        contact_angle,
    })
}

fn residuals_about(
    gamma: &CurveOnSurface,
    center: &Vector3<f64>,
    radius: f64,
) -> (f64, f64) {
    let mut ortho = 0.0f64;
    let mut spher = 0.0f64;
    for i in 0..gamma.curve.len() {
        let d = gamma.curve.samples[i] - center;
        ortho = ortho.max(gamma.surface_normal[i].dot(&d).abs());
        spher = spher.max((d.norm() - radius).abs());
    }
    (ortho, spher)
}

/// Split nodes into maximal generic/planar runs (|τ| against the floor),
/// solve each run for its sphere center, and collect the pieces.
fn split_and_solve(
    gamma: &CurveOnSurface,
    radius: f64,
) -> Result<Vec<Piece>, CertifyError> {
    let curve = &gamma.curve;
    let n = curve.len();
    let tau_floor = tau_floor_for(curve);
    let generic: Vec<bool> = (0..n).map(|i| curve.tau[i].abs() >= tau_floor).collect();

    // maximal runs, generalized for closed curves by starting at a change
    let mut runs: Vec<(bool, Vec<usize>)> = Vec::new();
    let start = if curve.closed {
        (0..n)
            .find(|&i| generic[i] != generic[(i + n - 1) % n])
            .unwrap_or(0)
    } else {
        0
    };
    let mut current: Vec<usize> = vec![start];
    for step in 1..n {
        let i = (start + step) % n;
        if generic[i] == generic[current[0]] {
            current.push(i);
        } else {
            runs.push((generic[current[0]], std::mem::take(&mut current)));
            current.push(i);
        }
    }
    runs.push((generic[current[0]], current));

    let mut pieces = Vec::new();
    for (is_generic, nodes) in runs {
        if nodes.len() < MIN_RUN {
            continue; // transition zone around a torsion zero
        }
        if is_generic {
            match sphere_normal_field_on(curve, radius, &nodes) {
                Ok(f) => pieces.push(Piece {
                    center: f.center,
                    weight: nodes.len() as f64,
                    generic: true,
                }),
                Err(CertifyError::PieceTooShort(_)) => continue,
                Err(e) => return Err(e),
            }
        } else {
            let center = planar_run_center(gamma, &nodes, radius)?;
            pieces.push(Piece {
                center,
                weight: nodes.len() as f64,
                generic: false,
            });
        }
    }
    Ok(pieces)
}

/// Lemma-3.2 route for a vanishing-torsion run: the piece is a circular
/// arc; the sphere center sits off the arc's plane at the offset fixed by
/// the radius, with the side chosen by the orthogonality residual.
fn planar_run_center(
    gamma: &CurveOnSurface,
    nodes: &[usize],
    radius: f64,
) -> Result<Vector3<f64>, CertifyError> {
    let pts: Vec<Vector3<f64>> = nodes.iter().map(|&i| gamma.curve.samples[i]).collect();
    let m = pts.len() as f64;
    let centroid: Vector3<f64> = pts.iter().sum::<Vector3<f64>>() / m;
    let mut cov = Matrix3::<f64>::zeros();
    for p in &pts {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = nalgebra::SymmetricEigen::new(cov);
    let k_min = (0..3)
        .min_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("non-finite eigenvalue")
        })
        .expect("3 eigenvalues");
    let plane_n: Vector3<f64> = eig.eigenvectors.column(k_min).into();
    // in-plane circle fit (Kasa): minimize |p|² - 2 c·p - t
    let e1 = plane_n
        .cross(&pick_transverse(&plane_n))
        .normalize();
    let e2 = plane_n.cross(&e1);
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for p in &pts {
        let d = p - centroid;
        let (x, y) = (d.dot(&e1), d.dot(&e2));
        let row = [2.0 * x, 2.0 * y, 1.0];
        let rhs = x * x + y * y;
        for r in 0..3 {
            for c2 in 0..3 {
                a[r][c2] += row[r] * row[c2];
            }
            b[r] += row[r] * rhs;
        }
    }
    let sol = solve3(a, b).ok_or(CertifyError::InconsistentCenter)?;
    let circle_center = centroid + sol[0] * e1 + sol[1] * e2;
    let rho2 = sol[2] + sol[0] * sol[0] + sol[1] * sol[1];
    let rho = rho2.max(0.0).sqrt();
    let offset = (radius * radius - rho * rho).max(0.0).sqrt();
    // try both sides of the plane
    let cand = [
        circle_center + offset * plane_n,
        circle_center - offset * plane_n,
    ];
    let resid = |ctr: &Vector3<f64>| {
        nodes
            .iter()
            .map(|&i| {
                gamma.surface_normal[i]
                    .dot(&(gamma.curve.samples[i] - ctr))
                    .abs()
            })
            .fold(0.0f64, f64::max)
    };
    let (r0, r1) = (resid(&cand[0]), resid(&cand[1]));
    Ok(if r0 <= r1 { cand[0] } else { cand[1] })
}

fn pick_transverse(v: &Vector3<f64>) -> Vector3<f64> {
    let a = v.x.abs();
    let b = v.y.abs();
    let c = v.z.abs();
    if a <= b && a <= c {
        Vector3::x()
    } else if b <= c {
        Vector3::y()
    } else {
        Vector3::z()
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let m = Matrix3::from_fn(|r, c| a[r][c]);
    let rhs = Vector3::new(b[0], b[1], b[2]);
    m.lu().solve(&rhs).map(|x| [x[0], x[1], x[2]])
}

/// Merge piece centers by continuity: within tolerance they name one
/// sphere, otherwise the certificate degrades to a union of spheres.
fn merge_pieces(
    pieces: &[Piece],
    radius: f64,
) -> (CertBranch, CertGeometry, Option<Vector3<f64>>) {
    let wsum: f64 = pieces.iter().map(|p| p.weight).sum();
    let mean: Vector3<f64> =
        pieces.iter().map(|p| p.center * p.weight).sum::<Vector3<f64>>() / wsum;
    let spread = pieces
        .iter()
        .map(|p| (p.center - mean).norm())
        .fold(0.0f64, f64::max);
    if spread <= CENTER_MERGE_REL_TOL * radius {
        let branch = if pieces.iter().any(|p| p.generic) {
            CertBranch::Generic
        } else {
            CertBranch::Planar
        };
        (
            branch,
            CertGeometry::Sphere {
                center: [mean[0], mean[1], mean[2]],
                radius,
            },
            Some(mean),
        )
    } else {
        (
            CertBranch::Piecewise,
            CertGeometry::SphereUnion {
                spheres: pieces
                    .iter()
                    .map(|p| ([p.center[0], p.center[1], p.center[2]], radius))
                    .collect(),
            },
            None,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{AnnulusSpec, RigidMotion};
    use std::f64::consts::TAU;

    /// Spherical Lissajous curve on a sphere of radius r at `center`,
    /// hosted on the radially ruled surface through it (conormal = radial
    /// direction), which carries the curve as a constant-geodesic-curvature
    /// line of curvature with κ_g = -1/r.
    fn lissajous_on_ruled_host(
        n: usize,
        r: f64,
        center: Vector3<f64>,
        motion: Option<&RigidMotion>,
    ) -> CurveOnSurface {
        let mut pts = Vec::with_capacity(n);
        let mut nrm = Vec::with_capacity(n);
        for j in 0..n {
            let p = TAU * j as f64 / n as f64;
            let z = 0.6 * (2.0 * p).sin();
            let zp = 1.2 * (2.0 * p).cos();
            let rho = (1.0 - z * z).sqrt();
            let rhop = -z * zp / rho;
            let gamma = Vector3::new(rho * p.cos(), rho * p.sin(), z);
            let dgamma = Vector3::new(
                rhop * p.cos() - rho * p.sin(),
                rhop * p.sin() + rho * p.cos(),
                zp,
            );
            let t = dgamma.normalize();
            let host_normal = t.cross(&gamma).normalize();
            let (mut pos, mut nv) = (center + r * gamma, host_normal);
            if let Some(m) = motion {
                pos = m.apply(&pos);
                nv = m.rotation * nv;
            }
            pts.push(pos);
            nrm.push(nv);
        }
        CurveOnSurface::from_samples(&pts, &nrm, true, 2048).unwrap()
    }

    #[test]
    fn generic_branch_recovers_the_sphere() {
        let gamma = lissajous_on_ruled_host(16384, 1.0, Vector3::zeros(), None);
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        assert_eq!(cert.branch, CertBranch::Generic);
        let center = cert.center().unwrap();
        assert!(center.norm() < 1e-6, "center {center:?}");
        assert!((cert.radius - 1.0).abs() < 1e-6);
        assert!(cert.orthogonality_residual < 1e-6);
        assert!(cert.sphericity_residual < 1e-6);
    }

    #[test]
    fn translated_curve_recovers_the_translated_center() {
        let shift = Vector3::new(1.0, 2.0, 3.0);
        let gamma = lissajous_on_ruled_host(16384, 1.0, shift, None);
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        assert!((cert.center().unwrap() - shift).norm() < 1e-6);
    }

    #[test]
    fn rigid_motion_equivariance() {
        let motion = RigidMotion {
            translation: Vector3::new(0.3, -0.8, 1.1),
            ..RigidMotion::rotation_about(Vector3::new(1.0, 2.0, -1.0), 0.9)
        };
        let plain = lissajous_on_ruled_host(8192, 1.0, Vector3::zeros(), None);
        let moved = lissajous_on_ruled_host(8192, 1.0, Vector3::zeros(), Some(&motion));
        let c0 = certify_orthogonal_sphere(&plain).unwrap();
        let c1 = certify_orthogonal_sphere(&moved).unwrap();
        let mapped = motion.apply(&c0.center().unwrap());
        assert!((mapped - c1.center().unwrap()).norm() < 1e-10);
        assert!(
            (c0.orthogonality_residual - c1.orthogonality_residual).abs() < 1e-10,
            "residuals {} vs {}",
            c0.orthogonality_residual,
            c1.orthogonality_residual
        );
    }

    #[test]
    fn contact_angle_identities_hold() {
        let gamma = lissajous_on_ruled_host(16384, 2.0, Vector3::zeros(), None);
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        let c = cert.geodesic_curvature;
        let theta = &cert.contact_angle;
        let curve = &gamma.curve;
        let tau_floor = tau_floor_for(curve);
        // c² = κ² cos²θ at every node; (1/κ²)(1+tan²θ) = 1/c² on the
        // generic nodes
        for i in 0..curve.len() {
            let k = curve.kappa[i];
            let id1 = c * c - k * k * theta[i].cos().powi(2);
            assert!(id1.abs() < 1e-6, "contact identity {id1} at {i}");
            if curve.tau[i].abs() > tau_floor.max(0.05) {
                let lhs = (1.0 + theta[i].tan().powi(2)) / (k * k);
                assert!((lhs - 1.0 / (c * c)).abs() < 1e-5, "criterion identity");
            }
        }
        // τ = -D_t θ under refinement
        let dtheta = crate::curvelab::curve::diff_scalar(
            theta,
            curve.spacing,
            1,
            crate::numerics::FdOrder::Four,
            true,
        );
        let mut worst = 0.0f64;
        for i in 0..curve.len() {
            worst = worst.max((curve.tau[i] + dtheta[i]).abs());
        }
        assert!(worst < 1e-4, "torsion-angle identity {worst}");
    }

    #[test]
    fn catenoid_boundary_gives_the_unit_sphere_through_the_planar_branch() {
        let cat = CriticalCatenoid::new();
        let spec = AnnulusSpec::new(cat.r_outer, 65, 256).unwrap();
        let patch = cat.analytic_annulus_patch(spec);
        let path: Vec<(f64, f64)> = (0..256)
            .map(|j| (0.0, TAU - j as f64 * TAU / 256.0))
            .collect();
        let gamma = crate::curvelab::curve_on_surface(&patch, &path, true).unwrap();
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        assert_eq!(cert.branch, CertBranch::Planar);
        assert!((cert.radius - 1.0).abs() < 1e-4, "radius {}", cert.radius);
        let center = cert.center().unwrap();
        assert!(center.norm() < 1e-5, "center {center:?}");
        assert!(cert.orthogonality_residual < 1e-5);
    }

    #[test]
    fn straight_line_on_a_flat_host_yields_a_plane() {
        let n = 64;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|i| Vector3::new(i as f64 * 0.1, 0.0, 0.25))
            .collect();
        let normals = vec![Vector3::new(0.0, 0.0, 1.0); n];
        let gamma = CurveOnSurface::from_samples(&pts, &normals, false, 64).unwrap();
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        match cert.geometry {
            CertGeometry::Plane { normal, .. } => {
                // plane through the line orthogonal to the host: normal ⟂ N
                // and ⟂ t, i.e. ±y
                assert!(normal[1].abs() > 0.999, "plane normal {normal:?}");
            }
            ref g => panic!("expected plane, got {g:?}"),
        }
        assert!(cert.orthogonality_residual < 1e-10);
    }

    #[test]
    fn circle_on_a_round_sphere_matches_the_pencil_oracle() {
        // host: unit sphere; curve: latitude at z = tanh δ; the orthogonal
        // sphere has center (0, 0, coth δ) and radius 1/sinh δ
        let delta = 0.8f64;
        let n = 512;
        let (z, rho) = (delta.tanh(), 1.0 / delta.cosh());
        let mut pts = Vec::with_capacity(n);
        let mut nrm = Vec::with_capacity(n);
        for j in 0..n {
            let u = TAU * j as f64 / n as f64;
            let p = Vector3::new(rho * u.cos(), rho * u.sin(), z);
            pts.push(p);
            nrm.push(p.normalize());
        }
        let gamma = CurveOnSurface::from_samples(&pts, &nrm, true, 512).unwrap();
        let cert = certify_orthogonal_sphere(&gamma).unwrap();
        assert_eq!(cert.branch, CertBranch::Planar);
        let expected_center = Vector3::new(0.0, 0.0, 1.0 / delta.tanh());
        let expected_radius = 1.0 / delta.sinh();
        assert!((cert.radius - expected_radius).abs() < 1e-6);
        assert!((cert.center().unwrap() - expected_center).norm() < 1e-6);
        assert!(cert.orthogonality_residual < 1e-7);
    }

    #[test]
    fn disagreeing_pieces_merge_into_a_union() {
        let pieces = vec![
            Piece {
                center: Vector3::new(0.0, 0.0, 0.0),
                weight: 10.0,
                generic: true,
            },
            Piece {
                center: Vector3::new(0.5, 0.0, 0.0),
                weight: 10.0,
                generic: false,
            },
        ];
        let (branch, geometry, center) = merge_pieces(&pieces, 1.0);
        assert_eq!(branch, CertBranch::Piecewise);
        assert!(center.is_none());
        match geometry {
            CertGeometry::SphereUnion { spheres } => assert_eq!(spheres.len(), 2),
            g => panic!("expected union, got {g:?}"),
        }
        // agreeing pieces collapse to one sphere
        let pieces = vec![
            Piece {
                center: Vector3::new(1e-5, 0.0, 0.0),
                weight: 10.0,
                generic: true,
            },
            Piece {
                center: Vector3::zeros(),
                weight: 30.0,
                generic: false,
            },
        ];
        let (branch, _, center) = merge_pieces(&pieces, 1.0);
        assert_eq!(branch, CertBranch::Generic);
        assert!(center.unwrap().norm() < 1e-5);
    }
}
