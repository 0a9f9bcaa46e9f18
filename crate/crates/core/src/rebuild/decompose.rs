//! Fundamental-piece decomposition: the rigid motion T with
//! T·X(H⁰) = X(H⁰+2π) and its rotation classification.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use super::frame::FrameField;
use super::RebuildError;
use crate::geomkit::{fit_rigid_motion, RigidMotion};
use crate::tolerances::{DECOMP_ANGLE_TOL, DECOMP_N_MAX};
use crate::weierstrass::SurfacePatch;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DecompClass {
    /// T = id: the piece already closes to the annulus.
    Identity,
    /// Rotation by 2πk/N about an axis; N copies tile the annulus.
    Rotation {
        piece_count: usize,
        index: usize,
        axis: [f64; 3],
        axis_point: [f64; 3],
    },
}

#[derive(Debug, Clone)]
pub struct FundamentalDecomposition {
    pub motion: RigidMotion,
    pub classification: DecompClass,
    /// ‖Tⁿ·X(H⁰) - X(H⁰+2πn)‖_RMS for the n-step copies available.
    pub equivariance_rms: Vec<f64>,
    /// ‖T^N - id‖ when the classification is a rotation.
    pub closure_defect: f64,
    pub piece: SurfacePatch,
}

/// Best rational approximation k/n to x with n ≤ n_max (continued
/// fractions; convergents are returned best-first).
fn continued_fraction_convergents(x: f64, n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    out.push((p1 as usize, q1 as usize));
    for _ in 0..32 {
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor() as i64;
        frac = r - r.floor();
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 as usize > n_max {
            break;
        }
        out.push((p2 as usize, q2 as usize));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    out.reverse();
    out
}

/// Fit T between consecutive fundamental pieces and classify it with the
/// strict identity gate (exact or near-exact input fields).
pub fn decompose(frame: &FrameField) -> Result<FundamentalDecomposition, RebuildError> {
    decompose_with_tol(frame, 1e-6)
}

/// Fit T between consecutive fundamental pieces and classify it.
///
/// The frame must span at least two copies of the fundamental domain
/// (Re ξ over [0, 2πM], M ≥ 2); equivariance is verified for as many copy
/// shifts as the span allows (up to 2). `identity_tol` is the rotation
/// angle (and relative translation) below which T counts as the identity;
/// reconstructions from solved fields close only to O(h²), so callers pass
/// a gate at their discretization scale.
pub fn decompose_with_tol(
    frame: &FrameField,
    identity_tol: f64,
) -> Result<FundamentalDecomposition, RebuildError> {
    let slab = frame
        .chart
        .slab()
        .expect("decomposition runs on slab frames");
    let copies = slab.copies;
    if copies < 2 {
        return Err(RebuildError::TooFewCopies(copies));
    }
    let sh = frame.shape();
    let n_per = slab.n_re - 1;

    let piece_nodes = |shift: usize| -> Vec<Vector3<f64>> {
        let mut out = Vec::with_capacity(sh.n0 * (n_per + 1));
        for i in 0..sh.n0 {
            for j in 0..=n_per {
                out.push(frame.position(i, j + shift * n_per));
            }
        }
        out
    };
    let piece0 = piece_nodes(0);
    let piece1 = piece_nodes(1);
    let (motion, rms1) = fit_rigid_motion(&piece0, &piece1)?;

    let mut equivariance_rms = vec![rms1];
    if copies >= 3 {
        let piece2 = piece_nodes(2);
        let t2 = motion.compose(&motion);
        let mut ss = 0.0;
        for (p, q) in piece0.iter().zip(&piece2) {
            ss += (t2.apply(p) - q).norm_squared();
        }
        equivariance_rms.push((ss / piece0.len() as f64).sqrt());
    }

    let scale = piece0.iter().map(|p| p.norm()).fold(0.0f64, f64::max).max(1.0);
    let piece = piece_patch(frame, n_per);

    // identity classification
    if motion.angle() < identity_tol && motion.translation.norm() < identity_tol * scale {
        return Ok(FundamentalDecomposition {
            motion,
            classification: DecompClass::Identity,
            equivariance_rms,
            closure_defect: 0.0,
            piece,
        });
    }

    let angle = motion.angle();
    let axis = match motion.axis() {
        Some(a) => a,
        // translation with no rotation cannot tile a closed annulus
        None => return Err(RebuildError::ScrewMotion(motion.translation.norm())),
    };
    let tau_axial = motion.translation.dot(&axis);
    if tau_axial.abs() > 1e-6 * scale {
        return Err(RebuildError::ScrewMotion(tau_axial.abs()));
    }
    // point on the axis: least-squares solve of (I - R)c = τ_perp
    let m = Matrix3::identity() - motion.rotation;
    let rhs = motion.translation - tau_axial * axis;
    let axis_point = m
        .svd(true, true)
        .solve(&rhs, 1e-10)
        .unwrap_or_else(|_| Vector3::zeros());

    // rational multiple of 2π
    let x = angle / std::f64::consts::TAU;
    for (k, n) in continued_fraction_convergents(x, DECOMP_N_MAX) {
        if n == 0 {
            continue;
        }
        let defect = (angle * n as f64 - std::f64::consts::TAU * k as f64).abs();
        if defect < DECOMP_ANGLE_TOL {
            // verify T^N ≈ id on the rotation part
            let tn = motion.powi(n);
            let closure = (tn.rotation - Matrix3::identity()).norm();
            if closure < 1e-5 * n as f64 {
                return Ok(FundamentalDecomposition {
                    motion: motion.clone(),
                    classification: DecompClass::Rotation {
                        piece_count: n,
                        index: k,
                        axis: [axis[0], axis[1], axis[2]],
                        axis_point: [axis_point[0], axis_point[1], axis_point[2]],
                    },
                    equivariance_rms,
                    closure_defect: closure,
                    piece,
                });
            }
        }
    }
    Err(RebuildError::NonClosing(angle))
}

/// The fundamental piece X(H⁰): the first 2π worth of columns as a patch.
pub fn fundamental_piece(frame: &FrameField) -> SurfacePatch {
    let slab = frame.chart.slab().expect("slab chart");
    piece_patch(frame, slab.n_re - 1)
}

fn piece_patch(frame: &FrameField, n_per: usize) -> SurfacePatch {
    let slab = frame.chart.slab().expect("slab chart");
    let sh = frame.shape();
    let sub = crate::geomkit::SlabSpec::new(slab.r_outer, slab.n_im, n_per + 1)
        .expect("valid sub-slab");
    let chart = crate::geomkit::Chart::Slab(sub);
    let mut positions = Vec::with_capacity(sh.n0 * (n_per + 1));
    let mut normals = Vec::with_capacity(sh.n0 * (n_per + 1));
    let mut lambda = Vec::with_capacity(sh.n0 * (n_per + 1));
    for i in 0..sh.n0 {
        for j in 0..=n_per {
            let idx = sh.idx(i, j);
            positions.push(frame.positions[idx]);
            normals.push(frame.normal[idx]);
            lambda.push(frame.lambda[idx]);
        }
    }
    SurfacePatch {
        chart,
        positions,
        normals,
        lambda,
        hopf: vec![num_complex::Complex64::new(-frame.c0, 0.0); sh.n0 * (n_per + 1)],
        closure_defect: 0.0,
    }
}

/// Build a synthetic frame field whose consecutive fundamental pieces are
/// related by a prescribed rotation about the x₃-axis (test harness for
/// the classifier; also exercised by the CLI demo path).
pub fn synthetic_rotated_frame(
    angle_per_period: f64,
    n_im: usize,
    n_re: usize,
    copies: usize,
) -> FrameField {
    let slab = crate::geomkit::SlabSpec::with_copies(4.0, n_im, n_re, copies).expect("valid");
    let chart = crate::geomkit::Chart::Slab(slab);
    let sh = chart.shape();
    let rate = angle_per_period / std::f64::consts::TAU;
    let mut positions = Vec::with_capacity(sh.len());
    let mut e1 = Vec::with_capacity(sh.len());
    let mut e2 = Vec::with_capacity(sh.len());
    let mut normal = Vec::with_capacity(sh.len());
    for i in 0..sh.n0 {
        for j in 0..sh.n1 {
            let u = sh.x1(j);
            let t = sh.x0(i);
            let phi = rate * u;
            // a twisted column: profile curve rotated by rate·u
            let profile = Vector3::new(1.2 + 0.3 * (2.0 * t).cos(), 0.0, t);
            let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), phi);
            positions.push(rot * profile);
            e1.push(rot * Vector3::y());
            e2.push(rot * Vector3::z());
            normal.push(rot * Vector3::x());
        }
    }
    FrameField {
        chart,
        positions,
        e1,
        e2,
        normal,
        lambda: vec![1.0; sh.len()],
        c0: 1.0,
        drift_max: 0.0,
        drift_total: 0.0,
        compat_residual: 0.0,
    }
}
