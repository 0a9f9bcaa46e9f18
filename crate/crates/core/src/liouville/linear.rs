//! Linear algebra for the Newton steps.
//!
//! The Jacobian splits as a rotation-invariant operator plus a diagonal
//! that varies along θ. A discrete Fourier transform in θ block-diagonalizes
//! the invariant part into one small banded system per angular mode, which
//! is factored directly; that factorization preconditions BiCGStab for the
//! general case and is the exact inverse whenever the iterate is
//! rotationally symmetric (one application solves the step).

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;

use super::LiouvilleError;
use crate::geomkit::GridShape;
use crate::numerics::BandedLu;

/// Grid-level description of the discretized Jacobian.
///
/// Interior rows: e^{-2t_i}(D_tt + D_θθ) + diag; boundary rows carry the
/// one-sided normal derivative and the linearized Robin terms.
pub struct JacobianOps {
    pub sh: GridShape,
    /// e^{-2t_i} per radial level.
    pub radial_weight: Vec<f64>,
    /// Diagonal contribution 2C₀²e^v at interior nodes (full grid storage,
    /// boundary rows unused).
    pub interior_diag: Vec<f64>,
    /// Linearized Robin diagonal at the inner boundary: e^{-v/2}.
    pub inner_diag: Vec<f64>,
    /// Linearized Robin diagonal at the outer boundary: (1/R²)e^{-v/2}.
    pub outer_diag: Vec<f64>,
    /// Sign and scale of the one-sided normal derivative rows.
    pub inner_scale: f64,
    pub outer_scale: f64,
}

impl JacobianOps {
    /// J·w, matrix free.
    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        let sh = &self.sh;
        let (n0, n1) = (sh.n0, sh.n1);
        let (h0, h1) = (sh.h0, sh.h1);
        let mut out = vec![0.0; sh.len()];
        let inv_h0sq = 1.0 / (h0 * h0);
        let inv_h1sq = 1.0 / (h1 * h1);
        for i in 1..n0 - 1 {
            let ew = self.radial_weight[i];
            for j in 0..n1 {
                let jm = (j + n1 - 1) % n1;
                let jp = (j + 1) % n1;
                let idx = sh.idx(i, j);
                let lap = (w[sh.idx(i - 1, j)] - 2.0 * w[idx] + w[sh.idx(i + 1, j)]) * inv_h0sq
                    + (w[sh.idx(i, jm)] - 2.0 * w[idx] + w[sh.idx(i, jp)]) * inv_h1sq;
                out[idx] = ew * lap + self.interior_diag[idx] * w[idx];
            }
        }
        let n = n0 - 1;
        for j in 0..n1 {
            let w0 = w[sh.idx(0, j)];
            let w1 = w[sh.idx(1, j)];
            let w2 = w[sh.idx(2, j)];
            out[sh.idx(0, j)] =
                self.inner_scale * (-3.0 * w0 + 4.0 * w1 - w2) / (2.0 * h0) + self.inner_diag[j] * w0;
            let wn = w[sh.idx(n, j)];
            let wn1 = w[sh.idx(n - 1, j)];
            let wn2 = w[sh.idx(n - 2, j)];
            out[sh.idx(n, j)] = self.outer_scale * (3.0 * wn - 4.0 * wn1 + wn2) / (2.0 * h0)
                + self.outer_diag[j] * wn;
        }
        out
    }

    /// How far the diagonal data deviates from rotational symmetry,
    /// relative to its magnitude.
    pub fn angular_anisotropy(&self) -> f64 {
        let sh = &self.sh;
        let mut worst = 0.0f64;
        let mut rows: Vec<(&[f64], usize)> = Vec::new();
        rows.push((&self.inner_diag, 0));
        rows.push((&self.outer_diag, 0));
        for i in 1..sh.n0 - 1 {
            rows.push((&self.interior_diag[i * sh.n1..(i + 1) * sh.n1], i));
        }
        for (row, _) in rows {
            let mean = row.iter().sum::<f64>() / row.len() as f64;
            let dev = row
                .iter()
                .map(|v| (v - mean).abs())
                .fold(0.0f64, f64::max);
            worst = worst.max(dev / mean.abs().max(1e-300));
        }
        worst
    }
}

/// Direct factorization of the θ-averaged Jacobian: one banded LU per
/// Fourier mode.
pub struct ModalPreconditioner {
    sh: GridShape,
    factors: Vec<BandedLu>,
    fft_fwd: Arc<dyn rustfft::Fft<f64>>,
    fft_inv: Arc<dyn rustfft::Fft<f64>>,
}

impl ModalPreconditioner {
    pub fn build(ops: &JacobianOps) -> Result<Self, LiouvilleError> {
        let sh = ops.sh;
        let (n0, n1) = (sh.n0, sh.n1);
        let h0 = sh.h0;
        let mean = |row: &[f64]| row.iter().sum::<f64>() / row.len() as f64;
        let inner_d = mean(&ops.inner_diag);
        let outer_d = mean(&ops.outer_diag);
        let interior_d: Vec<f64> = (0..n0)
            .map(|i| {
                if i == 0 || i == n0 - 1 {
                    0.0
                } else {
                    mean(&ops.interior_diag[i * n1..(i + 1) * n1])
                }
            })
            .collect();

        let mut factors = Vec::with_capacity(n1);
        for k in 0..n1 {
            let angle = std::f64::consts::TAU * k as f64 / n1 as f64;
            // eigenvalue of the periodic second difference
            let mu = (2.0 * angle.cos() - 2.0) / (sh.h1 * sh.h1);
            let n = n0 - 1;
            let lu = BandedLu::factor(n0, 2, 2, |r, c| {
                let val = if r == 0 {
                    match c {
                        0 => ops.inner_scale * (-3.0) / (2.0 * h0) + inner_d,
                        1 => ops.inner_scale * 4.0 / (2.0 * h0),
                        2 => ops.inner_scale * (-1.0) / (2.0 * h0),
                        _ => 0.0,
                    }
                } else if r == n {
                    if c == n {
                        ops.outer_scale * 3.0 / (2.0 * h0) + outer_d
                    } else if c == n - 1 {
                        ops.outer_scale * (-4.0) / (2.0 * h0)
                    } else if c == n - 2 {
                        ops.outer_scale / (2.0 * h0)
                    } else {
                        0.0
                    }
                } else {
                    let ew = ops.radial_weight[r];
                    if c == r {
                        ew * (-2.0 / (h0 * h0) + mu) + interior_d[r]
                    } else if c + 1 == r || c == r + 1 {
                        ew / (h0 * h0)
                    } else {
                        0.0
                    }
                };
                Complex64::new(val, 0.0)
            })
            .map_err(|_| LiouvilleError::LinearBreakdown)?;
            factors.push(lu);
        }
        let mut planner = FftPlanner::new();
        Ok(ModalPreconditioner {
            sh,
            factors,
            fft_fwd: planner.plan_fft_forward(n1),
            fft_inv: planner.plan_fft_inverse(n1),
        })
    }

    /// M⁻¹ r: FFT rows, solve each mode, inverse FFT.
    pub fn solve(&self, r: &[f64]) -> Vec<f64> {
        let (n0, n1) = (self.sh.n0, self.sh.n1);
        let mut hat = vec![Complex64::default(); n0 * n1];
        let mut buf = vec![Complex64::default(); n1];
        for i in 0..n0 {
            for j in 0..n1 {
                buf[j] = Complex64::new(r[i * n1 + j], 0.0);
            }
            self.fft_fwd.process(&mut buf);
            hat[i * n1..(i + 1) * n1].copy_from_slice(&buf);
        }
        let mut col = vec![Complex64::default(); n0];
        for k in 0..n1 {
            for i in 0..n0 {
                col[i] = hat[i * n1 + k];
            }
            self.factors[k].solve(&mut col);
            for i in 0..n0 {
                hat[i * n1 + k] = col[i];
            }
        }
        let mut out = vec![0.0; n0 * n1];
        let scale = 1.0 / n1 as f64;
        for i in 0..n0 {
            buf.copy_from_slice(&hat[i * n1..(i + 1) * n1]);
            self.fft_inv.process(&mut buf);
            for j in 0..n1 {
                out[i * n1 + j] = buf[j].re * scale;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned BiCGStab for J x = b. Returns (x, iterations).
///
/// With an exact preconditioner (rotationally symmetric diagonal) the first
/// half-step already lands on the solution.
pub fn bicgstab(
    ops: &JacobianOps,
    pre: &ModalPreconditioner,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize), LiouvilleError> {
    let n = b.len();
    let bnorm = norm2(b).max(1e-300);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    if norm2(&r) / bnorm < rel_tol {
        return Ok((x, 0));
    }
    let r_hat = r.clone();
    let mut rho = 1.0f64;
    let mut alpha = 1.0f64;
    let mut omega = 1.0f64;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for it in 1..=max_iter {
        let rho1 = dot(&r_hat, &r);
        if rho1.abs() < 1e-300 {
            return Err(LiouvilleError::LinearBreakdown);
        }
        let beta = (rho1 / rho) * (alpha / omega);
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
        let p_hat = pre.solve(&p);
        v = ops.apply(&p_hat);
        let denom = dot(&r_hat, &v);
        if denom.abs() < 1e-300 {
            return Err(LiouvilleError::LinearBreakdown);
        }
        alpha = rho1 / denom;
        let mut s = r.clone();
        for k in 0..n {
            s[k] -= alpha * v[k];
        }
        for k in 0..n {
            x[k] += alpha * p_hat[k];
        }
        if norm2(&s) / bnorm < rel_tol {
            return Ok((x, it));
        }
        let s_hat = pre.solve(&s);
        let t = ops.apply(&s_hat);
        let tt = dot(&t, &t);
        if tt < 1e-300 {
            return Err(LiouvilleError::LinearBreakdown);
        }
        omega = dot(&t, &s) / tt;
        for k in 0..n {
            x[k] += omega * s_hat[k];
            r[k] = s[k] - omega * t[k];
        }
        if norm2(&r) / bnorm < rel_tol {
            return Ok((x, it));
        }
        rho = rho1;
    }
    Err(LiouvilleError::LinearBreakdown)
}
