//! The rotationally symmetric sech²-type solution family.
//!
//! Under rotational symmetry the lifted equation reduces to the 1D
//! Liouville ODE w'' + 2C₀²e^w = 0, solved exactly by
//! w(t) = log((α²/C₀²) sech²(α(t-t₀))); v = w - 2t then satisfies the
//! radial reduction of the boundary value problem once (α, t₀) solve the
//! two boundary equations. The closed form is the exact oracle against
//! which the full solver is checked.

use serde::Serialize;

use super::{LiouvilleError, LiouvilleProblem};
use crate::geomkit::{Chart, RealField};

/// Closed-form symmetric solution parameters.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetricSolution {
    /// Decay rate α > 0 of the sech profile (1/length in t).
    pub alpha: f64,
    /// Profile center t₀ in t = log r.
    pub t0: f64,
    /// Hopf constant |C₀|.
    pub c0: f64,
    /// Outer radius R.
    pub r_outer: f64,
}

impl SymmetricSolution {
    /// w(t) = log((α²/C₀²) sech²(α(t-t₀))).
    pub fn w(&self, t: f64) -> f64 {
        let u = self.alpha * (t - self.t0);
        (self.alpha * self.alpha / (self.c0 * self.c0)).ln() - 2.0 * u.cosh().ln()
    }

    pub fn w_prime(&self, t: f64) -> f64 {
        -2.0 * self.alpha * (self.alpha * (t - self.t0)).tanh()
    }

    /// v(t) = w(t) - 2t solves the radial reduction of E[R, 0, C₀].
    pub fn v(&self, t: f64) -> f64 {
        self.w(t) - 2.0 * t
    }

    /// Sample v on an annulus grid.
    pub fn evaluate(&self, chart: &Chart) -> RealField {
        let sh = chart.shape();
        RealField::from_fn(chart.clone(), |i, _| self.v(sh.x0(i)))
    }

    /// Sample the lift ṽ = v + 2 Im ξ = w on a slab grid.
    pub fn evaluate_lift(&self, chart: &Chart) -> RealField {
        let sh = chart.shape();
        RealField::from_fn(chart.clone(), |i, _| self.w(sh.x0(i)))
    }

    /// Residuals of the two boundary equations at (α, t₀).
    pub fn boundary_equations(&self) -> (f64, f64) {
        let t_len = self.r_outer.ln();
        boundary_system(self.alpha, self.t0, t_len, self.c0)
    }
}

/// The two scalar boundary equations for the symmetric family:
/// g₁ = α tanh(αt₀) - (C₀/α) cosh(αt₀) (inner circle),
/// g₂ = α tanh(α(T-t₀)) - (C₀/α) cosh(α(T-t₀)) (outer circle).
fn boundary_system(alpha: f64, t0: f64, t_len: f64, c0: f64) -> (f64, f64) {
    let x = alpha * t0;
    let y = alpha * (t_len - t0);
    (
        alpha * x.tanh() - c0 / alpha * x.cosh(),
        alpha * y.tanh() - c0 / alpha * y.cosh(),
    )
}

fn boundary_jacobian(alpha: f64, t0: f64, t_len: f64, c0: f64) -> [[f64; 2]; 2] {
    let x = alpha * t0;
    let y = alpha * (t_len - t0);
    let sech2 = |u: f64| {
        let c = u.cosh();
        1.0 / (c * c)
    };
    let dg1_da = x.tanh() + alpha * t0 * sech2(x) + c0 / (alpha * alpha) * x.cosh()
        - c0 * t0 / alpha * x.sinh();
    let dg1_dt = alpha * alpha * sech2(x) - c0 * x.sinh();
    let ty = t_len - t0;
    let dg2_da = y.tanh() + alpha * ty * sech2(y) + c0 / (alpha * alpha) * y.cosh()
        - c0 * ty / alpha * y.sinh();
    let dg2_dt = -(alpha * alpha * sech2(y)) + c0 * y.sinh();
    [[dg1_da, dg1_dt], [dg2_da, dg2_dt]]
}

/// Solve the two boundary equations by damped Newton. Seeds are tried in
/// order; divergence from all of them reports no symmetric solution for
/// this (R, C₀) pair.
pub fn solve_symmetric(problem: &LiouvilleProblem) -> Result<SymmetricSolution, LiouvilleError> {
    let t_len = problem.r_outer().ln();
    let c0 = problem.c0();
    for seed_alpha in [1.0, 0.5, 2.0, 4.0, 0.25, 8.0] {
        if let Some((alpha, t0)) = newton_2d(seed_alpha, t_len / 2.0, t_len, c0) {
            return Ok(SymmetricSolution {
                alpha,
                t0,
                c0,
                r_outer: problem.r_outer(),
            });
        }
    }
    Err(LiouvilleError::NoSymmetricSolution {
        r_outer: problem.r_outer(),
        c0,
    })
}

fn newton_2d(mut alpha: f64, mut t0: f64, t_len: f64, c0: f64) -> Option<(f64, f64)> {
    let norm = |g: (f64, f64)| g.0.abs().max(g.1.abs());
    let mut g = boundary_system(alpha, t0, t_len, c0);
    for _ in 0..100 {
        if norm(g) < 1e-14 {
            return Some((alpha, t0));
        }
        let j = boundary_jacobian(alpha, t0, t_len, c0);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let da = (-g.0 * j[1][1] + g.1 * j[0][1]) / det;
        let dt = (-j[0][0] * g.1 + j[1][0] * g.0) / det;
        let mut lambda = 1.0;
        let mut advanced = false;
        while lambda > 1e-8 {
            let (na, nt) = (alpha + lambda * da, t0 + lambda * dt);
            if na > 1e-8 {
                let ng = boundary_system(na, nt, t_len, c0);
                if norm(ng) < norm(g) {
                    alpha = na;
                    t0 = nt;
                    g = ng;
                    advanced = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !advanced {
            return None;
        }
    }
    if norm(g) < 1e-12 {
        Some((alpha, t0))
    } else {
        None
    }
}
