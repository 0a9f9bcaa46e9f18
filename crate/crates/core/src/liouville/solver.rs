//! Damped Newton iteration on the discretized boundary value problem.

use serde::Serialize;

use super::linear::{bicgstab, JacobianOps, ModalPreconditioner};
use super::{solve_symmetric, LiouvilleError, LiouvilleProblem, LiouvilleSolution};
use crate::geomkit::RealField;
use crate::tolerances::{
    EXP_OVERFLOW_CAP, LINEAR_TOL, NEWTON_DAMPING_FLOOR, NEWTON_MAX_ITER, NEWTON_TOL,
};

/// Initial guess policy for the full solver.
#[derive(Debug, Clone)]
pub enum Initial {
    /// Seed from the symmetric closed form; falls back to `Constant(None)`
    /// when no symmetric root exists.
    Symmetric,
    /// Constant field. `None` picks v̄ = 0, the value for which a flat
    /// radial profile satisfies the inner boundary condition exactly.
    Constant(Option<f64>),
    /// Caller-supplied field on the problem grid.
    Field(RealField),
}

/// One accepted Newton step.
#[derive(Debug, Clone, Serialize)]
pub struct NewtonStep {
    /// Max-norm residual before the step.
    pub residual: f64,
    /// Max-norm of the damped update actually taken.
    pub step_norm: f64,
    /// Damping factor accepted (1 = full step).
    pub damping: f64,
    /// Krylov iterations spent on the linear solve (0 = direct hit).
    pub linear_iters: usize,
}

/// Residual of the discretized system at `v`: interior stencil rows plus
/// the two nonlinear Robin boundary rows.
pub fn residual_field(v: &RealField, problem: &LiouvilleProblem) -> RealField {
    let sh = v.shape();
    let (n0, n1) = (sh.n0, sh.n1);
    let (h0, h1) = (sh.h0, sh.h1);
    let c2 = 2.0 * problem.c0() * problem.c0();
    let r_outer = problem.r_outer();
    let vals = v.values();
    let mut out = vec![0.0; sh.len()];
    for i in 1..n0 - 1 {
        let ew = (-2.0 * sh.x0(i)).exp();
        for j in 0..n1 {
            let jm = (j + n1 - 1) % n1;
            let jp = (j + 1) % n1;
            let idx = sh.idx(i, j);
            let lap = (vals[sh.idx(i - 1, j)] - 2.0 * vals[idx] + vals[sh.idx(i + 1, j)])
                / (h0 * h0)
                + (vals[sh.idx(i, jm)] - 2.0 * vals[idx] + vals[sh.idx(i, jp)]) / (h1 * h1);
            out[idx] = ew * lap + c2 * vals[idx].exp();
        }
    }
    let n = n0 - 1;
    let outer_w = (-sh.x0(n)).exp(); // 1/R
    for j in 0..n1 {
        let v0 = vals[sh.idx(0, j)];
        let vt0 =
            (-3.0 * v0 + 4.0 * vals[sh.idx(1, j)] - vals[sh.idx(2, j)]) / (2.0 * h0);
        // t = 0 at the inner circle, so v_r = v_t there
        out[sh.idx(0, j)] = vt0 - (2.0 * (-0.5 * v0).exp() - 2.0);

        let vn = vals[sh.idx(n, j)];
        let vtn = (3.0 * vn - 4.0 * vals[sh.idx(n - 1, j)] + vals[sh.idx(n - 2, j)])
            / (2.0 * h0);
        let v_r = outer_w * vtn;
        out[sh.idx(n, j)] =
            -v_r - (2.0 / (r_outer * r_outer) * (-0.5 * vn).exp() + 2.0 / r_outer);
    }
    RealField::new(v.chart().clone(), out).expect("shape fixed")
}

/// Per-node boundary residuals (inner, outer) of the two Robin conditions.
pub fn boundary_residual(v: &RealField, problem: &LiouvilleProblem) -> (Vec<f64>, Vec<f64>) {
    let f = residual_field(v, problem);
    let sh = v.shape();
    let inner = (0..sh.n1).map(|j| f.at(0, j)).collect();
    let outer = (0..sh.n1).map(|j| f.at(sh.n0 - 1, j)).collect();
    (inner, outer)
}

fn jacobian_ops(v: &RealField, problem: &LiouvilleProblem) -> JacobianOps {
    let sh = v.shape();
    let c2 = 2.0 * problem.c0() * problem.c0();
    let r_outer = problem.r_outer();
    let vals = v.values();
    let radial_weight: Vec<f64> = (0..sh.n0).map(|i| (-2.0 * sh.x0(i)).exp()).collect();
    let mut interior_diag = vec![0.0; sh.len()];
    for i in 1..sh.n0 - 1 {
        for j in 0..sh.n1 {
            let idx = sh.idx(i, j);
            interior_diag[idx] = c2 * vals[idx].exp();
        }
    }
    let inner_diag: Vec<f64> = (0..sh.n1)
        .map(|j| (-0.5 * vals[sh.idx(0, j)]).exp())
        .collect();
    let outer_diag: Vec<f64> = (0..sh.n1)
        .map(|j| (-0.5 * vals[sh.idx(sh.n0 - 1, j)]).exp() / (r_outer * r_outer))
        .collect();
    JacobianOps {
        sh,
        radial_weight,
        interior_diag,
        inner_diag,
        outer_diag,
        inner_scale: 1.0,
        outer_scale: -1.0 / r_outer,
    }
}

fn split_residual(f: &RealField) -> (f64, f64) {
    let sh = f.shape();
    let mut interior = 0.0f64;
    let mut boundary = 0.0f64;
    for i in 0..sh.n0 {
        for j in 0..sh.n1 {
            let r = f.at(i, j).abs();
            if i == 0 || i == sh.n0 - 1 {
                boundary = boundary.max(r);
            } else {
                interior = interior.max(r);
            }
        }
    }
    (interior, boundary)
}

fn initial_field(problem: &LiouvilleProblem, initial: Initial) -> Result<RealField, LiouvilleError> {
    match initial {
        Initial::Field(f) => {
            if f.shape() != problem.chart().shape() {
                return Err(LiouvilleError::InvalidProblem(
                    "initial field lives on a different grid".into(),
                ));
            }
            Ok(f)
        }
        Initial::Constant(value) => Ok(RealField::from_fn(problem.chart(), |_, _| {
            value.unwrap_or(0.0)
        })),
        Initial::Symmetric => match solve_symmetric(problem) {
            Ok(sym) => Ok(sym.evaluate(&problem.chart())),
            Err(_) => Ok(RealField::from_fn(problem.chart(), |_, _| 0.0)),
        },
    }
}

/// Damped Newton on F(v) = 0 with analytic Jacobian rows and direct/Krylov
/// linear steps. Accepts when the max-norm residual drops below the
/// configured tolerance.
pub fn solve_full(
    problem: &LiouvilleProblem,
    initial: Initial,
) -> Result<LiouvilleSolution, LiouvilleError> {
    solve_full_with(problem, initial, NEWTON_TOL, NEWTON_MAX_ITER)
}

pub fn solve_full_with(
    problem: &LiouvilleProblem,
    initial: Initial,
    tol: f64,
    max_iter: usize,
) -> Result<LiouvilleSolution, LiouvilleError> {
    let mut v = initial_field(problem, initial)?;
    if v.values().iter().any(|&x| x > EXP_OVERFLOW_CAP || !x.is_finite()) {
        return Err(LiouvilleError::Overflow);
    }
    let mut trace: Vec<NewtonStep> = Vec::new();
    let mut f = residual_field(&v, problem);
    let mut resid = f.max_abs();
    for _ in 0..max_iter {
        if resid < tol {
            let (ri, rb) = split_residual(&f);
            return Ok(LiouvilleSolution {
                problem: problem.clone(),
                v,
                residual_interior: ri,
                residual_boundary: rb,
                newton_trace: trace,
            });
        }
        let ops = jacobian_ops(&v, problem);
        let pre = ModalPreconditioner::build(&ops)?;
        let rhs: Vec<f64> = f.values().iter().map(|&x| -x).collect();
        let (delta, linear_iters) = bicgstab(&ops, &pre, &rhs, LINEAR_TOL, 400)?;

        let mut lambda = 1.0f64;
        let mut advanced = false;
        while lambda >= NEWTON_DAMPING_FLOOR {
            let mut trial = v.clone();
            let mut overflow = false;
            for (tv, d) in trial.values_mut().iter_mut().zip(&delta) {
                *tv += lambda * d;
                if *tv > EXP_OVERFLOW_CAP || !tv.is_finite() {
                    overflow = true;
                }
            }
            if !overflow {
                let trial_f = residual_field(&trial, problem);
                let trial_resid = trial_f.max_abs();
                if trial_resid < resid {
                    let step_norm = delta
                        .iter()
                        .map(|d| (lambda * d).abs())
                        .fold(0.0f64, f64::max);
                    trace.push(NewtonStep {
                        residual: resid,
                        step_norm,
                        damping: lambda,
                        linear_iters,
                    });
                    v = trial;
                    f = trial_f;
                    resid = trial_resid;
                    advanced = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !advanced {
            return Err(LiouvilleError::Diverged {
                iterations: trace.len(),
                residual: resid,
            });
        }
    }
    if resid < tol {
        let (ri, rb) = split_residual(&f);
        return Ok(LiouvilleSolution {
            problem: problem.clone(),
            v,
            residual_interior: ri,
            residual_boundary: rb,
            newton_trace: trace,
        });
    }
    Err(LiouvilleError::Diverged {
        iterations: trace.len(),
        residual: resid,
    })
}
