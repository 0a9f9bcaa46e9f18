//! The Liouville boundary value problem on the annulus:
//! Δv + 2C₀²e^v = 0 with the nonlinear Robin conditions
//! ∂v/∂n = 2e^{-v/2} - 2 on |z| = 1 and ∂v/∂n = (2/R²)e^{-v/2} + 2/R on
//! |z| = R (n the inner unit normal), discretized at ε = 0 on the closed
//! annulus with boundary conditions as Newton rows.

mod area;
mod lift;
pub mod linear;
mod solver;
mod symmetric;

pub use area::{area_perimeter_check_field, AreaCheck};
pub use lift::{lift_to_slab, lift_to_slab_copies, q_function, q_holomorphy_residual};
pub use solver::{boundary_residual, residual_field, solve_full, solve_full_with, Initial, NewtonStep};
pub use symmetric::{solve_symmetric, SymmetricSolution};

use serde::Serialize;
use thiserror::Error;

use crate::geomkit::{AnnulusSpec, Chart, GeomError, RealField};

#[derive(Debug, Error)]
pub enum LiouvilleError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("no symmetric solution found for R = {r_outer}, C0 = {c0}")]
    NoSymmetricSolution { r_outer: f64, c0: f64 },
    #[error("Newton diverged after {iterations} iterations (residual {residual:.3e})")]
    Diverged { iterations: usize, residual: f64 },
    #[error("e^v overflow guard tripped (v exceeds the cap)")]
    Overflow,
    #[error("linear solver breakdown")]
    LinearBreakdown,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Problem data for E[R, 0, C₀]. The equation depends on C₀ only through
/// C₀², so the magnitude is stored; the sign is consumed downstream by the
/// rebuild orientation convention.
#[derive(Debug, Clone)]
pub struct LiouvilleProblem {
    grid: AnnulusSpec,
    c0: f64,
}

impl LiouvilleProblem {
    pub fn new(r_outer: f64, c0: f64, n_r: usize, n_theta: usize) -> Result<Self, LiouvilleError> {
        if c0 == 0.0 || !c0.is_finite() {
            return Err(LiouvilleError::InvalidProblem(
                "C0 = 0 forces the flat degenerate case; rejected".into(),
            ));
        }
        let grid = AnnulusSpec::new(r_outer, n_r, n_theta)
            .map_err(|e| LiouvilleError::InvalidProblem(e.to_string()))?;
        Ok(LiouvilleProblem {
            grid,
            c0: c0.abs(),
        })
    }

    pub fn grid(&self) -> &AnnulusSpec {
        &self.grid
    }

    pub fn chart(&self) -> Chart {
        Chart::Annulus(self.grid.clone())
    }

    pub fn r_outer(&self) -> f64 {
        self.grid.r_outer
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }
}

/// Accepted solution of the discretized problem with its certificates.
#[derive(Debug, Clone)]
pub struct LiouvilleSolution {
    pub problem: LiouvilleProblem,
    pub v: RealField,
    pub residual_interior: f64,
    pub residual_boundary: f64,
    pub newton_trace: Vec<NewtonStep>,
}

impl LiouvilleSolution {
    pub fn area_perimeter_check(&self) -> AreaCheck {
        area_perimeter_check_field(&self.v)
    }
}

/// Summary written into run reports.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub r_outer: f64,
    pub c0: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub iterations: usize,
    pub residual_interior: f64,
    pub residual_boundary: f64,
    pub area_lhs: f64,
    pub area_rhs: f64,
    pub area_gap: f64,
}

impl SolveReport {
    pub fn from_solution(sol: &LiouvilleSolution) -> Self {
        let area = sol.area_perimeter_check();
        SolveReport {
            r_outer: sol.problem.r_outer(),
            c0: sol.problem.c0(),
            n_r: sol.problem.grid().n_r,
            n_theta: sol.problem.grid().n_theta,
            iterations: sol.newton_trace.len(),
            residual_interior: sol.residual_interior,
            residual_boundary: sol.residual_boundary,
            area_lhs: area.lhs,
            area_rhs: area.rhs,
            area_gap: area.gap,
        }
    }
}
