//! Lift to the universal cover and the developing-map diagnostic.

use num_complex::Complex64;

use super::LiouvilleSolution;
use crate::geomkit::{Chart, ComplexField, RealField, SlabSpec};

/// ṽ(ξ) = v(e^{-iξ}) + 2 Im ξ on the fundamental slab domain.
///
/// The identification is Im ξ = t, Re ξ = -θ, so the slab column at
/// Re ξ = u picks the annulus column θ = -u (mod 2π) and the lift is exact
/// node-to-node: the result is 2π-periodic in Re ξ by construction.
pub fn lift_to_slab(solution: &LiouvilleSolution) -> RealField {
    lift_to_slab_copies(solution, 1)
}

/// Lift across `copies` fundamental domains, Re ξ ∈ [0, 2πM].
pub fn lift_to_slab_copies(solution: &LiouvilleSolution, copies: usize) -> RealField {
    let grid = solution.problem.grid();
    let slab = SlabSpec::with_copies(grid.r_outer, grid.n_r, grid.n_theta + 1, copies)
        .expect("annulus spec already validated");
    lift_field_to_slab(&solution.v, slab)
}

/// Lift any annulus field; exposed for closed-form and synthetic inputs.
pub fn lift_field_to_slab(v: &RealField, slab: SlabSpec) -> RealField {
    let ann_sh = v.shape();
    let n1 = ann_sh.n1;
    let chart = Chart::Slab(slab);
    let sh = chart.shape();
    RealField::from_fn(chart.clone(), |i, j| {
        let theta_idx = (n1 - (j % n1)) % n1;
        v.at(i, theta_idx) + 2.0 * sh.x0(i)
    })
}

/// Developing-map quantity Q = ṽ_ξξ - ½(ṽ_ξ)².
///
/// Q is holomorphic exactly when ṽ solves the slab Liouville equation, so
/// its anti-holomorphy residual certifies consistency with the
/// representation ṽ = log 4|h_ξ|²/(1+C₀²|h|²)² without constructing h.
pub fn q_function(vtilde: &RealField) -> ComplexField {
    // fourth-order stencils: the constancy of Q on closed-form solutions
    // is checked to 1e-6, beyond second-order truncation at usable grids
    let vc = vtilde.complexify();
    let v_xi = vc.d_dz_order(crate::numerics::FdOrder::Four);
    let v_xixi = v_xi.d_dz_order(crate::numerics::FdOrder::Four);
    let values: Vec<Complex64> = v_xixi
        .values()
        .iter()
        .zip(v_xi.values())
        .map(|(a, b)| a - 0.5 * b * b)
        .collect();
    ComplexField::new(vtilde.chart().clone(), values).expect("shape fixed")
}

/// max |∂Q/∂ξ̄| over nodes at least `margin` layers away from every edge
/// (one-sided closures of a twice-differenced field are noisier; the same
/// margin must be used when comparing refinements).
pub fn q_holomorphy_residual(q: &ComplexField, margin: usize) -> f64 {
    let d = q.d_dzbar();
    let sh = q.shape();
    let mut worst = 0.0f64;
    for i in margin..sh.n0.saturating_sub(margin) {
        let j_range = if sh.periodic1 {
            0..sh.n1
        } else {
            margin..sh.n1.saturating_sub(margin)
        };
        for j in j_range {
            worst = worst.max(d.at(i, j).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::liouville::{solve_full, Initial, LiouvilleProblem};

    #[test]
    fn lift_of_symmetric_solution_is_the_sech_profile() {
        let cat = CriticalCatenoid::new();
        let problem = LiouvilleProblem::new(cat.r_outer, cat.c0, 65, 128).unwrap();
        let sol = solve_full(&problem, Initial::Symmetric).unwrap();
        let vt = lift_to_slab(&sol);
        let sym = cat.symmetric_solution();
        let sh = vt.shape();
        let mut worst = 0.0f64;
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                worst = worst.max((vt.at(i, j) - sym.w(sh.x0(i))).abs());
            }
        }
        // discrete solution ≈ closed form up to truncation error
        assert!(worst < 1e-3, "lift deviates by {worst}");
        // ṽ depends only on Im ξ
        for i in 0..sh.n0 {
            for j in 1..sh.n1 {
                assert!((vt.at(i, j) - vt.at(i, 0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lift_is_exactly_periodic_across_copies() {
        let cat = CriticalCatenoid::new();
        let problem = LiouvilleProblem::new(cat.r_outer, cat.c0, 17, 32).unwrap();
        // any field, not only solutions: periodicity is structural
        let chart = problem.chart();
        let ann_sh = chart.shape();
        let v = RealField::from_fn(chart.clone(), |i, j| {
            (ann_sh.x1(j) * 3.0).sin() + ann_sh.x0(i)
        });
        let sol = LiouvilleSolution {
            problem: problem.clone(),
            v,
            residual_interior: 0.0,
            residual_boundary: 0.0,
            newton_trace: vec![],
        };
        let vt = lift_to_slab_copies(&sol, 3);
        let sh = vt.shape();
        let per = 32;
        for i in 0..sh.n0 {
            for j in 0..sh.n1 - per {
                assert_eq!(vt.at(i, j), vt.at(i, j + per));
            }
        }
    }

    #[test]
    fn q_is_constant_alpha_sq_half_for_the_catenoid() {
        let cat = CriticalCatenoid::new();
        let sym = cat.symmetric_solution();
        let slab = SlabSpec::new(cat.r_outer, 129, 257).unwrap();
        let chart = Chart::Slab(slab);
        let vt = sym.evaluate_lift(&chart);
        let q = q_function(&vt);
        let sh = q.shape();
        let expected = 0.5 * sym.alpha * sym.alpha;
        let mut worst = 0.0f64;
        for i in 2..sh.n0 - 2 {
            for j in 2..sh.n1 - 2 {
                worst = worst.max((q.at(i, j) - Complex64::new(expected, 0.0)).norm());
            }
        }
        assert!(worst < 1e-6, "Q deviates from α²/2 by {worst}");
    }
}
