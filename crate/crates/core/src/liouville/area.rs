//! The free-boundary area identity 2|Σ| = |∂Σ| in Liouville variables:
//! 2∫∫ (1/r³)e^{-v} dr dθ = ∮ e^{-v/2}|_{r=1} dθ + (1/R)∮ e^{-v/2}|_{r=R} dθ.
//!
//! The check filters solutions compatible with a single ball (O₁ = O₂)
//! rather than two distinct spheres.

use serde::Serialize;

use crate::geomkit::quad::{integrate_chart, periodic_trapezoid};
use crate::geomkit::RealField;

#[derive(Debug, Clone, Serialize)]
pub struct AreaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Evaluate both sides on an annulus field. In (t, θ) the area integrand
/// is e^{-2t}e^{-v}; quadrature is trapezoidal, endpoint-corrected in t.
pub fn area_perimeter_check_field(v: &RealField) -> AreaCheck {
    let sh = v.shape();
    assert!(
        v.chart().is_annulus(),
        "area identity lives on the annulus chart"
    );
    let integrand: Vec<f64> = (0..sh.n0)
        .flat_map(|i| {
            let w = (-2.0 * sh.x0(i)).exp();
            (0..sh.n1).map(move |j| (i, j, w))
        })
        .map(|(i, j, w)| w * (-v.at(i, j)).exp())
        .collect();
    let lhs = 2.0 * integrate_chart(&integrand, v.chart());

    let inner: Vec<f64> = (0..sh.n1).map(|j| (-0.5 * v.at(0, j)).exp()).collect();
    let outer: Vec<f64> = (0..sh.n1)
        .map(|j| (-0.5 * v.at(sh.n0 - 1, j)).exp())
        .collect();
    let r_outer = sh.x0(sh.n0 - 1).exp();
    let rhs = periodic_trapezoid(&inner, sh.h1) + periodic_trapezoid(&outer, sh.h1) / r_outer;
    AreaCheck {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{AnnulusSpec, Chart};

    #[test]
    fn catenoid_closed_form_satisfies_the_identity() {
        let cat = CriticalCatenoid::new();
        let sym = cat.symmetric_solution();
        let chart = Chart::Annulus(AnnulusSpec::new(cat.r_outer, 129, 256).unwrap());
        let check = area_perimeter_check_field(&sym.evaluate(&chart));
        assert!(check.gap < 1e-6, "gap {}", check.gap);
        // both sides equal twice the catenoid area
        let exact = 2.0 * cat.area();
        assert!((check.lhs - exact).abs() < 1e-6);
        assert!((check.rhs - exact).abs() < 1e-10);
    }

    #[test]
    fn gap_shrinks_at_second_order_or_better() {
        let cat = CriticalCatenoid::new();
        let sym = cat.symmetric_solution();
        let mut gaps = Vec::new();
        for (n_r, n_t) in [(65, 128), (129, 256), (257, 512)] {
            let chart = Chart::Annulus(AnnulusSpec::new(cat.r_outer, n_r, n_t).unwrap());
            gaps.push(area_perimeter_check_field(&sym.evaluate(&chart)).gap);
        }
        let order1 = (gaps[0] / gaps[1]).log2();
        let order2 = (gaps[1] / gaps[2]).log2();
        assert!(
            order1 >= 1.9 && order2 >= 1.9,
            "orders {order1}, {order2} (gaps {gaps:?})"
        );
    }

    #[test]
    fn non_solution_field_shows_a_gap() {
        let chart = Chart::Annulus(AnnulusSpec::new(4.0, 65, 128).unwrap());
        let v = RealField::from_fn(chart.clone(), |i, _| -0.7 * chart.shape().x0(i));
        let check = area_perimeter_check_field(&v);
        assert!(check.gap > 1e-2, "expected a visible gap, got {}", check.gap);
    }
}
