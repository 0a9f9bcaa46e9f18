//! Hopf differential extraction: Φ = (F_zz·N) in the annulus chart and the
//! holomorphic function f = z²Φ, whose real constancy characterizes the
//! free-boundary annular structure.

use num_complex::Complex64;

use super::DiagError;
use crate::geomkit::{ComplexField, GridShape};
use crate::numerics::FdOrder;
use crate::weierstrass::{conformality_residual, SurfacePatch};

#[derive(Debug, Clone)]
pub struct HopfData {
    /// Φ = F_zz·N per node.
    pub phi: ComplexField,
    /// f = z²Φ per node.
    pub f: ComplexField,
    /// Mean of Re f over the chart.
    pub c0_est: f64,
    /// max |f - C0_est|.
    pub deviation: f64,
    /// max |Im f|.
    pub im_max: f64,
    /// max |∂f/∂z̄| over interior nodes (holomorphy certificate).
    pub holomorphy_residual: f64,
}

/// Extract the Hopf coefficient by Wirtinger differentiation of the
/// positions dotted with the normal; fourth-order stencils keep the
/// deviation gates reachable.
///
/// Normalization: Φ is reported in the quadratic-differential convention
/// of the Weierstrass data, Φ = g_ζ·ω̂, under which f = z²Φ equals the
/// rebuild constant C₀ on free-boundary annuli. With the crate's
/// south-pole stereographic normal the raw second derivative satisfies
/// Φ = -2·(F_zz·N): the factor 2 converts the (2,0)-part to the full
/// coefficient and the sign accounts for the antipodal normal implicit in
/// the classical identity σ = Re{dg·ω}.
pub fn hopf_extract(patch: &SurfacePatch) -> Result<HopfData, DiagError> {
    if !patch.chart.is_annulus() {
        return Err(DiagError::NotAnnulus);
    }
    let conf = conformality_residual(patch);
    if conf > 0.05 {
        return Err(DiagError::NotConformal(conf));
    }
    let sh = patch.shape();
    let mut phi_vals = vec![Complex64::default(); sh.len()];
    for k in 0..3 {
        let comp = ComplexField::new(
            patch.chart.clone(),
            patch
                .positions
                .iter()
                .map(|p| Complex64::new(p[k], 0.0))
                .collect(),
        )
        .expect("shape fixed");
        let fzz = comp
            .d_dz_order(FdOrder::Four)
            .d_dz_order(FdOrder::Four);
        for idx in 0..sh.len() {
            phi_vals[idx] -= 2.0 * fzz.values()[idx] * patch.normals[idx][k];
        }
    }
    let phi = ComplexField::new(patch.chart.clone(), phi_vals).expect("shape fixed");
    let f_vals: Vec<Complex64> = (0..sh.n0)
        .flat_map(|i| (0..sh.n1).map(move |j| (i, j)))
        .map(|(i, j)| {
            let z = patch.chart.zeta(i, j);
            z * z * phi.at(i, j)
        })
        .collect();
    let f = ComplexField::new(patch.chart.clone(), f_vals).expect("shape fixed");

    let n = sh.len() as f64;
    let c0_est = f.values().iter().map(|v| v.re).sum::<f64>() / n;
    let deviation = f
        .values()
        .iter()
        .map(|v| (v - Complex64::new(c0_est, 0.0)).norm())
        .fold(0.0f64, f64::max);
    let im_max = f.values().iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
    let holomorphy_residual = interior_max(&f.d_dzbar_order(FdOrder::Four), &sh, 3);
    Ok(HopfData {
        phi,
        f,
        c0_est,
        deviation,
        im_max,
        holomorphy_residual,
    })
}

fn interior_max(field: &ComplexField, sh: &GridShape, margin: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in margin..sh.n0.saturating_sub(margin) {
        for j in 0..sh.n1 {
            worst = worst.max(field.at(i, j).norm());
        }
    }
    worst
}

/// Compact fourth-order periodic first derivative (Padé scheme
/// f'_{k-1} + 4f'_k + f'_{k+1} = 3(f_{k+1} - f_{k-1})/h).
pub(crate) fn compact_periodic_d1(f: &[Complex64], h: f64) -> Vec<Complex64> {
    compact_periodic(f, h, 1)
}

/// Compact fourth-order periodic second derivative
/// (f''_{k-1} + 10f''_k + f''_{k+1} = 12(f_{k+1} - 2f_k + f_{k-1})/h²).
pub(crate) fn compact_periodic_d2(f: &[Complex64], h: f64) -> Vec<Complex64> {
    compact_periodic(f, h, 2)
}

fn compact_periodic(f: &[Complex64], h: f64, m: usize) -> Vec<Complex64> {
    let n = f.len();
    let (off, diag, rhs_of): (f64, f64, Box<dyn Fn(usize) -> Complex64>) = match m {
        1 => (
            1.0,
            4.0,
            Box::new(move |k: usize| {
                let (kp, km) = ((k + 1) % n, (k + n - 1) % n);
                (f[kp] - f[km]) * (3.0 / h)
            }),
        ),
        2 => (
            1.0,
            10.0,
            Box::new(move |k: usize| {
                let (kp, km) = ((k + 1) % n, (k + n - 1) % n);
                (f[kp] - f[k] * 2.0 + f[km]) * (12.0 / (h * h))
            }),
        ),
        _ => unreachable!("only first and second compact derivatives"),
    };
    // cyclic tridiagonal solve on real and imaginary parts
    let a = vec![off; n];
    let b = vec![diag; n];
    let c = vec![off; n];
    let rhs: Vec<Complex64> = (0..n).map(|k| rhs_of(k)).collect();
    let re: Vec<f64> = rhs.iter().map(|v| v.re).collect();
    let im: Vec<f64> = rhs.iter().map(|v| v.im).collect();
    let xre = crate::numerics::spline::solve_cyclic_tridiag(&a, &b, &c, &re);
    let xim = crate::numerics::spline::solve_cyclic_tridiag(&a, &b, &c, &im);
    (0..n).map(|k| Complex64::new(xre[k], xim[k])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{AnnulusSpec, Chart};
    use crate::weierstrass::{integrate_immersion, WeierstrassData};
    use nalgebra::Vector3;

    #[test]
    fn critical_catenoid_exact_patch_has_constant_real_f() {
        let cat = CriticalCatenoid::new();
        let spec = AnnulusSpec::new(cat.r_outer, 129, 256).unwrap();
        let patch = cat.analytic_annulus_patch(spec);
        let data = hopf_extract(&patch).unwrap();
        assert!((data.c0_est - cat.c0).abs() < 1e-5, "C0 est {}", data.c0_est);
        assert!(data.deviation < 1e-5, "deviation {}", data.deviation);
        assert!(data.im_max < 1e-5);
    }

    #[test]
    fn integrated_catenoid_patch_matches_rebuild_c0() {
        let cat = CriticalCatenoid::new();
        let spec = AnnulusSpec::new(cat.r_outer, 129, 256).unwrap();
        let wdata = cat.annulus_data(spec);
        let patch = integrate_immersion(&wdata, (0, 0), cat.annulus_position(0.0, 0.0)).unwrap();
        let data = hopf_extract(&patch).unwrap();
        assert!((data.c0_est - cat.c0).abs() < 1e-4, "C0 est {}", data.c0_est);
    }

    #[test]
    fn flat_patch_has_vanishing_hopf_field() {
        let spec = AnnulusSpec::new(2.0, 33, 64).unwrap();
        let chart = Chart::Annulus(spec);
        let sh = chart.shape();
        let mut positions = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let z = chart.zeta(i, j);
                positions.push(Vector3::new(z.re, z.im, 0.0));
            }
        }
        let lambda = (0..sh.len()).map(|_| 1.0).collect();
        let patch = crate::weierstrass::SurfacePatch {
            chart,
            positions,
            normals: vec![Vector3::z(); sh.len()],
            lambda,
            hopf: vec![Complex64::default(); sh.len()],
            closure_defect: 0.0,
        };
        let data = hopf_extract(&patch).unwrap();
        assert!(data.c0_est.abs() < 1e-8);
        assert!(data.deviation < 1e-7);
    }

    #[test]
    fn enneper_restriction_is_the_negative_control() {
        // g = z, ω̂ = 1: Φ = 1, f = z², decidedly non-constant
        let spec = AnnulusSpec::new(2.0, 65, 128).unwrap();
        let chart = Chart::Annulus(spec);
        let g = ComplexField::from_fn(chart.clone(), |i, j| chart.zeta(i, j));
        let om = ComplexField::from_fn(chart.clone(), |_, _| Complex64::new(1.0, 0.0));
        let data = WeierstrassData::new(g, om).unwrap();
        let patch = integrate_immersion(&data, (0, 0), Vector3::zeros()).unwrap();
        let hopf = hopf_extract(&patch).unwrap();
        assert!(hopf.deviation > 0.1, "deviation {}", hopf.deviation);
        // f = z² is holomorphic nonetheless
        assert!(hopf.holomorphy_residual < 1e-2);
    }

    #[test]
    fn hopf_holomorphy_residual_refines_away() {
        let cat = CriticalCatenoid::new();
        let mut residuals = Vec::new();
        for (nr, nt) in [(65, 128), (129, 256)] {
            let spec = AnnulusSpec::new(cat.r_outer, nr, nt).unwrap();
            let wdata = cat.annulus_data(spec);
            let patch =
                integrate_immersion(&wdata, (0, 0), cat.annulus_position(0.0, 0.0)).unwrap();
            residuals.push(hopf_extract(&patch).unwrap().holomorphy_residual);
        }
        let order = (residuals[0] / residuals[1]).log2();
        assert!(order >= 1.9, "holomorphy order {order} ({residuals:?})");
    }

    #[test]
    fn compact_derivatives_hit_fourth_order_on_modes() {
        let n = 64;
        let h = std::f64::consts::TAU / n as f64;
        let f: Vec<Complex64> = (0..n)
            .map(|k| (Complex64::new(0.0, 3.0) * (k as f64 * h)).exp())
            .collect();
        let d1 = compact_periodic_d1(&f, h);
        let d2 = compact_periodic_d2(&f, h);
        let mut worst1 = 0.0f64;
        let mut worst2 = 0.0f64;
        for k in 0..n {
            let exact1 = Complex64::new(0.0, 3.0) * f[k];
            let exact2 = Complex64::new(-9.0, 0.0) * f[k];
            worst1 = worst1.max((d1[k] - exact1).norm());
            worst2 = worst2.max((d2[k] - exact2).norm());
        }
        assert!(worst1 < 2e-4, "d1 error {worst1}");
        assert!(worst2 < 2e-3, "d2 error {worst2}");
    }
}
