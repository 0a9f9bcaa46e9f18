//! The critical catenoid: the exact reference solution.
//!
//! The boundary parameter s₀ solves s·tanh s = 1; the annulus modulus is
//! R = e^{2s₀} and the unit-ball scale a = (cosh²s₀ + s₀²)^{-1/2}. Two
//! independent root-finders (bisection and Newton) cross-check s₀, and all
//! derived data — Weierstrass data on both charts, the symmetric Liouville
//! solution, exact immersion samplers — come from these constants.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::geomkit::{AnnulusSpec, Chart, ComplexField, SlabSpec};
use crate::liouville::SymmetricSolution;
use crate::weierstrass::{SurfacePatch, WeierstrassData};

fn balance(s: f64) -> f64 {
    s * s.tanh() - 1.0
}

/// s₀ by bisection on [1, 1.5]; the bracket holds since 1·tanh 1 < 1 and
/// 1.5·tanh 1.5 > 1.
pub fn critical_s0_bisection() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 1.5f64);
    debug_assert!(balance(lo) < 0.0 && balance(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// s₀ by Newton iteration; independent of the bisection path.
pub fn critical_s0_newton() -> f64 {
    let mut s = 1.2f64;
    for _ in 0..60 {
        let f = balance(s);
        let t = s.tanh();
        let fp = t + s * (1.0 - t * t);
        let next = s - f / fp;
        if (next - s).abs() < 1e-16 {
            return next;
        }
        s = next;
    }
    s
}

/// Reference constants of the critical catenoid in the unit ball.
#[derive(Debug, Clone, Copy)]
pub struct CriticalCatenoid {
    /// Root of s·tanh s = 1.
    pub s0: f64,
    /// Annulus modulus R = e^{2s₀}.
    pub r_outer: f64,
    /// Scale a with a²(cosh²s₀ + s₀²) = 1.
    pub scale: f64,
    /// Hopf constant C₀ = a for the orientation used throughout.
    pub c0: f64,
}

impl CriticalCatenoid {
    pub fn new() -> Self {
        let s0 = critical_s0_bisection();
        let a = 1.0 / (s0.cosh().powi(2) + s0 * s0).sqrt();
        CriticalCatenoid {
            s0,
            r_outer: (2.0 * s0).exp(),
            scale: a,
            c0: a,
        }
    }

    /// Defining residuals; both are < 1e-12 for the computed constants.
    pub fn substitution_residuals(&self) -> (f64, f64) {
        let r1 = balance(self.s0).abs();
        let r2 = (self.scale * self.scale * (self.s0.cosh().powi(2) + self.s0 * self.s0) - 1.0)
            .abs();
        (r1, r2)
    }

    /// The symmetric Liouville solution: α = 1, t₀ = (log R)/2 = s₀.
    pub fn symmetric_solution(&self) -> SymmetricSolution {
        SymmetricSolution {
            alpha: 1.0,
            t0: self.s0,
            c0: self.c0,
            r_outer: self.r_outer,
        }
    }

    /// v(t) of the exact solution.
    pub fn exact_v(&self, t: f64) -> f64 {
        self.symmetric_solution().v(t)
    }

    /// ṽ(Im ξ) of the exact lifted solution (the sech² profile).
    pub fn exact_vtilde(&self, t: f64) -> f64 {
        self.symmetric_solution().w(t)
    }

    /// Annulus-chart Weierstrass data g = √R/z, ω̂ = -a/√R.
    pub fn annulus_data(&self, spec: AnnulusSpec) -> WeierstrassData {
        let chart = Chart::Annulus(spec);
        let sqrt_r = self.r_outer.sqrt();
        let g = ComplexField::from_fn(chart.clone(), |i, j| sqrt_r / chart.zeta(i, j));
        let om = ComplexField::from_fn(chart.clone(), |_, _| {
            Complex64::new(-self.scale / sqrt_r, 0.0)
        });
        WeierstrassData::new(g, om).expect("same chart")
    }

    /// Slab-chart data from the h(ξ) = (√R/a)e^{iξ} family:
    /// g = C₀h = √R e^{iξ}, ω̂ = -1/h_ξ = (ia/√R) e^{-iξ}.
    pub fn slab_data(&self, spec: SlabSpec) -> WeierstrassData {
        let chart = Chart::Slab(spec);
        let sqrt_r = self.r_outer.sqrt();
        let i_unit = Complex64::new(0.0, 1.0);
        let g = ComplexField::from_fn(chart.clone(), |i, j| {
            sqrt_r * (i_unit * chart.zeta(i, j)).exp()
        });
        let om = ComplexField::from_fn(chart.clone(), |i, j| {
            i_unit * (self.scale / sqrt_r) * (-i_unit * chart.zeta(i, j)).exp()
        });
        WeierstrassData::new(g, om).expect("same chart")
    }

    /// Exact immersion in annulus coordinates; this is the primitive of the
    /// annulus-chart data with the symmetric constant of integration:
    /// X(t, θ) = (-a cosh s cos θ, a cosh s sin θ, -a s), s = t - s₀.
    pub fn annulus_position(&self, t: f64, theta: f64) -> Vector3<f64> {
        let s = t - self.s0;
        let a = self.scale;
        Vector3::new(
            -a * s.cosh() * theta.cos(),
            a * s.cosh() * theta.sin(),
            -a * s,
        )
    }

    /// Reference catenoid sampled on slab nodes through the covering
    /// relation θ = -Re ξ: a(cosh s cos θ, cosh s sin θ, s).
    pub fn slab_reference_position(&self, u: f64, t: f64) -> Vector3<f64> {
        let s = t - self.s0;
        let a = self.scale;
        Vector3::new(a * s.cosh() * u.cos(), -a * s.cosh() * u.sin(), a * s)
    }

    fn slab_reference_normal(&self, u: f64, t: f64) -> Vector3<f64> {
        let s = t - self.s0;
        Vector3::new(-u.cos(), u.sin(), s.sinh()) / s.cosh()
    }

    /// Conformal factor λ(t) on the annulus chart (ds = λ|dz|).
    pub fn lambda_annulus(&self, t: f64) -> f64 {
        self.scale * (t - self.s0).cosh() * (-t).exp()
    }

    /// Conformal factor Λ(t) on the slab chart (ds = Λ|dξ|).
    pub fn lambda_slab(&self, t: f64) -> f64 {
        self.scale * (t - self.s0).cosh()
    }

    /// Exact patch on the annulus grid (positions, stereographic normals,
    /// λ, Hopf coefficient Φ = a/z²).
    pub fn analytic_annulus_patch(&self, spec: AnnulusSpec) -> SurfacePatch {
        let chart = Chart::Annulus(spec);
        let sh = chart.shape();
        let sqrt_r = self.r_outer.sqrt();
        let mut positions = Vec::with_capacity(sh.len());
        let mut normals = Vec::with_capacity(sh.len());
        let mut lambda = Vec::with_capacity(sh.len());
        let mut hopf = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let (t, th) = (sh.x0(i), sh.x1(j));
                positions.push(self.annulus_position(t, th));
                let g = sqrt_r / chart.zeta(i, j);
                normals.push(crate::weierstrass::stereographic_normal(g));
                lambda.push(self.lambda_annulus(t));
                hopf.push(self.scale / chart.zeta(i, j).powi(2));
            }
        }
        SurfacePatch {
            chart,
            positions,
            normals,
            lambda,
            hopf,
            closure_defect: 0.0,
        }
    }

    /// Exact fundamental piece on the slab grid, centered in the unit ball.
    pub fn analytic_slab_patch(&self, spec: SlabSpec) -> SurfacePatch {
        let chart = Chart::Slab(spec);
        let sh = chart.shape();
        let mut positions = Vec::with_capacity(sh.len());
        let mut normals = Vec::with_capacity(sh.len());
        let mut lambda = Vec::with_capacity(sh.len());
        let hopf = vec![Complex64::new(-self.c0, 0.0); sh.len()];
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let (t, u) = (sh.x0(i), sh.x1(j));
                positions.push(self.slab_reference_position(u, t));
                normals.push(self.slab_reference_normal(u, t));
                lambda.push(self.lambda_slab(t));
            }
        }
        SurfacePatch {
            chart,
            positions,
            normals,
            lambda,
            hopf,
            closure_defect: 0.0,
        }
    }

    /// |Σ| = 2πa²(s₀ + sinh s₀ cosh s₀); the identity 2|Σ| = |∂Σ| holds
    /// exactly at the critical parameters.
    pub fn area(&self) -> f64 {
        std::f64::consts::TAU
            * self.scale
            * self.scale
            * (self.s0 + self.s0.sinh() * self.s0.cosh())
    }

    /// Length of each boundary circle: 2πa cosh s₀.
    pub fn boundary_length(&self) -> f64 {
        std::f64::consts::TAU * self.scale * self.s0.cosh()
    }

    /// |∫_Γ ν ds| on one boundary circle: the flux is vertical with
    /// magnitude 2πa²s₀cosh s₀ (ν = Y on the boundary).
    pub fn boundary_flux_magnitude(&self) -> f64 {
        std::f64::consts::TAU * self.scale * self.scale * self.s0 * self.s0.cosh()
    }
}

impl Default for CriticalCatenoid {
    fn default() -> Self {
        Self::new()
    }
}
