//! Sampled scalar fields on chart grids with finite-difference calculus.

use num_complex::Complex64;

use super::{Chart, GeomError, GridShape};
use crate::numerics::fd::{FieldScalar, StencilSet};
use crate::numerics::FdOrder;

/// A sampled function on a chart grid, row-major with the angular /
/// horizontal index fastest.
#[derive(Debug, Clone)]
pub struct Field<T> {
    chart: Chart,
    values: Vec<T>,
}

/// Real scalar field.
pub type RealField = Field<f64>;
/// Complex-valued field; houses g, ω̂, h, Φ, f as sampled functions.
pub type ComplexField = Field<Complex64>;

impl<T: FieldScalar> Field<T> {
    pub fn new(chart: Chart, values: Vec<T>) -> Result<Self, GeomError> {
        if values.len() != chart.len() {
            return Err(GeomError::ShapeMismatch {
                expected: chart.len(),
                got: values.len(),
            });
        }
        Ok(Field { chart, values })
    }

    pub fn from_fn(chart: Chart, f: impl Fn(usize, usize) -> T) -> Self {
        let sh = chart.shape();
        let mut values = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                values.push(f(i, j));
            }
        }
        Field { chart, values }
    }

    pub fn zeros(chart: Chart) -> Self {
        let n = chart.len();
        Field {
            chart,
            values: vec![T::default(); n],
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn shape(&self) -> GridShape {
        self.chart.shape()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.shape().idx(i, j)]
    }

    pub fn map<U: FieldScalar>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            chart: self.chart.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Derivative along axis 0 (t on the annulus, Im ξ on the slab).
    pub fn d_axis0(&self, order: FdOrder) -> Field<T> {
        self.diff_axis(0, 1, order)
    }

    /// Derivative along axis 1 (θ on the annulus, Re ξ on the slab).
    pub fn d_axis1(&self, order: FdOrder) -> Field<T> {
        self.diff_axis(1, 1, order)
    }

    pub fn d2_axis0(&self, order: FdOrder) -> Field<T> {
        self.diff_axis(0, 2, order)
    }

    pub fn d2_axis1(&self, order: FdOrder) -> Field<T> {
        self.diff_axis(1, 2, order)
    }

    fn diff_axis(&self, axis: usize, m: usize, order: FdOrder) -> Field<T> {
        let sh = self.shape();
        let mut out = vec![T::default(); sh.len()];
        if axis == 0 {
            let st = StencilSet::new(m, order, sh.h0);
            let mut col = vec![T::default(); sh.n0];
            for j in 0..sh.n1 {
                for i in 0..sh.n0 {
                    col[i] = self.values[sh.idx(i, j)];
                }
                let d = st.apply(&col, false);
                for i in 0..sh.n0 {
                    out[sh.idx(i, j)] = d[i];
                }
            }
        } else {
            let st = StencilSet::new(m, order, sh.h1);
            for i in 0..sh.n0 {
                let row = &self.values[i * sh.n1..(i + 1) * sh.n1];
                let d = st.apply(row, sh.periodic1);
                out[i * sh.n1..(i + 1) * sh.n1].copy_from_slice(&d);
            }
        }
        Field {
            chart: self.chart.clone(),
            values: out,
        }
    }
}

impl RealField {
    /// Raw Laplacian in chart coordinates: v_tt + v_θθ (annulus) or
    /// v_{Imξ Imξ} + v_{Reξ Reξ} (slab). On the annulus the caller divides
    /// by r² = e^{2t} when the flat-plane Laplacian is required.
    pub fn laplacian_raw(&self) -> RealField {
        let a = self.d2_axis0(FdOrder::Two);
        let b = self.d2_axis1(FdOrder::Two);
        let values = a
            .values
            .iter()
            .zip(b.values.iter())
            .map(|(x, y)| x + y)
            .collect();
        Field {
            chart: self.chart.clone(),
            values,
        }
    }

    /// Flat-plane Laplacian: e^{-2t}(v_tt + v_θθ) on the annulus, and the
    /// plain coordinate Laplacian on the slab where ξ is already Cartesian.
    pub fn laplacian_plane(&self) -> RealField {
        let mut raw = self.laplacian_raw();
        if self.chart.is_annulus() {
            let sh = raw.shape();
            for i in 0..sh.n0 {
                let scale = (-2.0 * sh.x0(i)).exp();
                for j in 0..sh.n1 {
                    raw.values[sh.idx(i, j)] *= scale;
                }
            }
        }
        raw
    }

    pub fn complexify(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

impl ComplexField {
    /// Wirtinger derivative with respect to the chart coordinate
    /// (∂/∂z on the annulus via the log-polar chain rule, ∂/∂ξ on the slab).
    pub fn d_dz(&self) -> ComplexField {
        self.wirtinger(false, FdOrder::Two)
    }

    /// Conjugate Wirtinger derivative; tends to zero on sampled holomorphic
    /// data at the stencil's accuracy order.
    pub fn d_dzbar(&self) -> ComplexField {
        self.wirtinger(true, FdOrder::Two)
    }

    pub fn d_dz_order(&self, order: FdOrder) -> ComplexField {
        self.wirtinger(false, order)
    }

    pub fn d_dzbar_order(&self, order: FdOrder) -> ComplexField {
        self.wirtinger(true, order)
    }

    fn wirtinger(&self, conjugate: bool, order: FdOrder) -> ComplexField {
        let sh = self.shape();
        let d0 = self.diff_axis(0, 1, order);
        let d1 = self.diff_axis(1, 1, order);
        let mut out = vec![Complex64::default(); sh.len()];
        let i_unit = Complex64::new(0.0, 1.0);
        match &self.chart {
            // w = t + iθ = log z: ∂_z = (1/z)·½(∂_t − i∂_θ), ∂_z̄ = (1/z̄)·½(∂_t + i∂_θ)
            Chart::Annulus(_) => {
                for i in 0..sh.n0 {
                    for j in 0..sh.n1 {
                        let idx = sh.idx(i, j);
                        let z = self.chart.zeta(i, j);
                        let (fac, comb) = if conjugate {
                            (1.0 / z.conj(), d0.values[idx] + i_unit * d1.values[idx])
                        } else {
                            (1.0 / z, d0.values[idx] - i_unit * d1.values[idx])
                        };
                        out[idx] = fac * comb * 0.5;
                    }
                }
            }
            // ξ = u + it with u along axis 1: ∂_ξ = ½(∂_u − i∂_t)
            Chart::Slab(_) => {
                for idx in 0..sh.len() {
                    out[idx] = if conjugate {
                        (d1.values[idx] + i_unit * d0.values[idx]) * 0.5
                    } else {
                        (d1.values[idx] - i_unit * d0.values[idx]) * 0.5
                    };
                }
            }
        }
        Field {
            chart: self.chart.clone(),
            values: out,
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl RealField {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomkit::AnnulusSpec;
    use crate::geomkit::SlabSpec;

    fn annulus_chart(n_r: usize, n_theta: usize) -> Chart {
        Chart::Annulus(AnnulusSpec::new(2.0, n_r, n_theta).unwrap())
    }

    #[test]
    fn d_dz_of_z_squared_is_2z_at_second_order() {
        let err_at = |n_r: usize, n_theta: usize| {
            let chart = annulus_chart(n_r, n_theta);
            let f = ComplexField::from_fn(chart.clone(), |i, j| chart.zeta(i, j).powi(2));
            let d = f.d_dz();
            let sh = chart.shape();
            let mut max_err = 0.0f64;
            for i in 0..sh.n0 {
                for j in 0..sh.n1 {
                    let z = chart.zeta(i, j);
                    max_err = max_err.max((d.at(i, j) - 2.0 * z).norm());
                }
            }
            max_err
        };
        let coarse = err_at(33, 64);
        let fine = err_at(65, 128);
        assert!(coarse < 5e-2, "coarse error {coarse}");
        let order = (coarse / fine).log2();
        assert!(order >= 1.9, "order {order}");
    }

    #[test]
    fn d_dz_of_zbar_is_zero_and_d_dzbar_is_one() {
        let chart = annulus_chart(33, 64);
        let f = ComplexField::from_fn(chart.clone(), |i, j| chart.zeta(i, j).conj());
        let dz = f.d_dz();
        let dzb = f.d_dzbar();
        let sh = chart.shape();
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                assert!(dz.at(i, j).norm() < 5e-3);
                assert!((dzb.at(i, j) - Complex64::new(1.0, 0.0)).norm() < 5e-3);
            }
        }
    }

    #[test]
    fn slab_derivative_of_exp_i_xi() {
        let chart = Chart::Slab(SlabSpec::new(3.0, 33, 65).unwrap());
        let f = ComplexField::from_fn(chart.clone(), |i, j| {
            (Complex64::new(0.0, 1.0) * chart.zeta(i, j)).exp()
        });
        let d = f.d_dz();
        let sh = chart.shape();
        let mut max_err = 0.0f64;
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let exact = Complex64::new(0.0, 1.0)
                    * (Complex64::new(0.0, 1.0) * chart.zeta(i, j)).exp();
                max_err = max_err.max((d.at(i, j) - exact).norm());
            }
        }
        assert!(max_err < 2e-2, "max_err {max_err}");
        // holomorphic: conjugate derivative small
        assert!(f.d_dzbar().max_norm() < 2e-2);
    }

    #[test]
    fn plane_laplacian_of_harmonic_fields_vanishes() {
        let chart = annulus_chart(65, 128);
        let sh = chart.shape();
        // v = log r = t
        let f = RealField::from_fn(chart.clone(), |i, _| sh.x0(i));
        assert!(f.laplacian_plane().max_abs() < 1e-10);
        // v = Re z^2
        let g = RealField::from_fn(chart.clone(), |i, j| chart.zeta(i, j).powi(2).re);
        assert!(g.laplacian_plane().max_abs() < 2e-2);
    }

    #[test]
    fn plane_laplacian_of_r_squared_is_four() {
        let chart = annulus_chart(65, 128);
        let f = RealField::from_fn(chart.clone(), |i, j| chart.zeta(i, j).norm_sqr());
        let lap = f.laplacian_plane();
        let sh = chart.shape();
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                assert!((lap.at(i, j) - 4.0).abs() < 5e-2);
            }
        }
    }
}

#[cfg(test)]
mod property_tests {
    use super::*;
    use crate::geomkit::AnnulusSpec;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random polynomial p(z, z̄) of degree ≤ 2 with its analytic
    /// Wirtinger derivatives.
    struct Poly {
        coef: [[Complex64; 3]; 3], // coef[m][n] z^m z̄^n, m + n ≤ 2
    }

    impl Poly {
        fn random(rng: &mut impl Rng) -> Self {
            let mut coef = [[Complex64::default(); 3]; 3];
            for (m, row) in coef.iter_mut().enumerate() {
                for (n, c) in row.iter_mut().enumerate() {
                    if m + n <= 2 {
                        *c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    }
                }
            }
            Poly { coef }
        }

        fn eval(&self, z: Complex64) -> Complex64 {
            let zb = z.conj();
            let mut acc = Complex64::default();
            for m in 0..3 {
                for n in 0..3 {
                    if m + n <= 2 {
                        acc += self.coef[m][n] * z.powi(m as i32) * zb.powi(n as i32);
                    }
                }
            }
            acc
        }

        fn d_dz(&self, z: Complex64) -> Complex64 {
            let zb = z.conj();
            let mut acc = Complex64::default();
            for m in 1..3 {
                for n in 0..3 {
                    if m + n <= 2 {
                        acc += self.coef[m][n] * (m as f64) * z.powi(m as i32 - 1)
                            * zb.powi(n as i32);
                    }
                }
            }
            acc
        }

        fn d_dzbar(&self, z: Complex64) -> Complex64 {
            let zb = z.conj();
            let mut acc = Complex64::default();
            for m in 0..3 {
                for n in 1..3 {
                    if m + n <= 2 {
                        acc += self.coef[m][n] * (n as f64) * z.powi(m as i32)
                            * zb.powi(n as i32 - 1);
                    }
                }
            }
            acc
        }
    }

    fn wirtinger_error(poly: &Poly, n_r: usize, n_theta: usize) -> f64 {
        let chart = Chart::Annulus(AnnulusSpec::new(2.5, n_r, n_theta).unwrap());
        let f = ComplexField::from_fn(chart.clone(), |i, j| poly.eval(chart.zeta(i, j)));
        let dz = f.d_dz();
        let dzb = f.d_dzbar();
        let sh = chart.shape();
        let mut worst = 0.0f64;
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let z = chart.zeta(i, j);
                worst = worst
                    .max((dz.at(i, j) - poly.d_dz(z)).norm())
                    .max((dzb.at(i, j) - poly.d_dzbar(z)).norm());
            }
        }
        worst
    }

    #[test]
    fn wirtinger_derivatives_refine_at_order_two_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..20 {
            let poly = Poly::random(&mut rng);
            let coarse = wirtinger_error(&poly, 33, 64);
            let fine = wirtinger_error(&poly, 65, 128);
            let order = (coarse / fine).log2();
            assert!(order >= 1.9, "trial {trial}: order {order}");
        }
    }

    #[test]
    fn laplacian_of_harmonic_powers_refines_at_order_two() {
        // Re z^n, Im z^n (n ≤ 3) and log r are harmonic
        let harmonics: Vec<Box<dyn Fn(Complex64) -> f64>> = vec![
            Box::new(|z| z.re),
            Box::new(|z| z.im),
            Box::new(|z| (z * z).re),
            Box::new(|z| (z * z).im),
            Box::new(|z| (z * z * z).re),
            Box::new(|z| (z * z * z).im),
            Box::new(|z| z.norm().ln()),
        ];
        for (k, h) in harmonics.iter().enumerate() {
            let err = |n_r: usize, n_theta: usize| {
                let chart = Chart::Annulus(AnnulusSpec::new(2.5, n_r, n_theta).unwrap());
                let f = RealField::from_fn(chart.clone(), |i, j| h(chart.zeta(i, j)));
                f.laplacian_plane().max_abs()
            };
            let coarse = err(33, 64);
            let fine = err(65, 128);
            if coarse < 1e-10 {
                // exactly harmonic under the stencil (log r is linear in
                // t); only roundoff remains and it grows with 1/h²
                continue;
            }
            let order = (coarse / fine).log2();
            assert!(order >= 1.9, "harmonic {k}: order {order}");
        }
    }
}
