//! Local Lagrange interpolation on uniform grids.

use super::fd::FieldScalar;
use crate::geomkit::GridShape;

/// Lagrange basis weights for evaluation at `x` given nodes `xs`.
pub fn lagrange_weights(xs: &[f64], x: f64) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![1.0; n];
    for k in 0..n {
        for j in 0..n {
            if j != k {
                w[k] *= (x - xs[j]) / (xs[k] - xs[j]);
            }
        }
    }
    w
}

/// Cubic interpolation of uniformly spaced samples at fractional index `s`
/// (grid units). Windows clamp at non-periodic edges and wrap otherwise.
pub fn sample_uniform<T: FieldScalar>(f: &[T], s: f64, periodic: bool) -> T {
    let n = f.len() as isize;
    debug_assert!(n >= 4);
    let k = s.floor() as isize;
    let mut start = k - 1;
    if !periodic {
        start = start.clamp(0, n - 4);
    }
    let xs: Vec<f64> = (0..4).map(|q| (start + q) as f64).collect();
    let w = lagrange_weights(&xs, s);
    let mut acc = T::default();
    for q in 0..4 {
        let mut idx = start + q;
        if periodic {
            idx = idx.rem_euclid(n);
        }
        acc += f[idx as usize] * w[q as usize];
    }
    acc
}

/// Bicubic interpolation on a grid at fractional coordinates in grid units.
/// Axis 1 wraps when the shape is periodic.
pub fn sample_grid<T: FieldScalar>(values: &[T], shape: &GridShape, s0: f64, s1: f64) -> T {
    let n0 = shape.n0 as isize;
    let k0 = (s0.floor() as isize - 1).clamp(0, n0 - 4);
    let xs: Vec<f64> = (0..4).map(|q| (k0 + q) as f64).collect();
    let w0 = lagrange_weights(&xs, s0);
    let mut rows = [T::default(); 4];
    for q in 0..4 {
        let i = (k0 + q) as usize;
        let row = &values[i * shape.n1..(i + 1) * shape.n1];
        rows[q as usize] = sample_uniform(row, s1, shape.periodic1);
    }
    let mut acc = T::default();
    for q in 0..4 {
        acc += rows[q] * w0[q];
    }
    acc
}
