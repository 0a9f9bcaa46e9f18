//! Quadrature on chart grids.
//!
//! Periodic directions use the plain trapezoidal rule (spectrally accurate
//! there). Non-periodic directions use the endpoint-corrected trapezoidal
//! rule: the plain rule carries an O(h²) Euler–Maclaurin boundary term that
//! a second-order one-sided derivative estimate removes.

use super::{Chart, GridShape};

/// Trapezoidal rule over a periodic sample set (no duplicated seam node).
pub fn periodic_trapezoid(f: &[f64], h: f64) -> f64 {
    h * f.iter().sum::<f64>()
}

/// Plain trapezoidal rule on [x0, x0 + (n-1)h], endpoints included.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    assert!(n >= 2);
    let interior: f64 = f[1..n - 1].iter().sum();
    h * (0.5 * (f[0] + f[n - 1]) + interior)
}

/// Endpoint-corrected trapezoidal rule:
/// T(h) - (h²/12)(f'(b) - f'(a)) with one-sided second-order derivatives.
pub fn corrected_trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    assert!(n >= 4);
    let fp_a = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    let fp_b = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    trapezoid(f, h) - h * h / 12.0 * (fp_b - fp_a)
}

/// ∫∫ f dx0 dx1 over a chart grid. Axis 1 is periodic on the annulus and a
/// duplicated-seam interval on the slab; axis 0 is always an interval.
pub fn integrate_chart(values: &[f64], chart: &Chart) -> f64 {
    let sh = chart.shape();
    assert_eq!(values.len(), sh.len());
    let rows: Vec<f64> = (0..sh.n0)
        .map(|i| {
            let row = &values[i * sh.n1..(i + 1) * sh.n1];
            if sh.periodic1 {
                periodic_trapezoid(row, sh.h1)
            } else {
                corrected_trapezoid(row, sh.h1)
            }
        })
        .collect();
    corrected_trapezoid(&rows, sh.h0)
}

/// Line integral of `f` along a full axis-1 row of the grid.
pub fn integrate_row(values: &[f64], sh: &GridShape) -> f64 {
    if sh.periodic1 {
        periodic_trapezoid(values, sh.h1)
    } else {
        corrected_trapezoid(values, sh.h1)
    }
}
