//! Cubic spline interpolation with natural and periodic end conditions.

/// Solve a tridiagonal system in place (Thomas algorithm).
///
/// `a` is the subdiagonal (a[0] unused), `b` the diagonal, `c` the
/// superdiagonal (c[n-1] unused). Assumes the system is well conditioned
/// without pivoting, which holds for spline matrices.
pub fn solve_tridiag(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64]) {
    let n = d.len();
    let mut cp = vec![0.0; n];
    let mut bp = b[0];
    d[0] /= bp;
    for i in 1..n {
        cp[i - 1] = c[i - 1] / bp;
        bp = b[i] - a[i] * cp[i - 1];
        d[i] = (d[i] - a[i] * d[i - 1]) / bp;
    }
    for i in (0..n - 1).rev() {
        d[i] -= cp[i] * d[i + 1];
    }
}

/// Solve a cyclic tridiagonal system via the Sherman-Morrison correction.
pub fn solve_cyclic_tridiag(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = d.len();
    assert!(n >= 3);
    let gamma = -b[0];
    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - a[0] * c[n - 1] / gamma;

    let mut x = d.to_vec();
    solve_tridiag(a, &bb, c, &mut x);

    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c[n - 1];
    solve_tridiag(a, &bb, c, &mut u);

    let vx = x[0] + a[0] / gamma * x[n - 1];
    let vu = 1.0 + u[0] + a[0] / gamma * u[n - 1];
    let factor = vx / vu;
    for i in 0..n {
        x[i] -= factor * u[i];
    }
    x
}

/// One-dimensional cubic spline through (x_i, y_i).
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    m2: Vec<f64>,
    period: Option<f64>,
}

impl CubicSpline {
    /// Natural spline: second derivative vanishes at both ends.
    pub fn natural(xs: &[f64], ys: &[f64]) -> Self {
        let n = xs.len();
        assert_eq!(n, ys.len());
        assert!(n >= 3);
        let h: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
        let mut a = vec![0.0; n];
        let mut b = vec![1.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            a[i] = h[i - 1];
            b[i] = 2.0 * (h[i - 1] + h[i]);
            c[i] = h[i];
            d[i] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        solve_tridiag(&a, &b, &c, &mut d);
        CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m2: d,
            period: None,
        }
    }

    /// Periodic spline: `xs` omits the wrap node, `period` is the full
    /// length so the final interval runs from xs[n-1] to xs[0] + period.
    pub fn periodic(xs: &[f64], ys: &[f64], period: f64) -> Self {
        let n = xs.len();
        assert_eq!(n, ys.len());
        assert!(n >= 3);
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    xs[i + 1] - xs[i]
                } else {
                    xs[0] + period - xs[n - 1]
                }
            })
            .collect();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            a[i] = h[im];
            b[i] = 2.0 * (h[im] + h[i]);
            c[i] = h[i];
            d[i] = 6.0 * ((ys[ip] - ys[i]) / h[i] - (ys[i] - ys[im]) / h[im]);
        }
        let m2 = solve_cyclic_tridiag(&a, &b, &c, &d);
        CubicSpline {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m2,
            period: Some(period),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        match self.period {
            None => {
                let x = x.clamp(self.xs[0], self.xs[n - 1]);
                let k = match self
                    .xs
                    .binary_search_by(|v| v.partial_cmp(&x).expect("non-finite knot"))
                {
                    Ok(k) => k.min(n - 2),
                    Err(k) => k.saturating_sub(1).min(n - 2),
                };
                let h = self.xs[k + 1] - self.xs[k];
                self.piece(k, self.xs[k], h, self.ys[k + 1], self.m2[k + 1], x)
            }
            Some(p) => {
                let x0 = self.xs[0];
                let mut xw = (x - x0).rem_euclid(p) + x0;
                if xw >= x0 + p {
                    xw = x0;
                }
                let k = match self
                    .xs
                    .binary_search_by(|v| v.partial_cmp(&xw).expect("non-finite knot"))
                {
                    Ok(k) => k,
                    Err(k) => k - 1,
                };
                if k == n - 1 {
                    let h = self.xs[0] + p - self.xs[n - 1];
                    self.piece(n - 1, self.xs[n - 1], h, self.ys[0], self.m2[0], xw)
                } else {
                    let h = self.xs[k + 1] - self.xs[k];
                    self.piece(k, self.xs[k], h, self.ys[k + 1], self.m2[k + 1], xw)
                }
            }
        }
    }

    fn piece(&self, k: usize, xk: f64, h: f64, y1: f64, m1: f64, x: f64) -> f64 {
        let (y0, m0) = (self.ys[k], self.m2[k]);
        let u = x - xk;
        let w = h - u;
        (m0 * w * w * w + m1 * u * u * u) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * w
            + (y1 / h - m1 * h / 6.0) * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn natural_spline_reproduces_smooth_function() {
        let n = 64;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (2.0 * x).sin()).collect();
        let sp = CubicSpline::natural(&xs, &ys);
        let mut max_err = 0.0f64;
        for k in 0..500 {
            let x = 0.1 + 0.8 * k as f64 / 499.0;
            max_err = max_err.max((sp.eval(x) - (2.0 * x).sin()).abs());
        }
        assert!(max_err < 2e-7, "max_err {max_err}");
    }

    #[test]
    fn periodic_spline_wraps_cleanly() {
        let n = 48;
        let xs: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x.cos()).collect();
        let sp = CubicSpline::periodic(&xs, &ys, TAU);
        let mut max_err = 0.0f64;
        for k in 0..1000 {
            let x = TAU * k as f64 / 1000.0;
            max_err = max_err.max((sp.eval(x) - x.cos()).abs());
        }
        assert!(max_err < 5e-6, "max_err {max_err}");
        // evaluation far outside the base interval wraps
        assert!((sp.eval(5.0 * TAU + 1.0) - 1.0f64.cos()).abs() < 5e-6);
    }

    #[test]
    fn cyclic_tridiag_matches_dense_solve() {
        let a = [1.0, 2.0, -1.0, 0.5, 1.5];
        let b = [10.0, 9.0, 11.0, 8.0, 12.0];
        let c = [0.7, -0.2, 1.1, 0.4, 2.0];
        let d = [1.0, 2.0, 3.0, 4.0, 5.0];
        let x = solve_cyclic_tridiag(&a, &b, &c, &d);
        let n = 5;
        for i in 0..n {
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            let _ = im;
            let r = a[i] * x[(i + n - 1) % n] + b[i] * x[i] + c[i] * x[ip] - d[i];
            assert!(r.abs() < 1e-10, "row {i}: {r}");
        }
    }
}
