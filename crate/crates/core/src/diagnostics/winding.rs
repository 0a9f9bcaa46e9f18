//! Winding numbers of sampled closed curves by trapezoidal contour
//! integration of dw/(w - a).

use num_complex::Complex64;

use super::DiagError;
use crate::tolerances::WINDING_DEFECT_MAX;

#[derive(Debug, Clone, Copy)]
pub struct WindingResult {
    pub n: i64,
    /// |integral - n|, must stay below the gate.
    pub defect: f64,
}

/// n(curve, a) = (1/2πi) ∮ dw/(w-a) with the trapezoidal rule on the
/// sampled polyline (implicit closure from the last node to the first).
pub fn winding_number(curve: &[Complex64], a: Complex64) -> Result<WindingResult, DiagError> {
    assert!(curve.len() >= 3, "need a closed sampled curve");
    // conditioning gate, scale invariant: every chord must be shorter than
    // its distance to the test point, so no segment can jump past `a`
    for k in 0..curve.len() {
        let w0 = curve[k];
        let w1 = curve[(k + 1) % curve.len()];
        let dist = (w0 - a).norm().min((w1 - a).norm());
        if (w1 - w0).norm() >= dist {
            return Err(DiagError::TooCloseToCurve(dist));
        }
    }
    let mut total = Complex64::default();
    for k in 0..curve.len() {
        let w0 = curve[k];
        let w1 = curve[(k + 1) % curve.len()];
        let f0 = 1.0 / (w0 - a);
        let f1 = 1.0 / (w1 - a);
        total += 0.5 * (f0 + f1) * (w1 - w0);
    }
    let winding = total / Complex64::new(0.0, std::f64::consts::TAU);
    let n = winding.re.round();
    let defect = (winding - Complex64::new(n, 0.0)).norm();
    if defect > WINDING_DEFECT_MAX {
        return Err(DiagError::RoundingDefect(defect));
    }
    Ok(WindingResult { n: n as i64, defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn sampled_circle(radius: f64, n: usize, map: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                let z = radius * Complex64::new(0.0, TAU * k as f64 / n as f64).exp();
                map(z)
            })
            .collect()
    }

    #[test]
    fn identity_curve_winds_once_about_the_origin() {
        let curve = sampled_circle(1.0, 256, |z| z);
        let w = winding_number(&curve, Complex64::default()).unwrap();
        assert_eq!(w.n, 1);
        // polyline-chord trapezoid carries an O(h²) defect
        assert!(w.defect < 1e-3, "defect {}", w.defect);
    }

    #[test]
    fn squared_curve_winds_twice() {
        let curve = sampled_circle(1.0, 256, |z| z * z);
        let w = winding_number(&curve, Complex64::default()).unwrap();
        assert_eq!(w.n, 2);
    }

    #[test]
    fn outside_point_has_zero_winding() {
        let curve = sampled_circle(1.0, 256, |z| z);
        let w = winding_number(&curve, Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(w.n, 0);
    }

    #[test]
    fn near_curve_points_are_rejected() {
        let curve = sampled_circle(1.0, 64, |z| z);
        assert!(matches!(
            winding_number(&curve, Complex64::new(1.0, 0.02)),
            Err(DiagError::TooCloseToCurve(_))
        ));
        // comfortably separated points pass the gate
        assert!(winding_number(&curve, Complex64::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn argument_principle_on_random_polynomials() {
        // winding of p(e^{iθ}) about 0 equals the number of roots inside
        // the unit circle, exactly as an integer
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let deg = rng.gen_range(1..=5);
            let roots: Vec<Complex64> = (0..deg)
                .map(|_| {
                    let r = 0.2 + 1.6 * rng.gen::<f64>();
                    let phi = TAU * rng.gen::<f64>();
                    r * Complex64::new(0.0, phi).exp()
                })
                .collect();
            // keep roots away from the contour
            if roots.iter().any(|r| (r.norm() - 1.0).abs() < 0.15) {
                continue;
            }
            let inside = roots.iter().filter(|r| r.norm() < 1.0).count() as i64;
            let curve = sampled_circle(1.0, 1024, |z| {
                roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| acc * (z - r))
            });
            let w = winding_number(&curve, Complex64::default()).unwrap();
            assert_eq!(w.n, inside, "roots {roots:?}");
        }
    }
}
