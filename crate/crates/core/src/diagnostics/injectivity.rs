//! Gauss-map injectivity report via boundary-image winding differences.
//!
//! For g holomorphic on the closed annulus with non-vanishing derivative
//! and simple boundary images, n(g(∂A₂), a) - n(g(∂A₁), a) counts the
//! preimages of a; the map is consistent with injectivity when the
//! difference is 1 between the image curves and 0 outside.

use num_complex::Complex64;
use serde::Serialize;

use super::sweep::polyline_is_simple;
use super::winding::winding_number;
use super::DiagError;
use crate::numerics::FdOrder;
use crate::tolerances::{GZ_MIN_REL, GZ_MIN_THRESHOLD, INJECTIVITY_GRID, WINDING_EXCLUSION_SEGMENTS};
use crate::weierstrass::WeierstrassData;

#[derive(Debug, Clone, Serialize)]
pub struct WindingSample {
    pub a: (f64, f64),
    pub n_inner: i64,
    pub n_outer: i64,
    pub diff: i64,
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InjectivityVerdict {
    ConsistentWithInjectivity,
    NotInjective,
    BoundaryNotEmbedded,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub verdict: InjectivityVerdict,
    pub simple_inner: bool,
    pub simple_outer: bool,
    pub min_gz: f64,
    pub samples: Vec<WindingSample>,
    /// Count of sampled points with diff = 1 (the covered region).
    pub covered: usize,
}

/// Sample the winding difference over a grid covering both image curves.
pub fn injectivity_report(data: &WeierstrassData) -> Result<InjectivityReport, DiagError> {
    let chart = data.chart();
    if !chart.is_annulus() {
        return Err(DiagError::NotAnnulus);
    }
    let sh = chart.shape();
    let gz = data.g.d_dz_order(FdOrder::Four);
    let min_gz = gz.values().iter().map(|v| v.norm()).fold(f64::MAX, f64::min);
    let max_gz = gz.values().iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if min_gz < GZ_MIN_THRESHOLD.max(GZ_MIN_REL * max_gz) {
        return Err(DiagError::DerivativeVanishes(min_gz));
    }

    let row = |i: usize| -> Vec<Complex64> {
        (0..sh.n1).map(|j| data.g.at(i, j)).collect()
    };
    let inner = row(0);
    let outer = row(sh.n0 - 1);
    let simple_inner = polyline_is_simple(&inner);
    let simple_outer = polyline_is_simple(&outer);

    // bounding box of both curves, slightly padded
    let mut lo = Complex64::new(f64::MAX, f64::MAX);
    let mut hi = Complex64::new(f64::MIN, f64::MIN);
    for w in inner.iter().chain(outer.iter()) {
        lo.re = lo.re.min(w.re);
        lo.im = lo.im.min(w.im);
        hi.re = hi.re.max(w.re);
        hi.im = hi.im.max(w.im);
    }
    let pad = 0.05 * ((hi.re - lo.re).abs() + (hi.im - lo.im).abs());
    lo -= Complex64::new(pad, pad);
    hi += Complex64::new(pad, pad);

    let seg_len = |curve: &[Complex64]| {
        (0..curve.len())
            .map(|k| (curve[(k + 1) % curve.len()] - curve[k]).norm())
            .fold(0.0f64, f64::max)
    };
    let exclusion = WINDING_EXCLUSION_SEGMENTS * seg_len(&inner).max(seg_len(&outer));
    let dist_to = |curve: &[Complex64], a: Complex64| {
        curve.iter().map(|w| (w - a).norm()).fold(f64::MAX, f64::min)
    };

    let m = INJECTIVITY_GRID;
    let mut samples = Vec::new();
    let mut covered = 0usize;
    let mut max_diff = 0i64;
    let mut min_diff = 0i64;
    for p in 0..m {
        for q in 0..m {
            let a = Complex64::new(
                lo.re + (hi.re - lo.re) * (p as f64 + 0.5) / m as f64,
                lo.im + (hi.im - lo.im) * (q as f64 + 0.5) / m as f64,
            );
            if dist_to(&inner, a) < exclusion || dist_to(&outer, a) < exclusion {
                continue;
            }
            let (w1, w2) = match (winding_number(&inner, a), winding_number(&outer, a)) {
                (Ok(w1), Ok(w2)) => (w1, w2),
                // ill-conditioned stragglers join the exclusion zone
                _ => continue,
            };
            let diff = w2.n - w1.n;
            if diff == 1 {
                covered += 1;
            }
            max_diff = max_diff.max(diff);
            min_diff = min_diff.min(diff);
            samples.push(WindingSample {
                a: (a.re, a.im),
                n_inner: w1.n,
                n_outer: w2.n,
                diff,
                defect: w1.defect.max(w2.defect),
            });
        }
    }
    let verdict = if !(simple_inner && simple_outer) {
        InjectivityVerdict::BoundaryNotEmbedded
    } else if min_diff < 0 || max_diff > 1 || covered == 0 {
        InjectivityVerdict::NotInjective
    } else {
        InjectivityVerdict::ConsistentWithInjectivity
    };
    Ok(InjectivityReport {
        verdict,
        simple_inner,
        simple_outer,
        min_gz,
        samples,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomkit::{AnnulusSpec, Chart, ComplexField};

    fn data_from(g_of_z: impl Fn(Complex64) -> Complex64, r: f64) -> WeierstrassData {
        let chart = Chart::Annulus(AnnulusSpec::new(r, 33, 512).unwrap());
        let g = ComplexField::from_fn(chart.clone(), |i, j| g_of_z(chart.zeta(i, j)));
        let om = ComplexField::from_fn(chart.clone(), |i, j| {
            1.0 / chart.zeta(i, j).powi(2)
        });
        WeierstrassData::new(g, om).unwrap()
    }

    #[test]
    fn identity_gauss_map_is_consistent_with_injectivity() {
        let data = data_from(|z| z, 2.0);
        let rep = injectivity_report(&data).unwrap();
        assert_eq!(rep.verdict, InjectivityVerdict::ConsistentWithInjectivity);
        assert!(rep.covered > 0);
        // every point between the circles has diff exactly 1, outside 0
        for s in &rep.samples {
            let r = (s.a.0 * s.a.0 + s.a.1 * s.a.1).sqrt();
            if r > 1.05 && r < 1.95 {
                assert_eq!(s.diff, 1, "at radius {r}");
            }
            if r > 2.1 {
                assert_eq!(s.diff, 0, "at radius {r}");
            }
            assert!(s.defect < 0.1);
        }
    }

    #[test]
    fn squared_map_is_a_double_cover() {
        let data = data_from(|z| z * z, 2.0);
        let rep = injectivity_report(&data).unwrap();
        // the boundary images are doubly traversed circles, so the
        // embeddedness hypothesis already fails; the winding difference still
        // reports the double cover
        assert_ne!(rep.verdict, InjectivityVerdict::ConsistentWithInjectivity);
        let max_diff = rep.samples.iter().map(|s| s.diff).max().unwrap();
        assert_eq!(max_diff, 2);
        // inside the inner image both windings are 2 and the diff is 0
        for s in &rep.samples {
            let r = (s.a.0 * s.a.0 + s.a.1 * s.a.1).sqrt();
            if r < 0.8 {
                assert_eq!((s.n_inner, s.n_outer), (2, 2));
            }
            if r > 1.2 && r < 3.8 {
                assert_eq!(s.diff, 2, "at radius {r}");
            }
        }
    }

    #[test]
    fn self_intersecting_boundary_image_is_flagged() {
        let data = data_from(|z| z.powi(3) - 2.25 * z, 1.3);
        let rep = injectivity_report(&data).unwrap();
        assert_eq!(rep.verdict, InjectivityVerdict::BoundaryNotEmbedded);
        assert!(!rep.simple_inner);
    }

    #[test]
    fn vanishing_derivative_is_refused() {
        // plant an exact critical point of g on a grid node
        let chart = Chart::Annulus(AnnulusSpec::new(2.0, 33, 512).unwrap());
        let z0 = chart.zeta(16, 7);
        let g = ComplexField::from_fn(chart.clone(), |i, j| {
            let z = chart.zeta(i, j);
            (z - z0) * (z - z0)
        });
        let om = ComplexField::from_fn(chart.clone(), |_, _| Complex64::new(1.0, 0.0));
        let data = WeierstrassData::new(g, om).unwrap();
        assert!(matches!(
            injectivity_report(&data),
            Err(DiagError::DerivativeVanishes(_))
        ));
    }

    #[test]
    fn winding_difference_is_nonnegative_for_injective_boundaries() {
        let data = data_from(|z| z + 0.1 / z, 3.0);
        let rep = injectivity_report(&data).unwrap();
        assert!(rep.samples.iter().all(|s| s.diff >= 0));
    }
}
