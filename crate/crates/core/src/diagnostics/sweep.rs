//! Simplicity test for closed sampled curves: an x-sweep over the segment
//! set with an exact-arithmetic orientation predicate (f64 inputs are
//! exactly representable as rationals, so the sign is never wrong).

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// Sign of the orientation determinant (b-a) × (c-a), exactly.
fn orient_exact(a: Complex64, b: Complex64, c: Complex64) -> i32 {
    let det = (rat(b.re) - rat(a.re)) * (rat(c.im) - rat(a.im))
        - (rat(b.im) - rat(a.im)) * (rat(c.re) - rat(a.re));
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

/// Do closed segments AB and CD intersect (including touching)?
fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let o1 = orient_exact(a, b, c);
    let o2 = orient_exact(a, b, d);
    let o3 = orient_exact(c, d, a);
    let o4 = orient_exact(c, d, b);
    if o1 != o2 && o3 != o4 && o1 * o2 != 0 && o3 * o4 != 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Is the closed polyline through `points` simple (non-self-intersecting)?
///
/// Segments sorted by their smaller x; the sweep keeps an active set of
/// segments whose x-interval overlaps the current one and tests only
/// those pairs (adjacent segments share an endpoint and are skipped).
pub fn polyline_is_simple(points: &[Complex64]) -> bool {
    let n = points.len();
    if n < 3 {
        return true;
    }
    let seg = |k: usize| (points[k], points[(k + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |k: usize| {
        let (a, b) = seg(k);
        a.re.min(b.re)
    };
    let max_x = |k: usize| {
        let (a, b) = seg(k);
        a.re.max(b.re)
    };
    order.sort_by(|&p, &q| {
        min_x(p)
            .partial_cmp(&min_x(q))
            .expect("finite coordinates")
    });
    let mut active: Vec<usize> = Vec::new();
    for &k in &order {
        let x_lo = min_x(k);
        active.retain(|&m| max_x(m) >= x_lo);
        let (a, b) = seg(k);
        for &m in &active {
            // neighbors share an endpoint by construction
            if (k + 1) % n == m || (m + 1) % n == k {
                continue;
            }
            let (c, d) = seg(m);
            // quick y-interval reject before the exact test
            if a.im.max(b.im) < c.im.min(d.im) || c.im.max(d.im) < a.im.min(b.im) {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
        active.push(k);
    }
    true
}

/// Exactness cross-check: determinant sign via BigInt on scaled inputs
/// must agree with the rational route.
#[cfg(test)]
fn orient_sign_reference(a: Complex64, b: Complex64, c: Complex64) -> i32 {
    use num_bigint::BigInt;
    // scale by 2^53 and truncate: inputs in tests are dyadic
    let s = |x: f64| BigInt::from((x * 9_007_199_254_740_992.0) as i128);
    let det = (s(b.re) - s(a.re)) * (s(c.im) - s(a.im))
        - (s(b.im) - s(a.im)) * (s(c.re) - s(a.re));
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}
