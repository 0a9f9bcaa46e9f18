//! Arclength resampling and Frenet data of sampled space curves.

use nalgebra::Vector3;

use super::CurveError;
use crate::numerics::fd::StencilSet;
use crate::numerics::spline::CubicSpline;
use crate::numerics::FdOrder;
use crate::tolerances::KAPPA_FLOOR;

/// A space curve resampled to uniform arclength spacing with per-node
/// Frenet data. Curvature κ and torsion τ come from the parametrization
/// invariant formulas κ = |X'×X''|/|X'|³, τ = (X'×X'')·X'''/|X'×X''|²,
/// which tolerate the O(h²) arclength defect of chord resampling.
#[derive(Debug, Clone)]
pub struct SpaceCurve {
    pub samples: Vec<Vector3<f64>>,
    pub closed: bool,
    /// Cumulative arclength per node (uniform after resampling).
    pub arclength: Vec<f64>,
    /// Node spacing in arclength.
    pub spacing: f64,
    pub tangent: Vec<Vector3<f64>>,
    pub normal: Vec<Vector3<f64>>,
    pub binormal: Vec<Vector3<f64>>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub kappa_prime: Vec<f64>,
    /// Set when κ sat below the floor on more than half the nodes.
    pub degenerate_warning: bool,
}

impl SpaceCurve {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        if self.closed {
            self.spacing * self.len() as f64
        } else {
            self.spacing * (self.len() - 1) as f64
        }
    }

    /// Max-norm Frenet-Serret residuals (t' - κn, n' + κt - τb, b' + τn)
    /// over nodes with κ above the floor.
    pub fn frenet_residuals(&self) -> (f64, f64, f64) {
        let n = self.len();
        let h = self.spacing;
        let dt = diff_vec(&self.tangent, h, 1, FdOrder::Four, self.closed);
        let dn = diff_vec(&self.normal, h, 1, FdOrder::Four, self.closed);
        let db = diff_vec(&self.binormal, h, 1, FdOrder::Four, self.closed);
        let floor = KAPPA_FLOOR / self.total_length();
        let mut r = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..n {
            if self.kappa[i] <= floor * 10.0 {
                continue;
            }
            r.0 = r.0.max((dt[i] - self.kappa[i] * self.normal[i]).norm());
            r.1 = r.1.max(
                (dn[i] + self.kappa[i] * self.tangent[i] - self.tau[i] * self.binormal[i]).norm(),
            );
            r.2 = r.2.max((db[i] + self.tau[i] * self.normal[i]).norm());
        }
        r
    }
}

pub(crate) fn diff_vec(
    vals: &[Vector3<f64>],
    h: f64,
    m: usize,
    order: FdOrder,
    periodic: bool,
) -> Vec<Vector3<f64>> {
    let st = StencilSet::new(m, order, h);
    let n = vals.len();
    let mut out = vec![Vector3::zeros(); n];
    let mut comp = vec![0.0; n];
    for k in 0..3 {
        for i in 0..n {
            comp[i] = vals[i][k];
        }
        let d = st.apply(&comp, periodic);
        for i in 0..n {
            out[i][k] = d[i];
        }
    }
    out
}

pub(crate) fn diff_scalar(
    vals: &[f64],
    h: f64,
    m: usize,
    order: FdOrder,
    periodic: bool,
) -> Vec<f64> {
    StencilSet::new(m, order, h).apply(vals, periodic)
}

/// Resample to the input node count; see [`frenet_analyze_resampled`].
pub fn frenet_analyze(points: &[Vector3<f64>], closed: bool) -> Result<SpaceCurve, CurveError> {
    frenet_analyze_resampled(points, closed, points.len())
}

/// Uniform-arclength resampling (cubic spline of the cumulative chord
/// length) followed by finite-difference Frenet data on the resampled
/// nodes. Oversampled inputs may be resampled onto fewer nodes, which
/// keeps the interpolation error out of the third derivatives feeding the
/// torsion.
pub fn frenet_analyze_resampled(
    points: &[Vector3<f64>],
    closed: bool,
    n_out: usize,
) -> Result<SpaceCurve, CurveError> {
    let mut pts = points.to_vec();
    if pts.len() >= 2 && closed {
        let scale = pts.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
        if (pts[0] - pts[pts.len() - 1]).norm() < 1e-12 * scale.max(1.0) {
            pts.pop(); // drop a duplicated seam node
        }
    }
    let n_in = pts.len();
    if n_in < 8 {
        return Err(CurveError::TooFewPoints(n_in));
    }
    // cumulative chord length
    let mut s = vec![0.0f64; n_in];
    for i in 1..n_in {
        let step = (pts[i] - pts[i - 1]).norm();
        if step == 0.0 {
            return Err(CurveError::DuplicatePoints(i - 1, i));
        }
        s[i] = s[i - 1] + step;
    }
    let total = if closed {
        let step = (pts[0] - pts[n_in - 1]).norm();
        if step == 0.0 {
            return Err(CurveError::DuplicatePoints(n_in - 1, 0));
        }
        s[n_in - 1] + step
    } else {
        s[n_in - 1]
    };

    let splines: Vec<CubicSpline> = (0..3)
        .map(|k| {
            let ys: Vec<f64> = pts.iter().map(|p| p[k]).collect();
            if closed {
                CubicSpline::periodic(&s, &ys, total)
            } else {
                CubicSpline::natural(&s, &ys)
            }
        })
        .collect();

    let n = n_out.max(8);
    let h = if closed {
        total / n as f64
    } else {
        total / (n - 1) as f64
    };
    let samples: Vec<Vector3<f64>> = (0..n)
        .map(|j| {
            let sj = j as f64 * h;
            Vector3::new(
                splines[0].eval(sj),
                splines[1].eval(sj),
                splines[2].eval(sj),
            )
        })
        .collect();
    let arclength: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();

    let d1 = diff_vec(&samples, h, 1, FdOrder::Four, closed);
    let d2 = diff_vec(&samples, h, 2, FdOrder::Four, closed);
    let d3 = diff_vec(&samples, h, 3, FdOrder::Four, closed);

    let kappa_floor = KAPPA_FLOOR / total;
    let mut tangent = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut binormal = Vec::with_capacity(n);
    let mut kappa = Vec::with_capacity(n);
    let mut tau = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    let mut low_kappa = 0usize;
    for i in 0..n {
        let v = d1[i];
        let sp = v.norm();
        speed.push(sp);
        let t = v / sp;
        tangent.push(t);
        let cross = v.cross(&d2[i]);
        let cn = cross.norm();
        let k = cn / sp.powi(3);
        kappa.push(k);
        if k < kappa_floor {
            low_kappa += 1;
            // frame undefined at straight nodes; keep a placeholder
            binormal.push(Vector3::zeros());
            normal.push(Vector3::zeros());
            tau.push(0.0);
            continue;
        }
        let b = cross / cn;
        binormal.push(b);
        normal.push(b.cross(&t));
        tau.push(cross.dot(&d3[i]) / (cn * cn));
    }
    // κ' with respect to arclength: (dκ/du)/|X'|
    let dk = diff_scalar(&kappa, h, 1, FdOrder::Four, closed);
    let kappa_prime: Vec<f64> = dk.iter().zip(&speed).map(|(d, sp)| d / sp).collect();

    Ok(SpaceCurve {
        samples,
        closed,
        arclength,
        spacing: h,
        tangent,
        normal,
        binormal,
        kappa,
        tau,
        kappa_prime,
        degenerate_warning: low_kappa * 2 > n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn circle(rho: f64, n: usize) -> Vec<Vector3<f64>> {
        (0..n)
            .map(|j| {
                let p = TAU * j as f64 / n as f64;
                Vector3::new(rho * p.cos(), rho * p.sin(), 0.4)
            })
            .collect()
    }

    #[test]
    fn planar_circle_has_curvature_one_over_rho_and_no_torsion() {
        let c = frenet_analyze(&circle(2.5, 256), true).unwrap();
        for i in 0..c.len() {
            assert!((c.kappa[i] - 1.0 / 2.5).abs() < 1e-8, "kappa {}", c.kappa[i]);
            assert!(c.tau[i].abs() < 1e-8, "tau {}", c.tau[i]);
        }
        assert!(!c.degenerate_warning);
    }

    #[test]
    fn helix_frenet_matches_the_classical_formulas() {
        let (a, b) = (1.3, 0.6);
        let n = 2048;
        let pts: Vec<Vector3<f64>> = (0..n)
            .map(|j| {
                let p = 3.0 * TAU * j as f64 / (n - 1) as f64;
                Vector3::new(a * p.cos(), a * p.sin(), b * p)
            })
            .collect();
        let c = frenet_analyze(&pts, false).unwrap();
        let denom = a * a + b * b;
        // skip edge nodes where natural-spline closure is only O(h²)
        for i in 20..c.len() - 20 {
            assert!(
                (c.kappa[i] - a / denom).abs() < 1e-6,
                "kappa {} vs {}",
                c.kappa[i],
                a / denom
            );
            assert!((c.tau[i] - b / denom).abs() < 1e-5, "tau {}", c.tau[i]);
        }
    }

    #[test]
    fn latitude_circle_on_the_unit_sphere() {
        let h = 0.55f64;
        let rho = (1.0 - h * h).sqrt();
        let pts: Vec<Vector3<f64>> = (0..512)
            .map(|j| {
                let p = TAU * j as f64 / 512.0;
                Vector3::new(rho * p.cos(), rho * p.sin(), h)
            })
            .collect();
        let c = frenet_analyze(&pts, true).unwrap();
        let expected = 1.0 / rho;
        for i in 0..c.len() {
            assert!((c.kappa[i] - expected).abs() < 1e-7);
            assert!(c.tau[i].abs() < 1e-7);
        }
    }

    #[test]
    fn frenet_serret_residuals_shrink_under_refinement() {
        let curve_at = |n: usize| {
            let pts: Vec<Vector3<f64>> = (0..n)
                .map(|j| {
                    let p = TAU * j as f64 / n as f64;
                    let z = 0.6 * (2.0 * p).sin();
                    let rho = (1.0 - z * z).sqrt();
                    Vector3::new(rho * p.cos(), rho * p.sin(), z)
                })
                .collect();
            frenet_analyze(&pts, true).unwrap()
        };
        let r1 = curve_at(256).frenet_residuals();
        let r2 = curve_at(512).frenet_residuals();
        for (a, b) in [(r1.0, r2.0), (r1.1, r2.1), (r1.2, r2.2)] {
            assert!(b < a / 3.0, "residual pair {a} -> {b}");
        }
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let mut pts = circle(1.0, 32);
        pts[5] = pts[4];
        assert!(matches!(
            frenet_analyze(&pts, true),
            Err(CurveError::DuplicatePoints(4, 5))
        ));
    }

    #[test]
    fn near_straight_curve_warns() {
        let pts: Vec<Vector3<f64>> = (0..64)
            .map(|i| Vector3::new(i as f64 * 0.1, 0.0, 0.0))
            .collect();
        let c = frenet_analyze(&pts, false).unwrap();
        assert!(c.degenerate_warning);
    }

    #[test]
    fn reparametrized_input_gives_the_same_invariants() {
        let n = 4096;
        let sample = |warp: bool| {
            let pts: Vec<Vector3<f64>> = (0..n)
                .map(|j| {
                    let mut p = TAU * j as f64 / n as f64;
                    if warp {
                        p += 0.25 * p.sin() * (TAU - p) / TAU; // non-uniform speed
                    }
                    let z = 0.5 * (2.0 * p).sin();
                    let rho = (1.0 - z * z).sqrt();
                    Vector3::new(rho * p.cos(), rho * p.sin(), z)
                })
                .collect();
            frenet_analyze_resampled(&pts, true, 512).unwrap()
        };
        let plain = sample(false);
        let warped = sample(true);
        // node sets differ; compare invariant ranges statistically
        let max_k =
            |c: &SpaceCurve| c.kappa.iter().fold(0.0f64, |acc, &x| acc.max(x));
        let min_k = |c: &SpaceCurve| c.kappa.iter().fold(f64::MAX, |acc, &x| acc.min(x));
        assert!((max_k(&plain) - max_k(&warped)).abs() < 1e-4);
        assert!((min_k(&plain) - min_k(&warped)).abs() < 1e-4);
    }
}
