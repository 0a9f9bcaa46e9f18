//! Weierstrass data evaluation: minimal immersions with metric, second
//! fundamental form, Gauss map, and period diagnostics.

mod obj;
mod patch;

pub use obj::{patch_from_obj_str, patch_to_obj_string, read_obj, write_obj};
pub use patch::{conformality_residual, diff_vec3, harmonic_residual, SurfacePatch};

use nalgebra::Vector3;
use num_complex::Complex64;
use thiserror::Error;

use crate::geomkit::{Chart, ComplexField};
use crate::numerics::FdOrder;
use crate::tolerances::{POLE_THRESHOLD, ZERO_THRESHOLD};

#[derive(Debug, Error)]
pub enum WeierstrassError {
    #[error("g and ω̂ live on different charts")]
    ChartMismatch,
    #[error("pole/zero compatibility violated at {count} nodes")]
    PoleZeroMismatch { count: usize },
    #[error("integration path cannot avoid pole nodes")]
    SingularData,
    #[error("loop nodes are not grid-adjacent at step {0}")]
    NotAdjacent(usize),
    #[error("loop crosses a pole node at step {0}")]
    PoleOnLoop(usize),
    #[error("geometry: {0}")]
    Geom(#[from] crate::geomkit::GeomError),
}

/// Meromorphic Gauss map g and one-form coefficient ω̂ in the chart
/// coordinate (ω = ω̂ dz on the annulus, ω̂ dξ on the slab).
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub g: ComplexField,
    pub omega: ComplexField,
}

/// Holomorphy and pole/zero compatibility residuals of a data set.
#[derive(Debug, Clone)]
pub struct DataReport {
    /// max |∂g/∂ζ̄| away from poles.
    pub holomorphy_g: f64,
    /// max |∂ω̂/∂ζ̄| away from poles.
    pub holomorphy_omega: f64,
    /// Nodes where |g| exceeds the pole threshold but |ω̂| is not below the
    /// zero threshold.
    pub pole_zero_violations: usize,
    pub pole_nodes: usize,
}

impl WeierstrassData {
    pub fn new(g: ComplexField, omega: ComplexField) -> Result<Self, WeierstrassError> {
        if g.chart() != omega.chart() {
            return Err(WeierstrassError::ChartMismatch);
        }
        Ok(WeierstrassData { g, omega })
    }

    pub fn chart(&self) -> &Chart {
        self.g.chart()
    }

    pub fn is_pole(&self, idx: usize) -> bool {
        self.g.values()[idx].norm() > POLE_THRESHOLD
    }

    /// Check the §2.1 compatibility: a pole of g of order n must meet a
    /// zero of ω of order 2n. Sampled fields cannot certify orders, so the
    /// thresholded surrogate is |g| > 1e8 ⇒ |ω̂| < 1e-8.
    pub fn validate(&self) -> DataReport {
        let mut violations = 0usize;
        let mut poles = 0usize;
        for (gz, om) in self.g.values().iter().zip(self.omega.values()) {
            if gz.norm() > POLE_THRESHOLD {
                poles += 1;
                if om.norm() >= ZERO_THRESHOLD {
                    violations += 1;
                }
            }
        }
        let mask = |field: &ComplexField| {
            let d = field.d_dzbar();
            d.values()
                .iter()
                .zip(self.g.values())
                .filter(|(_, gz)| gz.norm() <= POLE_THRESHOLD)
                .map(|(v, _)| v.norm())
                .fold(0.0, f64::max)
        };
        DataReport {
            holomorphy_g: mask(&self.g),
            holomorphy_omega: mask(&self.omega),
            pole_zero_violations: violations,
            pole_nodes: poles,
        }
    }
}

/// The three Weierstrass integrand components ½(1-g²)ω̂, (i/2)(1+g²)ω̂, gω̂.
fn integrand(g: Complex64, om: Complex64) -> [Complex64; 3] {
    let one = Complex64::new(1.0, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    [
        (one - g * g) * om * 0.5,
        ihalf * (one + g * g) * om,
        g * om,
    ]
}

/// dζ/dτ along a grid axis: the parameter form of the edge quadrature.
fn chart_velocity(chart: &Chart, i: usize, j: usize, axis: usize) -> Complex64 {
    match chart {
        Chart::Annulus(_) => {
            let z = chart.zeta(i, j);
            if axis == 0 {
                z
            } else {
                Complex64::new(0.0, 1.0) * z
            }
        }
        Chart::Slab(_) => {
            if axis == 0 {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        }
    }
}

/// Stereographic lift of g to the unit sphere,
/// N = (2 Re g, 2 Im g, |g|²-1)/(1+|g|²); poles map to the north pole.
pub fn stereographic_normal(g: Complex64) -> Vector3<f64> {
    let n2 = g.norm_sqr();
    if !n2.is_finite() || n2 > POLE_THRESHOLD * POLE_THRESHOLD {
        return Vector3::new(0.0, 0.0, 1.0);
    }
    Vector3::new(2.0 * g.re, 2.0 * g.im, n2 - 1.0) / (1.0 + n2)
}

/// Per-node stereographic Gauss sphere map of the data.
pub fn gauss_sphere_map(data: &WeierstrassData) -> Vec<Vector3<f64>> {
    data.g.values().iter().map(|&g| stereographic_normal(g)).collect()
}

/// Integrate the Weierstrass representation over a spanning tree of grid
/// edges with trapezoidal edge quadrature in the chart parameter.
///
/// The tree runs the basepoint column first, then each row outward from
/// that column; on the annulus the rows stop before closing, and the loop
/// closure defect of every row is reported on the patch rather than being
/// averaged away.
pub fn integrate_immersion(
    data: &WeierstrassData,
    basepoint: (usize, usize),
    base_position: Vector3<f64>,
) -> Result<SurfacePatch, WeierstrassError> {
    let chart = data.chart().clone();
    let sh = chart.shape();
    let (i0, j0) = basepoint;
    assert!(i0 < sh.n0 && j0 < sh.n1, "basepoint outside grid");

    let has_pole = (0..sh.len()).any(|idx| data.is_pole(idx));
    if has_pole {
        // rerouting around interior poles is not implemented for the
        // structured tree; refuse rather than integrate through a pole
        return Err(WeierstrassError::SingularData);
    }

    // ψ = φ·dζ/dτ per axis, sampled once
    let mut psi0 = vec![[Complex64::default(); 3]; sh.len()];
    let mut psi1 = vec![[Complex64::default(); 3]; sh.len()];
    for i in 0..sh.n0 {
        for j in 0..sh.n1 {
            let idx = sh.idx(i, j);
            let phi = integrand(data.g.values()[idx], data.omega.values()[idx]);
            let v0 = chart_velocity(&chart, i, j, 0);
            let v1 = chart_velocity(&chart, i, j, 1);
            for k in 0..3 {
                psi0[idx][k] = phi[k] * v0;
                psi1[idx][k] = phi[k] * v1;
            }
        }
    }
    let edge = |psi: &[[Complex64; 3]], a: usize, b: usize, h: f64| -> Vector3<f64> {
        Vector3::new(
            0.5 * h * (psi[a][0].re + psi[b][0].re),
            0.5 * h * (psi[a][1].re + psi[b][1].re),
            0.5 * h * (psi[a][2].re + psi[b][2].re),
        )
    };

    let mut positions = vec![Vector3::zeros(); sh.len()];
    positions[sh.idx(i0, j0)] = base_position;
    // spine column
    for i in i0 + 1..sh.n0 {
        let (a, b) = (sh.idx(i - 1, j0), sh.idx(i, j0));
        positions[b] = positions[a] + edge(&psi0, a, b, sh.h0);
    }
    for i in (0..i0).rev() {
        let (a, b) = (sh.idx(i + 1, j0), sh.idx(i, j0));
        positions[b] = positions[a] - edge(&psi0, b, a, sh.h0);
    }
    // rows
    for i in 0..sh.n0 {
        if sh.periodic1 {
            for step in 1..sh.n1 {
                let ja = (j0 + step - 1) % sh.n1;
                let jb = (j0 + step) % sh.n1;
                let (a, b) = (sh.idx(i, ja), sh.idx(i, jb));
                positions[b] = positions[a] + edge(&psi1, a, b, sh.h1);
            }
        } else {
            for jb in j0 + 1..sh.n1 {
                let (a, b) = (sh.idx(i, jb - 1), sh.idx(i, jb));
                positions[b] = positions[a] + edge(&psi1, a, b, sh.h1);
            }
            for jb in (0..j0).rev() {
                let (a, b) = (sh.idx(i, jb + 1), sh.idx(i, jb));
                positions[b] = positions[a] - edge(&psi1, b, a, sh.h1);
            }
        }
    }

    // row closure defects on the periodic chart
    let mut closure_defect = 0.0f64;
    if sh.periodic1 {
        for i in 0..sh.n0 {
            let ja = (j0 + sh.n1 - 1) % sh.n1;
            let (a, b) = (sh.idx(i, ja), sh.idx(i, j0));
            let around = positions[a] + edge(&psi1, a, b, sh.h1);
            closure_defect = closure_defect.max((around - positions[b]).norm());
        }
    }

    let normals = gauss_sphere_map(data);
    let lambda: Vec<f64> = data
        .g
        .values()
        .iter()
        .zip(data.omega.values())
        .map(|(g, om)| 0.5 * (1.0 + g.norm_sqr()) * om.norm())
        .collect();
    let g_zeta = data.g.d_dz_order(FdOrder::Four);
    let hopf: Vec<Complex64> = g_zeta
        .values()
        .iter()
        .zip(data.omega.values())
        .map(|(gz, om)| gz * om)
        .collect();

    Ok(SurfacePatch {
        chart,
        positions,
        normals,
        lambda,
        hopf,
        closure_defect,
    })
}

/// Re of the loop integral of the three Weierstrass one-forms over a closed
/// node cycle; the zero vector certifies a well-defined immersion around
/// that loop. Otherwise the data only defines an immersion on the
/// universal cover.
pub fn period_integral(
    data: &WeierstrassData,
    loop_nodes: &[(usize, usize)],
) -> Result<Vector3<f64>, WeierstrassError> {
    let chart = data.chart();
    let sh = chart.shape();
    assert!(loop_nodes.len() >= 2, "need a closed cycle");
    let mut total = Vector3::zeros();
    let m = loop_nodes.len();
    for s in 0..m {
        let (ia, ja) = loop_nodes[s];
        let (ib, jb) = loop_nodes[(s + 1) % m];
        let a = sh.idx(ia, ja);
        let b = sh.idx(ib, jb);
        if data.is_pole(a) || data.is_pole(b) {
            return Err(WeierstrassError::PoleOnLoop(s));
        }
        let phi_a = integrand(data.g.values()[a], data.omega.values()[a]);
        let phi_b = integrand(data.g.values()[b], data.omega.values()[b]);
        // classify the step
        let (axis, sign, h) = if ia == ib {
            let forward = (ja + 1) % sh.n1 == jb || (!sh.periodic1 && ja + 1 == jb);
            let backward = (jb + 1) % sh.n1 == ja || (!sh.periodic1 && jb + 1 == ja);
            if forward {
                (1usize, 1.0, sh.h1)
            } else if backward {
                (1, -1.0, sh.h1)
            } else {
                return Err(WeierstrassError::NotAdjacent(s));
            }
        } else if ja == jb && ib == ia + 1 {
            (0, 1.0, sh.h0)
        } else if ja == jb && ia == ib + 1 {
            (0, -1.0, sh.h0)
        } else {
            return Err(WeierstrassError::NotAdjacent(s));
        };
        let va = chart_velocity(chart, ia, ja, axis);
        let vb = chart_velocity(chart, ib, jb, axis);
        for k in 0..3 {
            total[k] += 0.5 * h * sign * (phi_a[k] * va + phi_b[k] * vb).re;
        }
    }
    Ok(total)
}

/// Convenience: the full angular circle at radial index `i` as a node loop.
pub fn row_loop(chart: &Chart, i: usize) -> Vec<(usize, usize)> {
    let sh = chart.shape();
    (0..sh.n1).map(|j| (i, j)).collect()
}
