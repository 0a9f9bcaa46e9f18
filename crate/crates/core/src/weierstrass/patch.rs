//! Sampled immersions with per-node frame data.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::geomkit::{Chart, GridShape};
use crate::numerics::fd::StencilSet;
use crate::numerics::FdOrder;

/// Sampled immersion into 3-space: positions, unit normals, conformal
/// factor λ (ds² = λ²|dζ|² in the chart coordinate), and the quadratic
/// differential coefficient Φ of the second fundamental form Φ dζ².
#[derive(Debug, Clone)]
pub struct SurfacePatch {
    pub chart: Chart,
    pub positions: Vec<Vector3<f64>>,
    pub normals: Vec<Vector3<f64>>,
    pub lambda: Vec<f64>,
    pub hopf: Vec<Complex64>,
    /// Worst loop-closure defect met while integrating around the annulus
    /// (zero on simply connected charts).
    pub closure_defect: f64,
}

impl SurfacePatch {
    pub fn shape(&self) -> GridShape {
        self.chart.shape()
    }

    pub fn position(&self, i: usize, j: usize) -> Vector3<f64> {
        self.positions[self.shape().idx(i, j)]
    }

    pub fn normal(&self, i: usize, j: usize) -> Vector3<f64> {
        self.normals[self.shape().idx(i, j)]
    }

    /// Finite-difference chart tangents (∂X/∂x0, ∂X/∂x1) per node.
    pub fn tangents(&self, order: FdOrder) -> (Vec<Vector3<f64>>, Vec<Vector3<f64>>) {
        let sh = self.shape();
        (
            diff_vec3(&self.positions, &sh, 0, 1, order),
            diff_vec3(&self.positions, &sh, 1, 1, order),
        )
    }

    /// Unit normals from the chart tangents, oriented as Re-axis × Im-axis
    /// of the complex chart coordinate (t × θ on the annulus, Re ξ × Im ξ
    /// on the slab). This matches the stereographic convention of the
    /// Gauss map.
    pub fn cross_normals(&self, order: FdOrder) -> Vec<Vector3<f64>> {
        let (x0, x1) = self.tangents(order);
        let flip = !self.chart.is_annulus();
        x0.iter()
            .zip(&x1)
            .map(|(a, b)| {
                let n = if flip { b.cross(a) } else { a.cross(b) };
                let len = n.norm();
                if len > 0.0 {
                    n / len
                } else {
                    Vector3::zeros()
                }
            })
            .collect()
    }

    /// λ measured from the embedded tangents instead of the data formula.
    /// On the annulus |dz/dt| = r rescales the chart tangent.
    pub fn empirical_lambda(&self, order: FdOrder) -> Vec<f64> {
        let sh = self.shape();
        let (xt, xu) = self.tangents(order);
        (0..sh.len())
            .map(|idx| {
                let i = idx / sh.n1;
                let scale = match &self.chart {
                    Chart::Annulus(_) => (-sh.x0(i)).exp(),
                    Chart::Slab(_) => 1.0,
                };
                0.5 * (xt[idx].norm() + xu[idx].norm()) * scale
            })
            .collect()
    }
}

/// Componentwise finite differences of a vector field on the grid.
pub fn diff_vec3(
    values: &[Vector3<f64>],
    sh: &GridShape,
    axis: usize,
    m: usize,
    order: FdOrder,
) -> Vec<Vector3<f64>> {
    let mut out = vec![Vector3::zeros(); sh.len()];
    if axis == 0 {
        let st = StencilSet::new(m, order, sh.h0);
        let mut col = vec![0.0; sh.n0];
        for j in 0..sh.n1 {
            for k in 0..3 {
                for i in 0..sh.n0 {
                    col[i] = values[sh.idx(i, j)][k];
                }
                let d = st.apply(&col, false);
                for i in 0..sh.n0 {
                    out[sh.idx(i, j)][k] = d[i];
                }
            }
        }
    } else {
        let st = StencilSet::new(m, order, sh.h1);
        let mut row = vec![0.0; sh.n1];
        for i in 0..sh.n0 {
            for k in 0..3 {
                for j in 0..sh.n1 {
                    row[j] = values[sh.idx(i, j)][k];
                }
                let d = st.apply(&row, sh.periodic1);
                for j in 0..sh.n1 {
                    out[sh.idx(i, j)][k] = d[j];
                }
            }
        }
    }
    out
}

/// Conformality residual of an embedded patch: the chart tangents must be
/// orthogonal with equal length. Returns the max over nodes of
/// max(|⟨X₀,X₁⟩|, ||X₀|-|X₁||·|X|) normalized by the squared tangent scale.
pub fn conformality_residual(patch: &SurfacePatch) -> f64 {
    let sh = patch.shape();
    let (x0, x1) = patch.tangents(FdOrder::Four);
    let mut worst = 0.0f64;
    for idx in 0..sh.len() {
        let a = x0[idx].norm();
        let b = x1[idx].norm();
        let scale = (a * a + b * b).max(1e-300);
        let dot = x0[idx].dot(&x1[idx]).abs();
        let len = (a - b).abs() * (a + b) * 0.5;
        worst = worst.max(dot.max(len) / scale);
    }
    worst
}

/// Harmonicity residual: coordinate functions of a conformal minimal
/// immersion are harmonic in the chart, so ∂²X/∂x0² + ∂²X/∂x1² ≈ 0.
/// Normalized by the tangent magnitude over the squared grid scale.
pub fn harmonic_residual(patch: &SurfacePatch) -> f64 {
    let sh = patch.shape();
    let d00 = diff_vec3(&patch.positions, &sh, 0, 2, FdOrder::Two);
    let d11 = diff_vec3(&patch.positions, &sh, 1, 2, FdOrder::Two);
    let (x0, _) = patch.tangents(FdOrder::Two);
    let scale = x0.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let mut worst = 0.0f64;
    for idx in 0..sh.len() {
        worst = worst.max((d00[idx] + d11[idx]).norm());
    }
    worst / scale
}
