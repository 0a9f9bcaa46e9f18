//! Flux and torque identities of a fundamental piece.
//!
//! For a minimal piece Σ₀ with boundary Γ₁ ∪ Γ₂ ∪ C₁ ∪ C₂ and position
//! vector Y measured from a chosen origin, the divergence theorem gives
//! 2|Σ₀| = ∮ Y·ν ds and the torque identity 0 = ∮ Y∧ν ds. On the
//! chart-rectangular piece Γ₁/Γ₂ are the bottom/top edges and the seams
//! C₁/C₂ the left/right edges (absent on periodic charts, where adjacent
//! copies glue seam-to-seam and the seam terms cancel).

use nalgebra::Vector3;
use serde::Serialize;

use crate::geomkit::quad::{corrected_trapezoid, integrate_chart, periodic_trapezoid};
use crate::geomkit::Chart;
use crate::numerics::FdOrder;
use crate::weierstrass::SurfacePatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeLabel {
    /// Γ₁: the Im ξ = 0 (inner) boundary.
    Bottom,
    /// Γ₂: the Im ξ = log R (outer) boundary.
    Top,
    /// C₁: the Re ξ = 0 seam.
    Left,
    /// C₂: the Re ξ = 2π seam.
    Right,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeReport {
    pub label: EdgeLabel,
    /// Arclength of the edge.
    pub length: f64,
    /// ∫ ν ds with the outward conormal.
    pub flux: [f64; 3],
    /// ∫ Y·ν ds.
    pub y_dot_nu: f64,
    /// ∫ Y∧ν ds.
    pub torque: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct FluxReport {
    pub area: f64,
    pub edges: Vec<EdgeReport>,
    /// |2|Σ₀| - Σ_edges ∫ Y·ν ds|.
    pub divergence_gap: f64,
    /// |∫_{C₁∪C₂} Y·ν ds| (zero when absent).
    pub seam_dot_sum: f64,
    /// |Σ_edges ∫ Y∧ν ds|.
    pub torque_residual: f64,
}

/// Metric line/area scales: ds = scale·dτ along chart directions and
/// dA = scale²·dτ² (conformal charts; on the annulus scale = λ·r).
fn metric_scale(patch: &SurfacePatch, i: usize, j: usize) -> f64 {
    let sh = patch.shape();
    let lam = patch.lambda[sh.idx(i, j)];
    match &patch.chart {
        Chart::Annulus(_) => lam * sh.x0(i).exp(),
        Chart::Slab(_) => lam,
    }
}

/// Evaluate the boundary integrals of a piece with the origin at `origin`.
pub fn flux_and_torque(patch: &SurfacePatch, origin: Vector3<f64>) -> FluxReport {
    let sh = patch.shape();
    let area_integrand: Vec<f64> = (0..sh.n0)
        .flat_map(|i| (0..sh.n1).map(move |j| (i, j)))
        .map(|(i, j)| metric_scale(patch, i, j).powi(2))
        .collect();
    let area = integrate_chart(&area_integrand, &patch.chart);

    let (xt, xu) = patch.tangents(FdOrder::Four);
    let outward = |edge: EdgeLabel, idx: usize| -> Vector3<f64> {
        match edge {
            EdgeLabel::Bottom => -xt[idx].normalize(),
            EdgeLabel::Top => xt[idx].normalize(),
            EdgeLabel::Left => -xu[idx].normalize(),
            EdgeLabel::Right => xu[idx].normalize(),
        }
    };

    let integrate_edge = |label: EdgeLabel| -> EdgeReport {
        // node list and the line parameter spacing
        let (nodes, h): (Vec<(usize, usize)>, f64) = match label {
            EdgeLabel::Bottom => ((0..sh.n1).map(|j| (0, j)).collect(), sh.h1),
            EdgeLabel::Top => ((0..sh.n1).map(|j| (sh.n0 - 1, j)).collect(), sh.h1),
            EdgeLabel::Left => ((0..sh.n0).map(|i| (i, 0)).collect(), sh.h0),
            EdgeLabel::Right => ((0..sh.n0).map(|i| (i, sh.n1 - 1)).collect(), sh.h0),
        };
        let periodic = sh.periodic1 && matches!(label, EdgeLabel::Bottom | EdgeLabel::Top);
        let quad = |f: &[f64]| -> f64 {
            if periodic {
                periodic_trapezoid(f, h)
            } else {
                corrected_trapezoid(f, h)
            }
        };
        let mut ds = Vec::with_capacity(nodes.len());
        let mut fx = [Vec::new(), Vec::new(), Vec::new()];
        let mut ydn = Vec::with_capacity(nodes.len());
        let mut tq = [Vec::new(), Vec::new(), Vec::new()];
        for &(i, j) in &nodes {
            let idx = sh.idx(i, j);
            let scale = metric_scale(patch, i, j);
            let nu = outward(label, idx);
            let y = patch.positions[idx] - origin;
            let torque = y.cross(&nu);
            ds.push(scale);
            for k in 0..3 {
                fx[k].push(nu[k] * scale);
                tq[k].push(torque[k] * scale);
            }
            ydn.push(y.dot(&nu) * scale);
        }
        EdgeReport {
            label,
            length: quad(&ds),
            flux: [quad(&fx[0]), quad(&fx[1]), quad(&fx[2])],
            y_dot_nu: quad(&ydn),
            torque: [quad(&tq[0]), quad(&tq[1]), quad(&tq[2])],
        }
    };

    let mut edges = vec![
        integrate_edge(EdgeLabel::Bottom),
        integrate_edge(EdgeLabel::Top),
    ];
    if !sh.periodic1 {
        edges.push(integrate_edge(EdgeLabel::Left));
        edges.push(integrate_edge(EdgeLabel::Right));
    }

    let total_ydn: f64 = edges.iter().map(|e| e.y_dot_nu).sum();
    let seam_dot_sum = edges
        .iter()
        .filter(|e| matches!(e.label, EdgeLabel::Left | EdgeLabel::Right))
        .map(|e| e.y_dot_nu)
        .sum::<f64>()
        .abs();
    let mut torque_total = Vector3::zeros();
    for e in &edges {
        torque_total += Vector3::from_row_slice(&e.torque);
    }
    FluxReport {
        area,
        edges,
        divergence_gap: (2.0 * area - total_ydn).abs(),
        seam_dot_sum,
        torque_residual: torque_total.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::CriticalCatenoid;
    use crate::geomkit::{AnnulusSpec, SlabSpec};
    use num_complex::Complex64;

    #[test]
    fn catenoid_piece_satisfies_the_divergence_identity() {
        let cat = CriticalCatenoid::new();
        let spec = SlabSpec::new(cat.r_outer, 257, 513).unwrap();
        let patch = cat.analytic_slab_patch(spec);
        let report = flux_and_torque(&patch, Vector3::zeros());
        assert!((report.area - cat.area()).abs() < 1e-7, "area {}", report.area);
        assert!(report.divergence_gap < 1e-5, "gap {}", report.divergence_gap);
        // seams are traversed oppositely by the closed catenoid; the
        // residual is one-sided-stencil noise in the conormal
        assert!(report.seam_dot_sum < 1e-7, "seam sum {}", report.seam_dot_sum);
        assert!(report.torque_residual < 1e-7);
        // boundary flux: vertical, magnitude 2πa²s₀cosh s₀, opposite signs
        let expect = cat.boundary_flux_magnitude();
        for e in &report.edges {
            match e.label {
                EdgeLabel::Bottom | EdgeLabel::Top => {
                    assert!(e.flux[0].abs() < 1e-10 && e.flux[1].abs() < 1e-10);
                    assert!(
                        (e.flux[2].abs() - expect).abs() < 1e-8,
                        "flux {} vs {}",
                        e.flux[2],
                        expect
                    );
                    assert!((e.length - cat.boundary_length()).abs() < 1e-9);
                    // Y = ν on the free boundary: ∫Y·ν ds = |Γ|
                    assert!((e.y_dot_nu - cat.boundary_length()).abs() < 1e-8);
                }
                _ => {}
            }
        }
    }

    #[test]
    fn two_piece_split_cancels_on_the_seams() {
        // fundamental piece cut at Re ξ = π: the two seams carry Y·ν of
        // opposite sign pointwise on the catenoid (Y ⟂ X_u)
        let cat = CriticalCatenoid::new();
        let spec = SlabSpec::new(cat.r_outer, 65, 129).unwrap();
        let full = cat.analytic_slab_patch(spec);
        let sh = full.shape();
        let half_cols = (sh.n1 - 1) / 2 + 1;
        let half_spec = SlabSpec::new(cat.r_outer, 65, half_cols).unwrap();
        // NOTE: the half piece spans Re ξ ∈ [0, π] but keeps the full-slab
        // spacing; chart metadata only affects quadrature spacing, which is
        // unchanged
        let mut positions = Vec::new();
        let mut normals = Vec::new();
        let mut lambda = Vec::new();
        for i in 0..sh.n0 {
            for j in 0..half_cols {
                let idx = sh.idx(i, j);
                positions.push(full.positions[idx]);
                normals.push(full.normals[idx]);
                lambda.push(full.lambda[idx]);
            }
        }
        let patch = SurfacePatch {
            chart: crate::geomkit::Chart::Slab(half_spec),
            positions,
            normals,
            lambda,
            hopf: vec![Complex64::default(); sh.n0 * half_cols],
            closure_defect: 0.0,
        };
        let report = flux_and_torque(&patch, Vector3::zeros());
        assert!(report.seam_dot_sum < 1e-6, "seam sum {}", report.seam_dot_sum);
        assert!(report.divergence_gap < 1e-4, "gap {}", report.divergence_gap);
    }

    #[test]
    fn flat_annular_disk_identity_is_sharp() {
        // flat annulus r ∈ [1, R]: 2·area = 2π(R² - 1) = ∮Y·ν ds exactly
        let spec = AnnulusSpec::new(3.0, 129, 256).unwrap();
        let chart = crate::geomkit::Chart::Annulus(spec);
        let sh = chart.shape();
        let mut positions = Vec::with_capacity(sh.len());
        let mut lambda = Vec::with_capacity(sh.len());
        for i in 0..sh.n0 {
            for j in 0..sh.n1 {
                let r = sh.x0(i).exp();
                let th = sh.x1(j);
                positions.push(Vector3::new(r * th.cos(), r * th.sin(), 0.0));
                lambda.push(1.0);
            }
        }
        let patch = SurfacePatch {
            chart,
            positions,
            normals: vec![Vector3::z(); sh.len()],
            lambda,
            hopf: vec![Complex64::default(); sh.len()],
            closure_defect: 0.0,
        };
        let report = flux_and_torque(&patch, Vector3::zeros());
        let exact = std::f64::consts::PI * (9.0 - 1.0);
        assert!((report.area - exact).abs() < 1e-6);
        assert!(report.divergence_gap < 1e-6, "gap {}", report.divergence_gap);
        assert_eq!(report.edges.len(), 2);
    }
}
