//! Annulus and slab charts with uniform structured grids.
//!
//! Both charts are rectangular in their natural coordinates: the annulus
//! uses (t, θ) with t = log r, so the flat Laplacian is conformally flat
//! and the two charts share one stencil library. The slab covers the
//! annulus through z = e^{-iξ}.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::GeomError;

/// Concentric annulus A(1-ε, R+ε) sampled uniformly in (t, θ), t = log r.
///
/// The angular direction is periodic with `n_theta` nodes (no duplicated
/// seam node); the radial direction has `n_r` nodes including both
/// boundary circles.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusSpec {
    /// Outer radius R > 1.
    pub r_outer: f64,
    /// Extension margin ε ≥ 0. Zero everywhere in practice: boundary
    /// conditions are applied on the actual boundary circles.
    pub epsilon: f64,
    /// Radial node count (≥ 3).
    pub n_r: usize,
    /// Angular node count (≥ 4), periodic.
    pub n_theta: usize,
}

impl AnnulusSpec {
    pub fn new(r_outer: f64, n_r: usize, n_theta: usize) -> Result<Self, GeomError> {
        Self::with_epsilon(r_outer, 0.0, n_r, n_theta)
    }

    pub fn with_epsilon(
        r_outer: f64,
        epsilon: f64,
        n_r: usize,
        n_theta: usize,
    ) -> Result<Self, GeomError> {
        if !(r_outer > 1.0) || !r_outer.is_finite() {
            return Err(GeomError::InvalidSpec(format!(
                "outer radius must satisfy R > 1, got {r_outer}"
            )));
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(GeomError::InvalidSpec(format!(
                "extension margin must satisfy 0 <= eps < 1, got {epsilon}"
            )));
        }
        if n_r < 3 {
            return Err(GeomError::InvalidSpec(format!(
                "need at least 3 radial nodes, got {n_r}"
            )));
        }
        if n_theta < 4 {
            return Err(GeomError::InvalidSpec(format!(
                "need at least 4 angular nodes, got {n_theta}"
            )));
        }
        Ok(Self {
            r_outer,
            epsilon,
            n_r,
            n_theta,
        })
    }

    pub fn t_min(&self) -> f64 {
        (1.0 - self.epsilon).ln()
    }

    pub fn t_max(&self) -> f64 {
        (self.r_outer + self.epsilon).ln()
    }

    pub fn h_t(&self) -> f64 {
        (self.t_max() - self.t_min()) / (self.n_r - 1) as f64
    }

    pub fn h_theta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min() + i as f64 * self.h_t()
    }

    pub fn r(&self, i: usize) -> f64 {
        self.t(i).exp()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.h_theta()
    }

    /// Node indices on the inner boundary circle r = 1-ε.
    pub fn inner_indices(&self) -> Vec<usize> {
        (0..self.n_theta).collect()
    }

    /// Node indices on the outer boundary circle r = R+ε.
    pub fn outer_indices(&self) -> Vec<usize> {
        let base = (self.n_r - 1) * self.n_theta;
        (0..self.n_theta).map(|j| base + j).collect()
    }
}

/// Horizontal slab H_{R,δ} covering the annulus via z = e^{-iξ}.
///
/// Im ξ plays the role of t = log r and Re ξ runs over [0, 2πM] for
/// `copies` = M fundamental domains. `n_re` counts the nodes across one
/// fundamental domain [0, 2π] including both endpoints, so the full grid
/// has (n_re-1)·M + 1 columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabSpec {
    pub r_outer: f64,
    /// Margin δ ∈ [0, 1).
    pub delta: f64,
    /// Nodes across Im ξ.
    pub n_im: usize,
    /// Nodes along Re ξ over one fundamental domain, endpoints included.
    pub n_re: usize,
    /// Number of fundamental domains M ≥ 1.
    pub copies: usize,
}

impl SlabSpec {
    pub fn new(r_outer: f64, n_im: usize, n_re: usize) -> Result<Self, GeomError> {
        Self::with_copies(r_outer, n_im, n_re, 1)
    }

    pub fn with_copies(
        r_outer: f64,
        n_im: usize,
        n_re: usize,
        copies: usize,
    ) -> Result<Self, GeomError> {
        if !(r_outer > 1.0) || !r_outer.is_finite() {
            return Err(GeomError::InvalidSpec(format!(
                "outer radius must satisfy R > 1, got {r_outer}"
            )));
        }
        if n_im < 3 || n_re < 4 {
            return Err(GeomError::InvalidSpec(format!(
                "slab grid too small: {n_im} x {n_re}"
            )));
        }
        if copies == 0 {
            return Err(GeomError::InvalidSpec("need at least one copy".into()));
        }
        Ok(Self {
            r_outer,
            delta: 0.0,
            n_im,
            n_re,
            copies,
        })
    }

    pub fn im_min(&self) -> f64 {
        (1.0 - self.delta).ln()
    }

    pub fn im_max(&self) -> f64 {
        (self.r_outer + self.delta).ln()
    }

    /// Total column count over all copies.
    pub fn n_cols(&self) -> usize {
        (self.n_re - 1) * self.copies + 1
    }

    pub fn h_im(&self) -> f64 {
        (self.im_max() - self.im_min()) / (self.n_im - 1) as f64
    }

    pub fn h_re(&self) -> f64 {
        TAU / (self.n_re - 1) as f64
    }

    pub fn im(&self, i: usize) -> f64 {
        self.im_min() + i as f64 * self.h_im()
    }

    pub fn re(&self, j: usize) -> f64 {
        j as f64 * self.h_re()
    }
}

/// A chart is either the annulus in (t, θ) or the slab in (Re ξ, Im ξ).
///
/// Axis 0 is the radial/vertical direction (t resp. Im ξ), axis 1 is the
/// angular/horizontal one (θ resp. Re ξ).
#[derive(Debug, Clone, PartialEq)]
pub enum Chart {
    Annulus(AnnulusSpec),
    Slab(SlabSpec),
}

/// Uniform-grid view shared by both charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridShape {
    pub n0: usize,
    pub n1: usize,
    pub h0: f64,
    pub h1: f64,
    pub x0_min: f64,
    pub x1_min: f64,
    /// Whether axis 1 wraps around (annulus θ).
    pub periodic1: bool,
}

impl GridShape {
    pub fn len(&self) -> usize {
        self.n0 * self.n1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n0 && j < self.n1);
        i * self.n1 + j
    }

    pub fn x0(&self, i: usize) -> f64 {
        self.x0_min + i as f64 * self.h0
    }

    pub fn x1(&self, j: usize) -> f64 {
        self.x1_min + j as f64 * self.h1
    }
}

impl Chart {
    pub fn shape(&self) -> GridShape {
        match self {
            Chart::Annulus(a) => GridShape {
                n0: a.n_r,
                n1: a.n_theta,
                h0: a.h_t(),
                h1: a.h_theta(),
                x0_min: a.t_min(),
                x1_min: 0.0,
                periodic1: true,
            },
            Chart::Slab(s) => GridShape {
                n0: s.n_im,
                n1: s.n_cols(),
                h0: s.h_im(),
                h1: s.h_re(),
                x0_min: s.im_min(),
                x1_min: 0.0,
                periodic1: false,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.shape().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Complex chart coordinate of node (i, j): z on the annulus, ξ on the slab.
    pub fn zeta(&self, i: usize, j: usize) -> Complex64 {
        let sh = self.shape();
        match self {
            Chart::Annulus(_) => {
                let t = sh.x0(i);
                let th = sh.x1(j);
                Complex64::new(t, th).exp()
            }
            Chart::Slab(_) => Complex64::new(sh.x1(j), sh.x0(i)),
        }
    }

    pub fn is_annulus(&self) -> bool {
        matches!(self, Chart::Annulus(_))
    }

    pub fn annulus(&self) -> Option<&AnnulusSpec> {
        match self {
            Chart::Annulus(a) => Some(a),
            Chart::Slab(_) => None,
        }
    }

    pub fn slab(&self) -> Option<&SlabSpec> {
        match self {
            Chart::Slab(s) => Some(s),
            Chart::Annulus(_) => None,
        }
    }
}
