//! Numerical laboratory for free-boundary minimal annuli in the unit ball.
//!
//! The crate evaluates Weierstrass data into minimal immersions, certifies
//! orthogonal sphere intersections from intrinsic curve data, solves the
//! Liouville boundary value problem on an annulus, reconstructs the
//! associated immersion by frame integration, and verifies the classical
//! identities (Hopf constancy, Gauss-map injectivity, area and flux
//! relations) on concrete examples. The critical catenoid serves as the
//! exact reference solution throughout.

pub mod catenoid;
pub mod curvelab;
pub mod diagnostics;
pub mod geomkit;
pub mod liouville;
pub mod numerics;
pub mod rebuild;
pub mod tolerances;
pub mod weierstrass;

pub use geomkit::{AnnulusSpec, Chart, ComplexField, RealField, RigidMotion, SlabSpec};
