//! Hopf differential extraction, Gauss-map winding/injectivity machinery,
//! and the boundary geodesic-curvature formula in terms of the Gauss map.

mod hopf;
mod injectivity;
mod kappa;
mod sweep;
mod winding;

pub use hopf::{hopf_extract, HopfData};
pub use injectivity::{injectivity_report, InjectivityReport, InjectivityVerdict, WindingSample};
pub use kappa::{remark42_kappa_g, KappaGReport};
pub use sweep::polyline_is_simple;
pub use winding::{winding_number, WindingResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagError {
    #[error("patch is not conformal (residual {0:.3e}); Hopf extraction refused")]
    NotConformal(f64),
    #[error("patch is not on the annulus chart")]
    NotAnnulus,
    #[error("test point sits within {0:.3e} of the sampled curve; winding ill-conditioned")]
    TooCloseToCurve(f64),
    #[error("winding integral rounding defect {0:.3} exceeds the gate")]
    RoundingDefect(f64),
    #[error("|g'| reaches {0:.3e} on the closure; injectivity hypotheses fail")]
    DerivativeVanishes(f64),
    #[error("g or g_θ vanishes at node {0}; formula singular")]
    FormulaSingularity(usize),
}
