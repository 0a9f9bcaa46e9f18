//! Shared numerical machinery: finite-difference weights, banded linear
//! algebra, cubic splines, and local polynomial interpolation.

pub mod banded;
pub mod fd;
pub mod interp;
pub mod spline;

pub use banded::BandedLu;
pub use fd::{diff_1d, fd_weights, FdOrder};
