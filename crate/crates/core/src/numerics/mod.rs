//! Numerical kernels shared by the rest of the crate.

mod quadrature;
mod special;

pub use quadrature::{gauss_hermite, gauss_legendre_panels, polar_integrate, PolarRule, QuadratureSpec};
pub use special::{digamma, expint_ei, gaussian_moment, log_gamma, xlogx, EULER_GAMMA, XLOGX_CLAMP_TOL};
