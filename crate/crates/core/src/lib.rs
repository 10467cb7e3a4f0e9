//! Wigner functions, Wigner entropy and the k-functionals `μ_k`, `ν_k` for
//! single-mode states on a truncated Fock space.
//!
//! States enter as [`DensityMatrix`] values and are converted exactly into a
//! [`WignerPolynomial`], i.e. a Gaussian times a polynomial in `(q, p)`.
//! Every phase-space integral is then a deterministic quadrature over that
//! closed form.

pub mod condition1;
pub mod error;
pub mod fock_state;
pub mod functionals;
pub mod numerics;
pub mod qubit;
pub mod random_states;
pub mod wigner;

pub use error::{Error, Result};
pub use fock_state::{BlochVector, DensityMatrix, StateSpec};
pub use numerics::QuadratureSpec;
pub use wigner::{to_wigner_polynomial, NonNegativityReport, Verdict, WignerPolynomial};
pub use condition1::{condition1_report, ConditionReport};
pub use functionals::{mu_k, nu_k, wigner_entropy, FunctionalResult};
pub use qubit::{boundary_entropy_closed, BoundaryQubit};
