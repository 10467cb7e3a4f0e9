use thiserror::Error;

/// Errors raised by state construction, Wigner representation and the
/// phase-space functionals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has dimension zero")]
    Empty,

    #[error("not Hermitian: max |rho_nm - conj(rho_mn)| = {0:e}")]
    NotHermitian(f64),

    #[error("trace is not one: |tr(rho) - 1| = {0:e}")]
    TraceNotOne(f64),

    #[error("not positive semidefinite: smallest eigenvalue {0:e}")]
    NotPositiveSemidefinite(f64),

    #[error("Bloch vector outside the unit ball: r1^2 + r2^2 + r3^2 = {0}")]
    OutsideBlochBall(f64),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("Wigner coefficient c_{a}{b} has imaginary part {im:e}")]
    NonRealCoefficient { a: usize, b: usize, im: f64 },

    #[error("Wigner polynomial is not normalized: gamma-weighted even sum = {0}")]
    NotNormalized(f64),

    #[error("{function}: argument {x} outside the domain")]
    Domain { function: &'static str, x: f64 },

    #[error("negative density {0:e} in x ln x")]
    NegativeDensity(f64),

    #[error("Wigner function is negative: P = {min_value:e} at ({q}, {p})")]
    NotNonNegative { min_value: f64, q: f64, p: f64 },

    #[error("quadrature refinement changed the value by {0:e}")]
    QuadratureDivergence(f64),

    #[error("(r1, r3) = ({r1}, {r3}) leaves the non-negativity region: 2r1^2 + (1-2r3)^2 = {value}")]
    RegionViolation { r1: f64, r3: f64, value: f64 },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error("state format: {0}")]
    StateFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
