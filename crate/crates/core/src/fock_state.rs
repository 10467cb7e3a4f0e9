//! Truncated Fock-basis density matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cutoff used by convenience constructors that take no explicit dimension.
pub const DEFAULT_CUTOFF: usize = 16;

/// Tolerance on Hermiticity, trace and structural zeros.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

/// Single-qubit Bloch vector on the `{|0⟩, |1⟩}` Fock subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let b = Self { r1, r2, r3 };
        let norm2 = b.norm_squared();
        if !norm2.is_finite() || norm2 > 1.0 + STRUCTURE_TOL {
            return Err(Error::OutsideBlochBall(norm2));
        }
        Ok(b)
    }

    pub fn norm_squared(&self) -> f64 {
        self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3
    }
}

/// Validated density matrix `ρ_nm = ⟨n|ρ|m⟩` on Fock states `|0⟩ … |N-1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

/// Largest `|m_nm - conj(m_mn)|`.
pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn check_square_hermitian(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    let defect = hermiticity_defect(m);
    if !(defect <= STRUCTURE_TOL) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        check_square_hermitian(&entries)?;
        let trace: f64 = (0..entries.nrows()).map(|i| entries[(i, i)].re).sum();
        let trace_err = (trace - 1.0).abs();
        if !(trace_err <= STRUCTURE_TOL) {
            return Err(Error::TraceNotOne(trace_err));
        }
        let min_eig = min_eigenvalue(&entries);
        if !(min_eig >= PSD_TOL) {
            return Err(Error::NotPositiveSemidefinite(min_eig));
        }
        Ok(Self { entries })
    }

    /// Builds from separate real and imaginary row-major tables.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for (row_idx, row) in re.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len().max(row_idx) });
            }
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::StateFormat("re and im tables have different shapes".into()));
            }
        }
        let entries = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        Self::new(entries)
    }

    /// `½(I + r1 σx + r2 σy + r3 σz)` on `{|0⟩, |1⟩}`.
    pub fn qubit_from_bloch(b: BlochVector) -> Result<Self> {
        let b = BlochVector::new(b.r1, b.r2, b.r3)?;
        let entries = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5 * (1.0 + b.r3), 0.0),
                Complex64::new(0.5 * b.r1, -0.5 * b.r2),
                Complex64::new(0.5 * b.r1, 0.5 * b.r2),
                Complex64::new(0.5 * (1.0 - b.r3), 0.0),
            ],
        );
        Self::new(entries)
    }

    /// `Σ p_n |n⟩⟨n|`.
    pub fn fock_diagonal(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty probability list".into()));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbabilities(format!("p_{i} = {p} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::InvalidProbabilities(format!("probabilities sum to {total}")));
        }
        let n = probs.len();
        let entries = DMatrix::from_fn(n, n, |i, j| {
            if i == j { Complex64::new(probs[i], 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        Self::new(entries)
    }

    /// Fock state `|n⟩⟨n|` in a space of dimension `dim > n`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidProbabilities(format!("Fock index {n} needs dim > {n}, got {dim}")));
        }
        let mut probs = vec![0.0; dim];
        probs[n] = 1.0;
        Self::fock_diagonal(&probs)
    }

    pub fn vacuum() -> Self {
        Self::fock(0, 1).expect("vacuum is valid")
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[(n, m)]
    }

    /// Zero-padded copy in a larger Fock space.
    pub fn embedded(&self, dim: usize) -> Self {
        let dim = dim.max(self.dim());
        let mut entries = DMatrix::zeros(dim, dim);
        entries.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.entries);
        Self { entries }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }

    /// `r_i = tr(ρ σ_i)`; `None` unless the state lives on `{|0⟩, |1⟩}`.
    pub fn bloch_vector(&self) -> Option<BlochVector> {
        let n = self.dim();
        if n < 2 {
            return (n == 1).then_some(BlochVector { r1: 0.0, r2: 0.0, r3: 1.0 });
        }
        for i in 0..n {
            for j in 0..n {
                if (i >= 2 || j >= 2) && self.entries[(i, j)].norm() > STRUCTURE_TOL {
                    return None;
                }
            }
        }
        let rho01 = self.entries[(0, 1)];
        Some(BlochVector {
            r1: 2.0 * rho01.re,
            r2: -2.0 * rho01.im,
            r3: self.entries[(0, 0)].re - self.entries[(1, 1)].re,
        })
    }

    /// Diagonal with non-increasing occupation numbers.
    pub fn is_passive(&self) -> bool {
        let n = self.dim();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)].norm() <= STRUCTURE_TOL));
        diagonal && (1..n).all(|i| self.entries[(i, i)].re <= self.entries[(i - 1, i - 1)].re + STRUCTURE_TOL)
    }

    /// True when every `ρ_nm` with odd `|n - m|` vanishes.
    pub fn parity_structure_check(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (i + j) % 2 == 0 || self.entries[(i, j)].norm() <= STRUCTURE_TOL))
    }
}

fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let eig = SymmetricEigen::new(m.clone());
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// JSON state description.
///
/// Accepts `{"dim": N, "re": [[..]], "im": [[..]]}`, `{"diag": [p0, ..]}`
/// or `{"bloch": [r1, r2, r3]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Full {
        dim: usize,
        re: Vec<Vec<f64>>,
        #[serde(default)]
        im: Option<Vec<Vec<f64>>>,
    },
    Diagonal {
        diag: Vec<f64>,
    },
    Bloch {
        bloch: [f64; 3],
    },
}

impl StateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::StateFormat(e.to_string()))
    }

    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Full { dim, re, im } => {
                if re.len() != *dim {
                    return Err(Error::StateFormat(format!("dim = {dim} but re has {} rows", re.len())));
                }
                DensityMatrix::from_parts(re, im.as_deref())
            }
            StateSpec::Diagonal { diag } => DensityMatrix::fock_diagonal(diag),
            StateSpec::Bloch { bloch: [r1, r2, r3] } => {
                DensityMatrix::qubit_from_bloch(BlochVector::new(*r1, *r2, *r3)?)
            }
        }
    }

    pub fn from_density_matrix(rho: &DensityMatrix) -> Self {
        let n = rho.dim();
        let re = (0..n).map(|i| (0..n).map(|j| rho.get(i, j).re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| rho.get(i, j).im).collect()).collect();
        StateSpec::Full { dim: n, re, im: Some(im) }
    }
}
