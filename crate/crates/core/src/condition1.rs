//! Gamma-weighted coefficients `c̃_ab`, the absolute-sum condition
//! `Σ|c̃_ab| = 1` and the `ν_k` sufficiency check it implies.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_state::{DensityMatrix, PSD_TOL, STRUCTURE_TOL};
use crate::functionals::{nu_k_grid, vacuum_nu_k};
use crate::numerics::{log_gamma, QuadratureSpec};
use crate::wigner::WignerPolynomial;

/// Coefficients below this magnitude are treated as exact zeros.
pub const STRUCTURAL_ZERO: f64 = 1e-14;

/// Tolerance of `Σ|c̃_ab| = 1` and of `Σ_even c̃_ab = 1`.
pub const CONDITION_TOL: f64 = 1e-9;

/// Slack on `ν_k[W] <= ν_k[W0]`.
pub const SUFFICIENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeEntry {
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// `Γ((1+a)/2) Γ((1+b)/2) / π`, exactly 1 at `a = b = 0`.
pub fn gamma_weight(a: usize, b: usize) -> f64 {
    let lg = |n: usize| log_gamma(0.5 * (1.0 + n as f64)).expect("positive argument");
    (lg(a) + lg(b) - PI.ln()).exp()
}

/// Non-zero `c̃_ab = c_ab Γ((1+a)/2) Γ((1+b)/2) / π`, ordered by `(a, b)`.
pub fn tilde_coefficients(w: &WignerPolynomial) -> Vec<TildeEntry> {
    let mut entries: Vec<TildeEntry> = w
        .coeffs()
        .iter()
        .filter(|&(_, _, c)| c.abs() >= STRUCTURAL_ZERO)
        .map(|(a, b, c)| TildeEntry { a, b, value: c * gamma_weight(a, b) })
        .collect();
    entries.sort_by_key(|e| (e.a, e.b));
    entries
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSums {
    pub even_sum: f64,
    pub full_sum: f64,
    pub abs_sum: f64,
}

pub fn coefficient_sums(tilde: &[TildeEntry]) -> CoefficientSums {
    let even_sum = tilde.iter().filter(|e| e.a % 2 == 0 && e.b % 2 == 0).map(|e| e.value).sum();
    let full_sum = tilde.iter().map(|e| e.value).sum();
    let abs_sum = tilde.iter().map(|e| e.value.abs()).sum();
    CoefficientSums { even_sum, full_sum, abs_sum }
}

pub fn condition1_holds(sums: &CoefficientSums) -> bool {
    (sums.abs_sum - 1.0).abs() <= CONDITION_TOL
}

/// The sufficiency argument only needs `Σ|c̃_ab| <= 1`.
pub fn condition1_relaxed_holds(sums: &CoefficientSums) -> bool {
    sums.abs_sum <= 1.0 + CONDITION_TOL
}

/// `k` at which `ν_k[W]` exceeded the vacuum value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KWitness {
    pub k: f64,
    pub nu_k: f64,
    pub vacuum_nu_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub tilde_coeffs: Vec<TildeEntry>,
    pub even_sum: f64,
    pub full_sum: f64,
    pub abs_sum: f64,
    pub condition1_satisfied: bool,
    pub condition1_relaxed: bool,
    pub sufficiency_verified: bool,
    /// Why `ν_k` could not be evaluated, e.g. a negative Wigner function.
    pub sufficiency_error: Option<String>,
    /// Entries that keep `Σ|c̃_ab|` above `Σ_even c̃_ab`: odd parity or negative sign.
    pub coefficient_witnesses: Vec<TildeEntry>,
    pub k_witnesses: Vec<KWitness>,
    pub k_grid: Vec<f64>,
}

/// `1.0, 1.05, ..., 2.0`.
pub fn default_k_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.0 + 0.05 * i as f64).collect()
}

/// Parses `"a:b:step"` into an inclusive grid.
pub fn parse_k_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidSpec(format!("k grid '{text}' is not 'start:stop:step'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts.iter().map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<f64>>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    let grid: Vec<f64> = (0..=count).map(|i| start + step * i as f64).collect();
    check_k_grid(&grid)?;
    Ok(grid)
}

fn check_k_grid(k_grid: &[f64]) -> Result<()> {
    match k_grid.iter().find(|k| !(1.0..=2.0).contains(*k)) {
        Some(&k) => Err(Error::Domain { function: "condition1_report", x: k }),
        None => Ok(()),
    }
}

pub fn condition1_report(w: &WignerPolynomial, k_grid: &[f64], spec: &QuadratureSpec) -> Result<ConditionReport> {
    check_k_grid(k_grid)?;
    let tilde = tilde_coefficients(w);
    let sums = coefficient_sums(&tilde);
    let coefficient_witnesses = tilde
        .iter()
        .filter(|e| e.a % 2 == 1 || e.b % 2 == 1 || e.value < -CONDITION_TOL)
        .copied()
        .collect();
    let (sufficiency_verified, sufficiency_error, k_witnesses) = match nu_k_grid(w, k_grid, spec) {
        Ok(results) => {
            let witnesses: Vec<KWitness> = k_grid
                .iter()
                .zip(results)
                .map(|(&k, r)| KWitness { k, nu_k: r.value, vacuum_nu_k: vacuum_nu_k(k) })
                .filter(|wit| wit.nu_k > wit.vacuum_nu_k + SUFFICIENCY_TOL)
                .collect();
            (witnesses.is_empty(), None, witnesses)
        }
        Err(err) => (false, Some(err.to_string()), Vec::new()),
    };
    Ok(ConditionReport {
        tilde_coeffs: tilde,
        even_sum: sums.even_sum,
        full_sum: sums.full_sum,
        abs_sum: sums.abs_sum,
        condition1_satisfied: condition1_holds(&sums),
        condition1_relaxed: condition1_relaxed_holds(&sums),
        sufficiency_verified,
        sufficiency_error,
        coefficient_witnesses,
        k_witnesses,
        k_grid: k_grid.to_vec(),
    })
}

/// Families of example states with printed sufficient inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `p0|0⟩⟨0| + p1|1⟩⟨1|`; params `[p1]` or `[p0, p1]`.
    Ex1,
    /// Fock-diagonal up to `|2⟩`; params `[p0, p1, p2]`.
    Ex2,
    /// Fock-diagonal up to `|3⟩`; params `[p0, p1, p2, p3]`.
    Ex3,
    /// Fock-diagonal up to `|2⟩` plus `c|0⟩⟨2| + h.c.`; params `[p0, p1, p2, Re c, Im c]`.
    AppC,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCheck {
    /// The family's printed inequalities.
    pub in_stated_region: bool,
    /// Direct `Σ|c̃_ab| = 1` verdict.
    pub condition1: bool,
    pub agree: bool,
    /// Whether the operator is positive semidefinite.
    pub physical: bool,
    pub sums: CoefficientSums,
    pub polynomial: WignerPolynomial,
}

const REGION_SLACK: f64 = 1e-12;

fn check_probabilities(p: &[f64]) -> Result<()> {
    if let Some((i, v)) = p.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidProbabilities(format!("p_{i} = {v} outside [0, 1]")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::InvalidProbabilities(format!("probabilities sum to {total}")));
    }
    Ok(())
}

fn wrong_arity(family: Family, n: usize) -> Error {
    Error::InvalidProbabilities(format!("{family:?} takes a different number of parameters, got {n}"))
}

/// Operator for a family member, before any positivity check.
pub fn family_operator(family: Family, params: &[f64]) -> Result<DMatrix<Complex64>> {
    let probs: Vec<f64> = match (family, params.len()) {
        (Family::Ex1, 1) => vec![1.0 - params[0], params[0]],
        (Family::Ex1, 2) | (Family::Ex2, 3) | (Family::Ex3, 4) => params.to_vec(),
        (Family::AppC, 5) => params[..3].to_vec(),
        _ => return Err(wrong_arity(family, params.len())),
    };
    check_probabilities(&probs)?;
    let n = probs.len();
    let mut op = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(probs[i], 0.0) } else { Complex64::new(0.0, 0.0) });
    if family == Family::AppC {
        let c = Complex64::new(params[3], params[4]);
        op[(0, 2)] = c;
        op[(2, 0)] = c.conj();
    }
    Ok(op)
}

fn in_stated_region(family: Family, params: &[f64]) -> bool {
    let s = REGION_SLACK;
    match family {
        Family::Ex1 => params[params.len() - 1] <= 0.5 + s,
        Family::Ex2 => params[1] <= 0.5 + s && params[1] - 2.0 * params[2] >= -s,
        Family::Ex3 => {
            let (p0, p1, p2, p3) = (params[0], params[1], params[2], params[3]);
            p1 - 2.0 * p2 + 3.0 * p3 >= -s && p2 - 3.0 * p3 >= -s && p0 + p2 >= 0.5 - s
        }
        Family::AppC => {
            let (p1, p2, c1, c2) = (params[1], params[2], params[3], params[4]);
            p1 <= 0.5 + s && p1 - 2.0 * p2 - SQRT_2 * c1 >= -s && c2 <= s
        }
    }
}

/// Compares a family's printed inequalities with the direct condition
/// verdict. Disagreement is reported, not raised.
pub fn example_family_check(family: Family, params: &[f64]) -> Result<FamilyCheck> {
    let op = family_operator(family, params)?;
    let physical = DensityMatrix::new(op.clone()).is_ok();
    let polynomial = WignerPolynomial::from_operator(&op)?;
    let sums = coefficient_sums(&tilde_coefficients(&polynomial));
    let region = in_stated_region(family, params);
    let condition1 = condition1_holds(&sums);
    Ok(FamilyCheck { in_stated_region: region, condition1, agree: region == condition1, physical, sums, polynomial })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheck {
    pub condition1: bool,
    pub parity_ok: bool,
    pub implication_holds: bool,
}

/// The condition forces `ρ_nm = 0` whenever `|n - m|` is odd.
pub fn parity_implication_check(rho: &DensityMatrix) -> Result<ParityCheck> {
    let w = WignerPolynomial::from_density_matrix(rho)?;
    let condition1 = condition1_holds(&coefficient_sums(&tilde_coefficients(&w)));
    let parity_ok = rho.parity_structure_check();
    Ok(ParityCheck { condition1, parity_ok, implication_holds: !condition1 || parity_ok })
}

/// Whether an operator is positive semidefinite up to [`PSD_TOL`].
pub fn is_physical(op: &DMatrix<Complex64>) -> bool {
    DensityMatrix::new(op.clone()).map(|rho| rho.min_eigenvalue() >= PSD_TOL).unwrap_or(false)
}
