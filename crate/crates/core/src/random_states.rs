//! Seeded random states for property tests, acceptance checks and scans.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::condition1::{coefficient_sums, tilde_coefficients};
use crate::fock_state::{BlochVector, DensityMatrix};
use crate::wigner::{certify_nonnegative, default_certify_rmax, to_wigner_polynomial, WignerPolynomial, DEFAULT_NONNEG_TOL};

/// Acceptance bound on `Σ|c̃_ab|` for sampled condition states.
pub const CONDITION_SAMPLE_TOL: f64 = 1e-12;

const MAX_ATTEMPTS: usize = 100_000;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G† / tr(G G†)` for a complex Gaussian `dim x dim` matrix `G`.
pub fn random_density_matrix<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace();
    rho /= trace;
    // symmetrize away rounding in the product
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DensityMatrix::new(rho).expect("Ginibre states are valid")
}

/// Fock-diagonal part of a random state plus a Hermitian `ρ_01` coherence,
/// halved until the result is positive semidefinite. `dim >= 2`.
pub fn random_perturbed_diagonal<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let dim = dim.max(2);
    let base = random_density_matrix(rng, dim);
    let mut m = DMatrix::from_fn(dim, dim, |i, j| if i == j { base.get(i, i) } else { Complex64::new(0.0, 0.0) });
    let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let mut scale = 0.5 * (m[(0, 0)].re * m[(1, 1)].re).sqrt();
    loop {
        m[(0, 1)] = c * scale;
        m[(1, 0)] = (c * scale).conj();
        if let Ok(rho) = DensityMatrix::new(m.clone()) {
            return rho;
        }
        scale *= 0.5;
    }
}

/// Uniform in the unit ball.
pub fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    loop {
        let (r1, r2, r3) = (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        if r1 * r1 + r2 * r2 + r3 * r3 <= 1.0 {
            return BlochVector { r1, r2, r3 };
        }
    }
}

/// `(1 - t)|0⟩⟨0| + t σ` with `σ` a random state of dimension `2..=max_dim`,
/// resampled until its Wigner function is certified non-negative.
pub fn random_nonnegative_state<R: Rng>(rng: &mut R, max_dim: usize) -> (DensityMatrix, WignerPolynomial) {
    let max_dim = max_dim.max(2);
    for _ in 0..MAX_ATTEMPTS {
        let dim = rng.random_range(2..=max_dim);
        let sigma = random_density_matrix(rng, dim);
        let t: f64 = rng.random_range(0.0..1.0);
        let vac = DensityMatrix::vacuum().embedded(dim);
        let mix = vac.entries() * Complex64::new(1.0 - t, 0.0) + sigma.entries() * Complex64::new(t, 0.0);
        let Ok(rho) = DensityMatrix::new(mix) else { continue };
        let w = to_wigner_polynomial(&rho).expect("valid state");
        if certify_nonnegative(&w, default_certify_rmax(&w), DEFAULT_NONNEG_TOL).is_nonnegative() {
            return (rho, w);
        }
    }
    panic!("no Wigner non-negative state after {MAX_ATTEMPTS} draws");
}

/// Random state with `Σ|c̃_ab| <= 1 + CONDITION_SAMPLE_TOL`.
///
/// Occupations decay geometrically with random jitter; optional real
/// coherences `ρ_{n,n+2}` keep the parity structure. Candidates that are
/// not positive semidefinite or miss the bound are redrawn.
pub fn random_condition1_state<R: Rng>(rng: &mut R, max_dim: usize) -> (DensityMatrix, WignerPolynomial) {
    let max_dim = max_dim.max(1);
    for _ in 0..MAX_ATTEMPTS {
        let dim = rng.random_range(1..=max_dim);
        let ratio: f64 = rng.random_range(0.0..0.5);
        let mut probs: Vec<f64> = (0..dim).map(|n| ratio.powi(n as i32) * rng.random_range(0.5..1.0)).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let mut m = DMatrix::from_fn(dim, dim, |i, j| if i == j { Complex64::new(probs[i], 0.0) } else { Complex64::new(0.0, 0.0) });
        if rng.random_bool(0.5) {
            for n in 0..dim.saturating_sub(2) {
                let c = rng.random_range(-0.5..0.5) * (probs[n] * probs[n + 2]).sqrt();
                m[(n, n + 2)] = Complex64::new(c, 0.0);
                m[(n + 2, n)] = Complex64::new(c, 0.0);
            }
        }
        let Ok(rho) = DensityMatrix::new(m) else { continue };
        let w = to_wigner_polynomial(&rho).expect("valid state");
        if coefficient_sums(&tilde_coefficients(&w)).abs_sum <= 1.0 + CONDITION_SAMPLE_TOL {
            return (rho, w);
        }
    }
    panic!("no condition state after {MAX_ATTEMPTS} draws");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_states_are_valid() {
        let mut rng = seeded_rng(1);
        for dim in 1..6 {
            let rho = random_density_matrix(&mut rng, dim);
            assert_eq!(rho.dim(), dim);
            assert!(rho.min_eigenvalue() >= -1e-12);
        }
    }

    #[test]
    fn perturbed_states_break_parity() {
        let mut rng = seeded_rng(5);
        for dim in 2..6 {
            let rho = random_perturbed_diagonal(&mut rng, dim);
            assert!(rho.get(0, 1).norm() > 0.0);
            assert!(!rho.parity_structure_check());
        }
    }

    #[test]
    fn bloch_samples_stay_in_ball() {
        let mut rng = seeded_rng(2);
        for _ in 0..500 {
            assert!(random_bloch(&mut rng).norm_squared() <= 1.0);
        }
    }

    #[test]
    fn nonnegative_samples_certify() {
        let mut rng = seeded_rng(3);
        for _ in 0..10 {
            let (rho, w) = random_nonnegative_state(&mut rng, 6);
            assert!(rho.dim() <= 6);
            assert!(certify_nonnegative(&w, default_certify_rmax(&w), DEFAULT_NONNEG_TOL).is_nonnegative());
        }
    }

    #[test]
    fn condition_samples_meet_bound() {
        let mut rng = seeded_rng(4);
        let mut with_coherence = 0;
        for _ in 0..50 {
            let (rho, w) = random_condition1_state(&mut rng, 6);
            assert!(coefficient_sums(&tilde_coefficients(&w)).abs_sum <= 1.0 + CONDITION_SAMPLE_TOL);
            assert!(rho.parity_structure_check());
            if rho.dim() >= 3 && rho.get(0, 2).norm() > 0.0 {
                with_coherence += 1;
            }
        }
        assert!(with_coherence > 0);
    }

    #[test]
    fn same_seed_same_states() {
        let (a, _) = random_nonnegative_state(&mut seeded_rng(9), 5);
        let (b, _) = random_nonnegative_state(&mut seeded_rng(9), 5);
        assert_eq!(a, b);
    }
}
