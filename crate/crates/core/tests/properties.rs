use proptest::prelude::*;

use wigner_entropy::condition1::{coefficient_sums, parity_implication_check, tilde_coefficients};
use wigner_entropy::functionals::{marginal_entropy_chain, vacuum_entropy, wigner_entropy};
use wigner_entropy::numerics::QuadratureSpec;
use wigner_entropy::random_states::{
    random_condition1_state, random_density_matrix, random_nonnegative_state, random_perturbed_diagonal, seeded_rng,
};

#[test]
fn condition_forces_parity_structure() {
    let mut rng = seeded_rng(21);
    let mut condition_states = 0;
    for trial in 0..1000 {
        let dim = 2 + trial % 4;
        let rho = match trial % 3 {
            0 => random_density_matrix(&mut rng, dim),
            1 => random_perturbed_diagonal(&mut rng, dim),
            _ => random_condition1_state(&mut rng, 5).0,
        };
        let chk = parity_implication_check(&rho).unwrap();
        condition_states += chk.condition1 as usize;
        assert!(chk.implication_holds, "trial {trial}: {rho:?}");
    }
    assert!(condition_states > 100);
}

#[test]
fn nonnegative_states_obey_entropy_chain() {
    let spec = QuadratureSpec::default();
    let mut rng = seeded_rng(22);
    for _ in 0..15 {
        let (_, w) = random_nonnegative_state(&mut rng, 5);
        let chain = marginal_entropy_chain(&w, &spec).unwrap();
        assert!(chain.s_w >= vacuum_entropy() - 1e-6, "{chain:?}");
        assert!(chain.uncertainty_ok && chain.subadditivity_ok, "{chain:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn even_sum_is_one_for_random_states(seed in any::<u64>(), dim in 1usize..7) {
        let rho = random_density_matrix(&mut seeded_rng(seed), dim);
        let w = wigner_entropy::wigner::to_wigner_polynomial(&rho).unwrap();
        let sums = coefficient_sums(&tilde_coefficients(&w));
        prop_assert!((sums.even_sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn condition_states_have_entropy_above_vacuum(seed in any::<u64>()) {
        let (_, w) = random_condition1_state(&mut seeded_rng(seed), 6);
        let s = wigner_entropy(&w, &QuadratureSpec::default()).unwrap();
        prop_assert!(s.value >= vacuum_entropy() - 1e-6);
    }
}
