mod common;

use std::f64::consts::PI;

use kontext_core::kcbs::beta_expectation_projectors;
use kontext_core::{
    beta_expectation, beta_max, beta_prime, coherent_state, s_squared_sum, OptimizerConfig,
    Pentagon, Spin, SpinOperators, SpinState, BETA_QUANTUM_MAX,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn state(a: [Complex64; 3]) -> SpinState {
    SpinState::new(Spin::ONE, a.to_vec()).unwrap()
}

fn pentagon(v: [[f64; 3]; 5]) -> Pentagon {
    Pentagon::new(v).unwrap()
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_path_matches_reference(seed in arb_seed()) {
        let mut rng = common::rng(seed);
        let a = common::random_state(&mut rng);
        let p = common::random_pentagon(&mut rng);
        let psi = state(a);
        let pent = pentagon(p);
        let reference = common::beta(&a, &p);
        prop_assert!((beta_expectation(&psi, &pent).unwrap() - reference).abs() < 1e-10);
        prop_assert!((beta_expectation_projectors(&psi, &pent).unwrap() - reference).abs() < 1e-10);
    }

    #[test]
    fn complement_identity(seed in arb_seed()) {
        let mut rng = common::rng(seed);
        let psi = state(common::random_state(&mut rng));
        let pent = pentagon(common::random_pentagon(&mut rng));
        let total = beta_expectation(&psi, &pent).unwrap() + s_squared_sum(&psi, &pent).unwrap();
        prop_assert!((total - 5.0).abs() < 1e-10);
    }

    #[test]
    fn expectation_within_quantum_bound(seed in arb_seed()) {
        let mut rng = common::rng(seed);
        let psi = state(common::random_state(&mut rng));
        let pent = pentagon(common::random_pentagon(&mut rng));
        let b = beta_expectation(&psi, &pent).unwrap();
        prop_assert!(b > -1e-12 && b < BETA_QUANTUM_MAX + 1e-9);
    }

    #[test]
    fn beta_prime_in_unit_interval(b in -1.0f64..4.0) {
        let v = beta_prime(b);
        prop_assert!((0.0..=1.0).contains(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn maximizer_dominates_supplied_pentagons(seed in arb_seed()) {
        let mut rng = common::rng(seed);
        let a = common::random_state(&mut rng);
        let psi = state(a);
        let res = beta_max(&psi, &OptimizerConfig::default(), seed).unwrap();
        prop_assert!(res.beta_max <= BETA_QUANTUM_MAX + 1e-6);
        let at_argmax = common::beta(&a, res.argmax.vectors());
        prop_assert!((at_argmax - res.beta_max).abs() < 1e-9);
        for _ in 0..50 {
            let p = common::random_pentagon(&mut rng);
            prop_assert!(res.beta_max >= common::beta(&a, &p) - 1e-9);
        }
        prop_assert!(res.beta_max >= common::beta(&a, Pentagon::regular_pentagram().vectors()) - 1e-9);
    }

    #[test]
    fn rotation_covariance(seed in arb_seed(), theta in 0.0..PI, phi in -PI..PI) {
        let mut rng = common::rng(seed);
        let psi = state(common::random_state(&mut rng));
        let ops = SpinOperators::new(Spin::ONE);
        let rotated = psi.apply(&ops.rotation(theta, phi)).unwrap();
        let cfg = OptimizerConfig::default();
        let a = beta_max(&psi, &cfg, 1).unwrap().beta_max;
        let b = beta_max(&rotated, &cfg, 2).unwrap().beta_max;
        prop_assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }
}

#[test]
fn zero_state_reaches_sqrt5() {
    let psi = SpinState::basis(Spin::ONE, 1).unwrap();
    let res = beta_max(&psi, &OptimizerConfig::default(), 0).unwrap();
    assert!((res.beta_max - 5f64.sqrt()).abs() < 1e-6);
    assert!((res.beta_prime - 1.0).abs() < 1e-5);
}

#[test]
fn regular_pentagram_value_on_zero_state() {
    let a = [Complex64::ZERO, Complex64::ONE, Complex64::ZERO];
    let pent = Pentagon::regular_pentagram();
    let reference = common::beta(&a, pent.vectors());
    assert!((reference - 5f64.sqrt()).abs() < 1e-12);
    assert!((beta_expectation(&state(a), &pent).unwrap() - reference).abs() < 1e-12);
}

#[test]
fn coherent_states_attain_exactly_the_classical_bound() {
    let mut rng = common::rng(11);
    for i in 0..10 {
        let theta = rand::Rng::random_range(&mut rng, 0.0..PI);
        let phi = rand::Rng::random_range(&mut rng, -PI..PI);
        let reference = common::coherent(theta, phi);
        let psi = coherent_state(Spin::ONE, theta, phi);
        for (x, y) in psi.amplitudes().iter().zip(&reference) {
            assert!((x - y).norm() < 1e-12);
        }
        let res = beta_max(&psi, &OptimizerConfig::default(), i).unwrap();
        assert!((res.beta_max - 2.0).abs() < 1e-6, "{}", res.beta_max);
        assert!(res.beta_prime < 1e-9);
    }
}

#[test]
fn brute_force_never_beats_optimizer() {
    let mut rng = common::rng(5);
    for i in 0..5 {
        let a = common::random_state(&mut rng);
        let best = (0..20_000)
            .map(|_| common::beta(&a, &common::random_pentagon(&mut rng)))
            .fold(f64::NEG_INFINITY, f64::max);
        let res = beta_max(&state(a), &OptimizerConfig::default(), i).unwrap();
        assert!(res.beta_max >= best - 1e-9, "{} < {best}", res.beta_max);
    }
}

#[test]
fn optimizer_is_deterministic() {
    let mut rng = common::rng(3);
    let psi = state(common::random_state(&mut rng));
    let cfg = OptimizerConfig::default();
    assert_eq!(
        beta_max(&psi, &cfg, 42).unwrap(),
        beta_max(&psi, &cfg, 42).unwrap()
    );
}
