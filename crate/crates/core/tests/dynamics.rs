mod common;

use std::f64::consts::PI;

use kontext_core::classical::OUTPUT_SPHERE_TOL;
use kontext_core::{
    classical_step, coherent_state, evolve, husimi, lyapunov_exponent, trajectory, CMatrix,
    FloquetSpec, LyapunovConfig, MapVariant, PhasePoint, Spin, SpinOperators, SpinState,
};
use num_complex::Complex64;
use proptest::prelude::*;

const NORM: MapVariant = MapVariant::NormPreserving;

fn spin_strategy() -> impl Strategy<Value = Spin> {
    (1u32..=8).prop_map(|t| Spin::from_twice(t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn floquet_is_unitary(spin in spin_strategy(), kappa in 0.0..PI) {
        let f = FloquetSpec::standard(spin, kappa).unwrap();
        prop_assert!(f.unitary().unitarity_defect() < 1e-10);
    }

    #[test]
    fn evolution_keeps_norm(spin in spin_strategy(), kappa in 0.0..PI, theta in 0.0..PI, phi in -PI..PI) {
        let f = FloquetSpec::standard(spin, kappa).unwrap();
        let psi = coherent_state(spin, theta, phi);
        let out = evolve(&f, &psi, 200).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sphere_is_invariant(theta in 0.0..PI, phi in -PI..PI, kappa in 0.0..PI) {
        let pts = trajectory(PhasePoint::from_angles(theta, phi), kappa, 500, NORM).unwrap();
        for p in pts {
            prop_assert!(p.sphere_deviation() < OUTPUT_SPHERE_TOL);
        }
    }

    #[test]
    fn coherent_mean_spin_points_along_angles(spin in spin_strategy(), theta in 0.0..PI, phi in -PI..PI) {
        let ops = SpinOperators::new(spin);
        let m = ops.mean_spin(&ops.coherent_state(theta, phi)).unwrap();
        let j = spin.j();
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        for a in 0..3 {
            prop_assert!((m[a] - j * n[a]).abs() < 1e-9);
        }
    }
}

#[test]
fn long_evolution_stays_unitary() {
    let f = FloquetSpec::standard(Spin::ONE, 2.5).unwrap();
    let psi = coherent_state(Spin::ONE, 1.0, 0.3);
    let out = evolve(&f, &psi, 10_000).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn spin_one_operators_match_hand_written() {
    let ops = SpinOperators::new(Spin::ONE);
    let reference = common::spin_one();
    for (lib, hand) in [&ops.jx, &ops.jy, &ops.jz].into_iter().zip(&reference) {
        for i in 0..3 {
            for k in 0..3 {
                assert!((lib[(i, k)] - hand[i][k]).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn coherent_grid_matches_closed_form() {
    for i in 0..10 {
        for k in 0..10 {
            let theta = PI * i as f64 / 9.0;
            let phi = -PI + 2.0 * PI * k as f64 / 9.0;
            let psi = coherent_state(Spin::ONE, theta, phi);
            let reference = common::coherent(theta, phi);
            for (a, b) in psi.amplitudes().iter().zip(&reference) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn rotation_only_at_zero_kappa_has_period_four() {
    for spin in [Spin::HALF, Spin::ONE, Spin::new(2.5).unwrap()] {
        let f = FloquetSpec::standard(spin, 0.0).unwrap();
        let u4 = f.unitary().pow(4);
        let phase = u4[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-10);
        let diff = u4
            .sub(&CMatrix::identity(spin.dim()).scale(phase))
            .max_abs();
        assert!(diff < 1e-10, "{spin:?}: {diff}");
    }
}

#[test]
fn husimi_integrates_to_one() {
    let spin = Spin::ONE;
    let f = FloquetSpec::standard(spin, 2.0).unwrap();
    let psi = evolve(&f, &coherent_state(spin, 0.7, -1.2), 7).unwrap();
    let n = 100;
    let (dt, dp) = (PI / n as f64, 2.0 * PI / n as f64);
    let mut total = 0.0;
    for i in 0..n {
        let theta = (i as f64 + 0.5) * dt;
        for k in 0..n {
            let phi = -PI + (k as f64 + 0.5) * dp;
            total += husimi(&psi, theta, phi) * theta.sin() * dt * dp;
        }
    }
    let normalized = total * spin.dim() as f64 / (4.0 * PI);
    assert!((normalized - 1.0).abs() < 1e-3, "{normalized}");
}

#[test]
fn husimi_of_coherent_state_peaks_at_its_point() {
    let psi = coherent_state(Spin::ONE, 1.1, 0.4);
    assert!((husimi(&psi, 1.1, 0.4) - 1.0).abs() < 1e-12);
    assert!(husimi(&psi, PI - 1.1, 0.4 + PI) < 1e-12);
}

#[test]
fn sphere_conservation_over_long_runs() {
    let mut rng = common::rng(8);
    for _ in 0..100 {
        let v = common::normalize([
            rand::Rng::random_range(&mut rng, -1.0..1.0),
            rand::Rng::random_range(&mut rng, -1.0..1.0),
            rand::Rng::random_range(&mut rng, -1.0..1.0),
        ]);
        let mut p = PhasePoint::new(v[0], v[1], v[2]).unwrap();
        for _ in 0..10_000 {
            p = classical_step(p, 2.5, NORM).unwrap();
            assert!(p.sphere_deviation() < 1e-9);
        }
    }
}

#[test]
fn special_orbits_for_every_kappa() {
    for kappa in [0.0, 0.5, 2.5, 3.0] {
        for y in [1.0, -1.0] {
            let p = PhasePoint::new(0.0, y, 0.0).unwrap();
            assert!(classical_step(p, kappa, NORM).unwrap().distance(p) < 1e-12);
        }
        let start = PhasePoint::new(1.0, 0.0, 0.0).unwrap();
        let orbit = trajectory(start, kappa, 4, NORM).unwrap();
        assert!(orbit[4].distance(start) < 1e-12);
        for p in &orbit[1..4] {
            assert!(p.distance(start) > 0.5);
        }
    }
}

#[test]
fn lyapunov_converges_and_is_deterministic() {
    let pt = PhasePoint::from_angles(2.25, 0.63);
    let short = LyapunovConfig {
        seed: 4,
        ..Default::default()
    };
    let long = LyapunovConfig {
        n_steps: 4000,
        ..short
    };
    let a = lyapunov_exponent(pt, 3.0, &short).unwrap();
    let b = lyapunov_exponent(pt, 3.0, &long).unwrap();
    assert!((a.exponent - b.exponent).abs() < 0.05, "{a:?} {b:?}");
    assert_eq!(a, lyapunov_exponent(pt, 3.0, &short).unwrap());
}

#[test]
fn state_rejects_wrong_norm() {
    let amps = vec![Complex64::new(0.5, 0.0); 3];
    assert!(SpinState::new(Spin::ONE, amps).is_err());
}
