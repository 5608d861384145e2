use std::f64::consts::PI;

use kontext_core::scan::sweep_kappas;
use kontext_core::{
    grid_scan, kappa_sweep, special_points_report, validate_kappa, GridSpec, OptimizerConfig,
};

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default()
}

#[test]
fn zero_kappa_scan_is_null() {
    let scan = grid_scan(&GridSpec::new(4, 5).unwrap(), 0.0, 8, 7, &cfg()).unwrap();
    assert!(scan.k_values.iter().all(|&k| k < 1e-6));
    assert!(!scan.degraded);
}

#[test]
fn values_stay_in_unit_interval_and_repeat() {
    let grid = GridSpec::new(3, 4).unwrap();
    let a = grid_scan(&grid, 2.5, 6, 7, &cfg()).unwrap();
    let b = grid_scan(&grid, 2.5, 6, 7, &cfg()).unwrap();
    assert_eq!(a, b);
    assert!(a.k_values.iter().all(|k| (0.0..=1.0).contains(k)));
    assert!(a.mean_k() > 0.0);
}

#[test]
fn grid_has_half_cell_offsets() {
    let g = GridSpec::new(25, 25).unwrap();
    assert!((g.theta(0) - PI / 50.0).abs() < 1e-15);
    assert!((g.theta(24) - (PI - PI / 50.0)).abs() < 1e-12);
    assert!((g.phi(0) + PI - PI / 25.0).abs() < 1e-12);
    assert_eq!(g.point(26), (g.theta(1), g.phi(1)));
    assert!(GridSpec::new(0, 3).is_err());
}

#[test]
fn kappa_range_is_enforced() {
    assert!(validate_kappa(PI).is_ok());
    assert!(validate_kappa(-0.1).is_err());
    assert!(validate_kappa(4.0).is_err());
    assert!(sweep_kappas(&[1.0, 5.0]).is_err());
    assert_eq!(sweep_kappas(&[2.0, 0.5]).unwrap(), vec![0.5, 2.0]);
}

#[test]
fn empty_sweep_is_empty() {
    assert!(kappa_sweep(&[], &GridSpec::default(), 5, 0, &cfg())
        .unwrap()
        .is_empty());
}

#[test]
fn special_points_vanish_without_kick() {
    let report = special_points_report(0.0, 10, 1, &cfg()).unwrap();
    assert_eq!(report.points.len(), 6);
    for p in &report.points {
        assert!(p.trace.k < 1e-6, "{}", p.label);
        assert_eq!(p.trace.beta_primes.len(), 11);
        assert!((p.trace.husimi[0] - 1.0).abs() < 1e-12);
    }
    assert!(special_points_report(4.0, 10, 1, &cfg()).is_err());
}

#[test]
fn fixed_point_stays_low_in_regular_regime() {
    let report = special_points_report(0.5, 20, 7, &cfg()).unwrap();
    let fp1 = report.get("FP1").unwrap().trace.k;
    let fp2 = report.get("FP2").unwrap().trace.k;
    assert!(fp1 < 0.05 && fp2 < 0.05, "{fp1} {fp2}");
}
