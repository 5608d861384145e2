//! Rayon-backed versions of the core scans. Each grid point is an
//! independent work item and results are collected in index order, so
//! output is identical to the serial functions for any thread count.

use rayon::prelude::*;

use kontext_core::classical::{lyapunov_exponent, LyapunovConfig, PhasePoint};
use kontext_core::rng::derive_seed;
use kontext_core::scan::{sweep_kappas, GridSpec, ScanResult, SweepRow, TopScanner};
use kontext_core::OptimizerConfig;

use crate::error::Result;

/// Runs `f` on a pool of `threads` workers, or on the global pool when
/// `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}

pub fn par_grid_scan(
    grid: &GridSpec,
    kappa: f64,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ScanResult> {
    if n_kicks == 0 {
        return Err(kontext_core::Error::InvalidParameter("n_kicks must be at least 1").into());
    }
    let scanner = TopScanner::new(kappa, *cfg)?;
    let outcomes = (0..grid.total())
        .into_par_iter()
        .map(|i| scanner.scan_point(grid, i, n_kicks, seed))
        .collect();
    Ok(ScanResult::assemble(
        *grid, &scanner, n_kicks, seed, outcomes,
    ))
}

pub fn par_kappa_sweep(
    kappas: &[f64],
    grid: &GridSpec,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    sweep_kappas(kappas)?
        .into_iter()
        .map(|kappa| {
            Ok(SweepRow {
                kappa,
                mean_k: par_grid_scan(grid, kappa, n_kicks, seed, cfg)?.mean_k(),
            })
        })
        .collect()
}

/// Largest Lyapunov exponent at every grid point, row-major. Point `i`
/// seeds its tangent vector with `cfg.seed ⊕ i`.
pub fn lyapunov_map(grid: &GridSpec, kappa: f64, cfg: &LyapunovConfig) -> Result<Vec<f64>> {
    (0..grid.total())
        .into_par_iter()
        .map(|i| {
            let (theta, phi) = grid.point(i);
            let point_cfg = LyapunovConfig {
                seed: derive_seed(cfg.seed, i as u64),
                ..*cfg
            };
            Ok(lyapunov_exponent(PhasePoint::from_angles(theta, phi), kappa, &point_cfg)?.exponent)
        })
        .collect()
}
