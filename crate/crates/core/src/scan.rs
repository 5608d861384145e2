//! Time-averaged normalized KCBS violation `K(θ, φ)` for the spin-1 kicked
//! top, over single points, phase-space grids, κ sweeps and the classical
//! special orbits.
//!
//! `K` averages `β′` over kicks `n = 0…N` inclusive, so `N + 1` states
//! contribute (the initial coherent state among them).

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::kcbs::{beta_max, OptimizerConfig};
use crate::rng;
use crate::spin::{FloquetSpec, Spin, SpinOperators};

/// Fraction of failed points above which a scan is marked degraded.
pub const DEGRADED_FRACTION: f64 = 0.01;

pub const DEFAULT_KICKS: usize = 50;

/// Rejects κ outside `[0, π]`.
pub fn validate_kappa(kappa: f64) -> Result<f64> {
    if (0.0..=PI).contains(&kappa) {
        Ok(kappa)
    } else {
        Err(Error::KappaOutOfRange(kappa))
    }
}

/// Regular `(θ, φ)` grid with half-cell offsets, so no point sits on a pole.
///
/// Row `i` holds `θᵢ = (i + ½)π/n_theta`; column `k` holds
/// `φₖ = −π + (k + ½)·2π/n_phi`. Values are stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: 25,
            n_phi: 25,
        }
    }
}

impl GridSpec {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be positive"));
        }
        Ok(Self { n_theta, n_phi })
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.n_theta * self.n_phi
    }

    #[inline]
    pub fn theta(&self, row: usize) -> f64 {
        (row as f64 + 0.5) * PI / self.n_theta as f64
    }

    #[inline]
    pub fn phi(&self, col: usize) -> f64 {
        -PI + (col as f64 + 0.5) * 2.0 * PI / self.n_phi as f64
    }

    /// `(θ, φ)` of row-major point `index`.
    #[inline]
    pub fn point(&self, index: usize) -> (f64, f64) {
        (self.theta(index / self.n_phi), self.phi(index % self.n_phi))
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.total()).map(|i| self.point(i))
    }
}

/// Per-kick record of one quantum trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct KTrace {
    /// Mean of `beta_primes`.
    pub k: f64,
    /// `β′` for kicks `0…N`.
    pub beta_primes: Vec<f64>,
    /// Overlap `|⟨ψ₀|ψₙ⟩|²` with the initial coherent state, kicks `0…N`.
    pub husimi: Vec<f64>,
    /// Kicks whose maximization never met its tolerance.
    pub unconverged_kicks: usize,
}

/// Spin-1 kicked top at fixed κ with the optimizer settings used for every
/// maximization.
#[derive(Debug, Clone)]
pub struct TopScanner {
    ops: SpinOperators,
    floquet: FloquetSpec,
    cfg: OptimizerConfig,
}

impl TopScanner {
    pub fn new(kappa: f64, cfg: OptimizerConfig) -> Result<Self> {
        let ops = SpinOperators::new(Spin::ONE);
        let floquet = FloquetSpec::with_ops(&ops, kappa, PI / 2.0, 1.0)?;
        Ok(Self { ops, floquet, cfg })
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.floquet.kappa
    }

    #[inline]
    pub fn optimizer(&self) -> &OptimizerConfig {
        &self.cfg
    }

    /// Evolves the coherent state at `(θ, φ)` for `n_kicks` kicks and
    /// maximizes the KCBS operator after each one. Kick `n` is optimized with
    /// the `n`-th draw of a generator seeded by `seed`.
    pub fn trace(&self, theta: f64, phi: f64, n_kicks: usize, seed: u64) -> Result<KTrace> {
        if n_kicks == 0 {
            return Err(Error::InvalidParameter("n_kicks must be at least 1"));
        }
        let mut seeds = rng::seeded(seed);
        let initial = self.ops.coherent_state(theta, phi);
        let mut state = initial.clone();
        let mut beta_primes = Vec::with_capacity(n_kicks + 1);
        let mut husimi = Vec::with_capacity(n_kicks + 1);
        let mut unconverged_kicks = 0;
        for n in 0..=n_kicks {
            if n > 0 {
                state = self.floquet.step(&state)?;
            }
            let res = beta_max(&state, &self.cfg, seeds.next_u64())?;
            if !res.converged {
                unconverged_kicks += 1;
            }
            beta_primes.push(res.beta_prime);
            husimi.push(initial.fidelity(&state)?.min(1.0));
        }
        let k = beta_primes.iter().sum::<f64>() / beta_primes.len() as f64;
        Ok(KTrace {
            k: k.clamp(0.0, 1.0),
            beta_primes,
            husimi,
            unconverged_kicks,
        })
    }

    pub fn k_average(&self, theta: f64, phi: f64, n_kicks: usize, seed: u64) -> Result<f64> {
        Ok(self.trace(theta, phi, n_kicks, seed)?.k)
    }

    /// Evaluates grid point `index` with sub-seed `seed ⊕ index`.
    pub fn scan_point(
        &self,
        grid: &GridSpec,
        index: usize,
        n_kicks: usize,
        seed: u64,
    ) -> PointOutcome {
        let (theta, phi) = grid.point(index);
        let failure = |reason| PointFailure {
            index,
            theta,
            phi,
            reason,
        };
        match self.trace(theta, phi, n_kicks, rng::derive_seed(seed, index as u64)) {
            Ok(t) if !t.k.is_finite() => PointOutcome {
                k: 0.0,
                failure: Some(failure(FailureReason::NonFinite)),
            },
            Ok(t) if t.unconverged_kicks > 0 => PointOutcome {
                k: t.k,
                failure: Some(failure(FailureReason::Unconverged {
                    kicks: t.unconverged_kicks,
                })),
            },
            Ok(t) => PointOutcome {
                k: t.k,
                failure: None,
            },
            Err(e) => PointOutcome {
                k: 0.0,
                failure: Some(failure(FailureReason::Error(e))),
            },
        }
    }
}

/// `K(θ, φ)` for the spin-1 kicked top.
pub fn k_average(
    theta: f64,
    phi: f64,
    kappa: f64,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<f64> {
    TopScanner::new(kappa, *cfg)?.k_average(theta, phi, n_kicks, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FailureReason {
    /// Some kicks kept their best-found value without meeting tolerance.
    Unconverged {
        kicks: usize,
    },
    NonFinite,
    Error(Error),
}

impl FailureReason {
    pub fn describe(&self) -> String {
        use alloc::format;
        match self {
            Self::Unconverged { kicks } => format!("optimizer unconverged on {kicks} kicks"),
            Self::NonFinite => String::from("non-finite K"),
            Self::Error(e) => format!("{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub reason: FailureReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointOutcome {
    pub k: f64,
    pub failure: Option<PointFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub grid: GridSpec,
    pub kappa: f64,
    pub n_kicks: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    /// Row-major over `(θ, φ)`.
    pub k_values: Vec<f64>,
    pub failures: Vec<PointFailure>,
    pub degraded: bool,
}

impl ScanResult {
    /// Collects per-point outcomes, given in grid index order.
    pub fn assemble(
        grid: GridSpec,
        scanner: &TopScanner,
        n_kicks: usize,
        seed: u64,
        outcomes: Vec<PointOutcome>,
    ) -> Self {
        debug_assert_eq!(outcomes.len(), grid.total());
        let mut k_values = Vec::with_capacity(outcomes.len());
        let mut failures = Vec::new();
        for o in outcomes {
            k_values.push(o.k);
            failures.extend(o.failure);
        }
        let degraded = failures.len() as f64 > DEGRADED_FRACTION * grid.total() as f64;
        Self {
            grid,
            kappa: scanner.kappa(),
            n_kicks,
            seed,
            optimizer: *scanner.optimizer(),
            k_values,
            failures,
            degraded,
        }
    }

    pub fn mean_k(&self) -> f64 {
        if self.k_values.is_empty() {
            return 0.0;
        }
        self.k_values.iter().sum::<f64>() / self.k_values.len() as f64
    }

    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.k_values[row * self.grid.n_phi + col]
    }
}

/// Serial grid scan; see `kontext::parallel` for the concurrent version,
/// which produces the same values.
pub fn grid_scan(
    grid: &GridSpec,
    kappa: f64,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<ScanResult> {
    if n_kicks == 0 {
        return Err(Error::InvalidParameter("n_kicks must be at least 1"));
    }
    let scanner = TopScanner::new(kappa, *cfg)?;
    let outcomes = (0..grid.total())
        .map(|i| scanner.scan_point(grid, i, n_kicks, seed))
        .collect();
    Ok(ScanResult::assemble(
        *grid, &scanner, n_kicks, seed, outcomes,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub mean_k: f64,
}

/// Validates and sorts a κ list for a sweep.
pub fn sweep_kappas(kappas: &[f64]) -> Result<Vec<f64>> {
    let mut sorted = kappas
        .iter()
        .map(|&k| validate_kappa(k))
        .collect::<Result<Vec<_>>>()?;
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Phase-space mean of `K` for each κ, rows ordered by κ.
pub fn kappa_sweep(
    kappas: &[f64],
    grid: &GridSpec,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    sweep_kappas(kappas)?
        .into_iter()
        .map(|kappa| {
            let scan = grid_scan(grid, kappa, n_kicks, seed, cfg)?;
            Ok(SweepRow {
                kappa,
                mean_k: scan.mean_k(),
            })
        })
        .collect()
}

/// A classical fixed point or period-4 orbit point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPoint {
    pub label: &'static str,
    pub theta: f64,
    pub phi: f64,
    pub trace: KTrace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecialPointsReport {
    pub kappa: f64,
    pub n_kicks: usize,
    pub points: Vec<SpecialPoint>,
}

/// `(label, θ, φ)` of the fixed points `(0, ±1, 0)` and the period-4 orbit
/// through `(±1, 0, 0)` and the poles.
pub const SPECIAL_POINTS: [(&str, f64, f64); 6] = [
    ("FP1", PI / 2.0, PI / 2.0),
    ("FP2", PI / 2.0, -PI / 2.0),
    ("P4a", PI / 2.0, 0.0),
    ("P4b", PI, 0.0),
    ("P4c", PI / 2.0, PI),
    ("P4d", 0.0, 0.0),
];

impl SpecialPointsReport {
    pub fn get(&self, label: &str) -> Option<&SpecialPoint> {
        self.points.iter().find(|p| p.label == label)
    }

    /// Mean `K` over the four period-4 points.
    pub fn period_four_mean(&self) -> f64 {
        let p4: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.label.starts_with("P4"))
            .map(|p| p.trace.k)
            .collect();
        p4.iter().sum::<f64>() / p4.len().max(1) as f64
    }
}

/// Traces at every entry of [`SPECIAL_POINTS`]; point `i` uses sub-seed
/// `seed ⊕ i`.
pub fn special_points_report(
    kappa: f64,
    n_kicks: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<SpecialPointsReport> {
    validate_kappa(kappa)?;
    let scanner = TopScanner::new(kappa, *cfg)?;
    let points = SPECIAL_POINTS
        .iter()
        .enumerate()
        .map(|(i, &(label, theta, phi))| {
            Ok(SpecialPoint {
                label,
                theta,
                phi,
                trace: scanner.trace(theta, phi, n_kicks, rng::derive_seed(seed, i as u64))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpecialPointsReport {
        kappa,
        n_kicks,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn light() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            ..Default::default()
        }
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::default();
        assert_eq!(g.total(), 625);
        assert!((g.theta(12) - PI / 2.0).abs() < 1e-15);
        assert!(g.theta(0) > 0.0 && g.theta(24) < PI);
        assert!(g.phi(0) > -PI && g.phi(24) <= PI);
        assert_eq!(g.point(26), (g.theta(1), g.phi(1)));
        assert!(GridSpec::new(0, 3).is_err());
    }

    #[test]
    fn kappa_range() {
        assert!(validate_kappa(0.0).is_ok());
        assert!(validate_kappa(PI).is_ok());
        assert_eq!(validate_kappa(4.0), Err(Error::KappaOutOfRange(4.0)));
        assert!(validate_kappa(-0.1).is_err());
        assert!(validate_kappa(f64::NAN).is_err());
    }

    #[test]
    fn zero_kick_strength_gives_zero_k() {
        for (t, p) in [(0.4, 1.0), (PI / 2.0, PI / 2.0), (2.8, -2.2)] {
            let k = k_average(t, p, 0.0, 12, 3, &light()).unwrap();
            assert!(k < 1e-6, "K = {k}");
        }
    }

    #[test]
    fn trace_lengths_and_range() {
        let scanner = TopScanner::new(2.5, light()).unwrap();
        let t = scanner.trace(1.0, 0.5, 10, 9).unwrap();
        assert_eq!(t.beta_primes.len(), 11);
        assert_eq!(t.husimi.len(), 11);
        assert!((t.husimi[0] - 1.0).abs() < 1e-12);
        assert!(t.beta_primes[0] < 1e-9);
        assert!((0.0..=1.0).contains(&t.k));
        assert!(t.beta_primes.iter().all(|b| (0.0..=1.0).contains(b)));
        assert!(scanner.trace(1.0, 0.5, 0, 9).is_err());
    }

    #[test]
    fn sweep_edge_cases() {
        let grid = GridSpec::new(2, 2).unwrap();
        assert!(kappa_sweep(&[], &grid, 3, 0, &light()).unwrap().is_empty());
        assert_eq!(
            kappa_sweep(&[0.5, 3.5], &grid, 3, 0, &light()),
            Err(Error::KappaOutOfRange(3.5))
        );
        let rows = kappa_sweep(&[2.0, 0.0], &grid, 3, 0, &light()).unwrap();
        assert_eq!(rows[0].kappa, 0.0);
        assert!(rows[0].mean_k < 1e-6);
    }

    #[test]
    fn special_points_at_zero_kick() {
        let r = special_points_report(0.0, 8, 1, &light()).unwrap();
        assert_eq!(r.points.len(), 6);
        assert!(r.points.iter().all(|p| p.trace.k < 1e-6));
        assert!(special_points_report(4.0, 8, 1, &light()).is_err());
    }

    #[test]
    fn small_scan_is_deterministic() {
        let grid = GridSpec::new(3, 4).unwrap();
        let a = grid_scan(&grid, 2.5, 5, 7, &light()).unwrap();
        let b = grid_scan(&grid, 2.5, 5, 7, &light()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k_values.len(), 12);
        assert!(a.k_values.iter().all(|k| (0.0..=1.0).contains(k)));
    }
}
