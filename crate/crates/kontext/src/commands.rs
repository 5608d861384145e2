//! The experiments behind each subcommand. Each returns the paths written.

use std::path::{Path, PathBuf};

use serde::Serialize;

use kontext_core::classical::{lyapunov_exponent, phase_portrait, LyapunovConfig, PhasePoint};
use kontext_core::rng::{self, derive_seed};
use kontext_core::scan::{special_points_report, sweep_kappas, SweepRow};
use kontext_core::OptimizerConfig;

use crate::analysis;
use crate::cache::{ScanCache, ScanKey};
use crate::config::{Format, RunConfig};
use crate::error::{Error, Result};
use crate::formats::{csv_text, fmt_num, grid_csv, json_text, write_file, Metadata, ScanRecord};
use crate::parallel::{lyapunov_map, par_grid_scan, with_threads};
use crate::svg;

/// Files written by a command, plus lines worth showing the user.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn write(&mut self, path: PathBuf, contents: &str) -> Result<()> {
        write_file(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

fn out_path(cfg: &RunConfig, stem: &str, ext: &str) -> PathBuf {
    cfg.out.join(format!("{stem}.{ext}"))
}

fn ensure_out_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs or loads the grid scan described by `cfg` at `kappa`.
pub fn scan_record(cfg: &RunConfig, kappa: f64) -> Result<ScanRecord> {
    let grid = cfg.grid.spec()?;
    let key = ScanKey {
        kappa,
        n_kicks: cfg.kicks,
        grid: cfg.grid,
        seed: cfg.seed,
        optimizer: cfg.optimizer,
    };
    let cache = cfg.cache.then(|| ScanCache::for_output(&cfg.out));
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key)) {
        return Ok(hit);
    }
    let opt = OptimizerConfig::from(cfg.optimizer);
    let result = with_threads(cfg.threads, || {
        par_grid_scan(&grid, kappa, cfg.kicks, cfg.seed, &opt)
    })??;
    let record = ScanRecord::from(&result);
    if let Some(c) = &cache {
        c.store(&key, &record)?;
    }
    Ok(record)
}

pub fn scan(cfg: &RunConfig) -> Result<Outcome> {
    let kappa = cfg.kappa()?;
    ensure_out_dir(&cfg.out)?;
    let record = scan_record(cfg, kappa)?;
    let meta = Metadata::new(cfg);
    let mut out = Outcome::default();
    if cfg.wants(Format::Csv) {
        out.write(out_path(cfg, "scan", "csv"), &record.csv(&meta))?;
    }
    if cfg.wants(Format::Json) {
        out.write(out_path(cfg, "scan", "json"), &record.json(&meta)?)?;
    }
    if cfg.wants(Format::Svg) {
        let title = format!("K(θ, φ) at κ = {}, N = {}", fmt_num(kappa), cfg.kicks);
        let fig = svg::heatmap(
            &meta.to_json(),
            &title,
            &record.grid_spec(),
            &record.k_values,
            (0.0, 1.0),
            "K",
        );
        out.write(out_path(cfg, "scan", "svg"), &fig)?;
    }
    out.summary.push(format!(
        "kappa {}: mean K = {} over {} points",
        fmt_num(kappa),
        fmt_num(record.mean_k()),
        record.k_values.len()
    ));
    if record.degraded {
        out.warnings.push(format!(
            "scan degraded: {} of {} points failed",
            record.failures.len(),
            record.k_values.len()
        ));
    } else if !record.failures.is_empty() {
        out.warnings
            .push(format!("{} points did not converge", record.failures.len()));
    }
    Ok(out)
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let kappas = cfg
        .kappas
        .clone()
        .unwrap_or_else(crate::config::default_kappas);
    let kappas = sweep_kappas(&kappas)?;
    ensure_out_dir(&cfg.out)?;
    let mut out = Outcome::default();
    let mut rows = Vec::with_capacity(kappas.len());
    let mut degraded = 0;
    for &kappa in &kappas {
        let record = scan_record(cfg, kappa)?;
        degraded += usize::from(record.degraded);
        rows.push(SweepRow {
            kappa,
            mean_k: record.mean_k(),
        });
        out.summary.push(format!(
            "kappa {}: mean K = {}",
            fmt_num(kappa),
            fmt_num(record.mean_k())
        ));
    }
    if degraded > 0 {
        out.warnings
            .push(format!("{degraded} of {} scans degraded", kappas.len()));
    }
    let meta = Metadata::new(cfg);
    if cfg.wants(Format::Csv) {
        let csv = csv_text(
            &meta,
            &["kappa", "mean_k"],
            rows.iter().map(|r| [fmt_num(r.kappa), fmt_num(r.mean_k)]),
        );
        out.write(out_path(cfg, "sweep", "csv"), &csv)?;
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Row {
            kappa: f64,
            mean_k: f64,
        }
        let data: Vec<Row> = rows
            .iter()
            .map(|r| Row {
                kappa: r.kappa,
                mean_k: r.mean_k,
            })
            .collect();
        out.write(out_path(cfg, "sweep", "json"), &json_text(&meta, &data)?)?;
    }
    if cfg.wants(Format::Svg) {
        let series = vec![(
            "mean K".to_owned(),
            rows.iter().map(|r| (r.kappa, r.mean_k)).collect(),
        )];
        let title = format!("Phase-space mean of K, N = {}", cfg.kicks);
        let fig = svg::line_plot(
            &meta.to_json(),
            &title,
            "κ",
            "⟨K⟩",
            &series,
            Some((0.0, 1.0)),
        );
        out.write(out_path(cfg, "sweep", "svg"), &fig)?;
    }
    Ok(out)
}

pub fn points(cfg: &RunConfig) -> Result<Outcome> {
    let kappa = cfg.kappa()?;
    ensure_out_dir(&cfg.out)?;
    let opt = OptimizerConfig::from(cfg.optimizer);
    let report = special_points_report(kappa, cfg.kicks, cfg.seed, &opt)?;
    let meta = Metadata::new(cfg);
    let mut out = Outcome::default();
    for p in &report.points {
        out.summary.push(format!(
            "{} (θ={}, φ={}): K = {}",
            p.label,
            fmt_num(p.theta),
            fmt_num(p.phi),
            fmt_num(p.trace.k)
        ));
        if p.trace.unconverged_kicks > 0 {
            out.warnings.push(format!(
                "{}: optimizer unconverged on {} kicks",
                p.label, p.trace.unconverged_kicks
            ));
        }
    }
    if cfg.wants(Format::Csv) {
        let rows = report.points.iter().flat_map(|p| {
            p.trace
                .beta_primes
                .iter()
                .zip(&p.trace.husimi)
                .enumerate()
                .map(move |(n, (b, h))| {
                    [
                        p.label.to_owned(),
                        fmt_num(p.theta),
                        fmt_num(p.phi),
                        n.to_string(),
                        fmt_num(*b),
                        fmt_num(*h),
                    ]
                })
        });
        let csv = csv_text(
            &meta,
            &["label", "theta", "phi", "kick", "beta_prime", "husimi"],
            rows,
        );
        out.write(out_path(cfg, "points", "csv"), &csv)?;
        let summary = csv_text(
            &meta,
            &["label", "theta", "phi", "k"],
            report.points.iter().map(|p| {
                [
                    p.label.to_owned(),
                    fmt_num(p.theta),
                    fmt_num(p.phi),
                    fmt_num(p.trace.k),
                ]
            }),
        );
        out.write(out_path(cfg, "points_summary", "csv"), &summary)?;
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Point<'a> {
            label: &'a str,
            theta: f64,
            phi: f64,
            k: f64,
            beta_primes: &'a [f64],
            husimi: &'a [f64],
            unconverged_kicks: usize,
        }
        let data: Vec<Point> = report
            .points
            .iter()
            .map(|p| Point {
                label: p.label,
                theta: p.theta,
                phi: p.phi,
                k: p.trace.k,
                beta_primes: &p.trace.beta_primes,
                husimi: &p.trace.husimi,
                unconverged_kicks: p.trace.unconverged_kicks,
            })
            .collect();
        out.write(out_path(cfg, "points", "json"), &json_text(&meta, &data)?)?;
    }
    if cfg.wants(Format::Svg) {
        let series: Vec<(String, Vec<(f64, f64)>)> = report
            .points
            .iter()
            .map(|p| {
                let pts = p
                    .trace
                    .beta_primes
                    .iter()
                    .enumerate()
                    .map(|(n, &b)| (n as f64, b))
                    .collect();
                (p.label.to_owned(), pts)
            })
            .collect();
        let title = format!("β′ per kick at special points, κ = {}", fmt_num(kappa));
        let fig = svg::line_plot(
            &meta.to_json(),
            &title,
            "kick n",
            "β′",
            &series,
            Some((0.0, 1.0)),
        );
        out.write(out_path(cfg, "points", "svg"), &fig)?;
    }
    Ok(out)
}

fn lyapunov_config(cfg: &RunConfig, seed: u64) -> LyapunovConfig {
    LyapunovConfig {
        n_steps: cfg.lyapunov_steps,
        seed,
        variant: cfg.map_variant.into(),
        ..Default::default()
    }
}

/// Initial conditions for a phase portrait, area-uniform on the sphere.
pub fn portrait_seeds(n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut r = rng::seeded(seed);
    (0..n)
        .map(|_| {
            let v = rng::unit_vector(&mut r);
            PhasePoint::normalized(v).expect("unit vector")
        })
        .collect()
}

pub fn classical(cfg: &RunConfig) -> Result<Outcome> {
    let kappa = cfg.kappa()?;
    if cfg.seeds == 0 {
        return Err(Error::Usage("--seeds must be at least 1".into()));
    }
    ensure_out_dir(&cfg.out)?;
    let seeds = portrait_seeds(cfg.seeds, cfg.seed);
    let variant = cfg.map_variant.into();
    let portrait = phase_portrait(&seeds, kappa, cfg.steps, variant)?;
    let lyapunov: Vec<f64> = with_threads(cfg.threads, || {
        use rayon::prelude::*;
        seeds
            .par_iter()
            .enumerate()
            .map(|(i, &p)| {
                Ok(lyapunov_exponent(
                    p,
                    kappa,
                    &lyapunov_config(cfg, derive_seed(cfg.seed, i as u64)),
                )?
                .exponent)
            })
            .collect::<Result<Vec<f64>>>()
    })??;

    let meta = Metadata::new(cfg);
    let mut out = Outcome::default();
    if cfg.wants(Format::Csv) {
        let csv = csv_text(
            &meta,
            &["seed", "step", "theta", "phi"],
            portrait.iter().map(|p| {
                [
                    p.seed.to_string(),
                    p.step.to_string(),
                    fmt_num(p.theta),
                    fmt_num(p.phi),
                ]
            }),
        );
        out.write(out_path(cfg, "classical", "csv"), &csv)?;
        let csv = csv_text(
            &meta,
            &["seed", "theta", "phi", "lambda"],
            seeds.iter().zip(&lyapunov).enumerate().map(|(i, (p, l))| {
                [
                    i.to_string(),
                    fmt_num(p.theta()),
                    fmt_num(p.phi()),
                    fmt_num(*l),
                ]
            }),
        );
        out.write(out_path(cfg, "classical_lyapunov", "csv"), &csv)?;
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Seed {
            theta: f64,
            phi: f64,
            lambda: f64,
            trajectory: Vec<[f64; 2]>,
        }
        let mut data: Vec<Seed> = seeds
            .iter()
            .zip(&lyapunov)
            .map(|(p, &lambda)| Seed {
                theta: p.theta(),
                phi: p.phi(),
                lambda,
                trajectory: Vec::with_capacity(cfg.steps + 1),
            })
            .collect();
        for p in &portrait {
            data[p.seed].trajectory.push([p.theta, p.phi]);
        }
        out.write(
            out_path(cfg, "classical", "json"),
            &json_text(&meta, &data)?,
        )?;
    }
    if cfg.wants(Format::Svg) {
        let mut series = vec![Vec::with_capacity(cfg.steps + 1); seeds.len()];
        for p in &portrait {
            series[p.seed].push((p.phi, p.theta));
        }
        let title = format!("Classical phase portrait, κ = {}", fmt_num(kappa));
        out.write(
            out_path(cfg, "classical", "svg"),
            &svg::scatter(&meta.to_json(), &title, &series),
        )?;
    }
    let regular = lyapunov
        .iter()
        .filter(|&&l| l < analysis::REGULAR_LAMBDA)
        .count();
    let chaotic = lyapunov
        .iter()
        .filter(|&&l| l > analysis::CHAOTIC_LAMBDA)
        .count();
    let max = lyapunov.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = lyapunov.iter().copied().fold(f64::INFINITY, f64::min);
    out.summary.push(format!(
        "lyapunov: min {} max {}; {regular} regular (<{}), {chaotic} chaotic (>{}) of {}",
        fmt_num(min),
        fmt_num(max),
        analysis::REGULAR_LAMBDA,
        analysis::CHAOTIC_LAMBDA,
        seeds.len()
    ));
    Ok(out)
}

pub fn lyapunov(cfg: &RunConfig) -> Result<Outcome> {
    let kappa = cfg.kappa()?;
    ensure_out_dir(&cfg.out)?;
    let grid = cfg.grid.spec()?;
    let lcfg = lyapunov_config(cfg, cfg.seed);
    let values = with_threads(cfg.threads, || lyapunov_map(&grid, kappa, &lcfg))??;
    let meta = Metadata::new(cfg);
    let mut out = Outcome::default();
    if cfg.wants(Format::Csv) {
        out.write(
            out_path(cfg, "lyapunov", "csv"),
            &grid_csv(&meta, &grid, "lambda", &values),
        )?;
    }
    if cfg.wants(Format::Json) {
        #[derive(Serialize)]
        struct Map<'a> {
            kappa: f64,
            grid: crate::config::Grid,
            lambda: &'a [f64],
        }
        let data = Map {
            kappa,
            grid: cfg.grid,
            lambda: &values,
        };
        out.write(out_path(cfg, "lyapunov", "json"), &json_text(&meta, &data)?)?;
    }
    if cfg.wants(Format::Svg) {
        let hi = values.iter().copied().fold(0.0, f64::max).max(1e-3);
        let title = format!("Largest Lyapunov exponent, κ = {}", fmt_num(kappa));
        let fig = svg::heatmap(&meta.to_json(), &title, &grid, &values, (0.0, hi), "λ");
        out.write(out_path(cfg, "lyapunov", "svg"), &fig)?;
    }
    let r = analysis::regime_contrast(&vec![0.0; values.len()], &values);
    out.summary.push(format!(
        "{} regular (<{}), {} chaotic (>{}) of {} points",
        r.n_regular,
        analysis::REGULAR_LAMBDA,
        r.n_chaotic,
        analysis::CHAOTIC_LAMBDA,
        values.len()
    ));
    Ok(out)
}
