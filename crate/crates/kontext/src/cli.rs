//! Argument parsing and dispatch for the `kontext` binary.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::config::{Format, Grid, MapVariantArg, PartialConfig, RunConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "kontext",
    version,
    about = "Kicked-top KCBS contextuality experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical phase portrait and per-seed Lyapunov exponents.
    Classical {
        #[command(flatten)]
        common: Common,
        /// Number of initial conditions.
        #[arg(long)]
        seeds: Option<usize>,
        /// Kicks per trajectory.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Time-averaged violation K over a (θ, φ) grid.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Disable the on-disk scan cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Phase-space mean of K as a function of κ.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated κ values.
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, conflicts_with = "count")]
        kappas: Option<Vec<f64>>,
        /// Sweep this many evenly spaced κ values over [0, π].
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        no_cache: bool,
    },
    /// β′ traces at the classical fixed points and period-4 orbit.
    Points {
        #[command(flatten)]
        common: Common,
    },
    /// Largest Lyapunov exponent of the classical map over a (θ, φ) grid.
    Lyapunov {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Kick strength, in [0, π].
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Grid size as THETAxPHI, e.g. 25x25.
    #[arg(long)]
    pub grid: Option<Grid>,
    /// Kicks per trajectory for K.
    #[arg(long)]
    pub kicks: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub map_variant: Option<MapVariantArg>,
    /// Output formats; repeat for several (default: all).
    #[arg(long, value_enum)]
    pub format: Vec<Format>,
    /// TOML or JSON file with default settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random restarts per KCBS maximization.
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Objective evaluations per local search.
    #[arg(long)]
    pub max_evals: Option<usize>,
    /// Kicks averaged for each Lyapunov exponent.
    #[arg(long)]
    pub lyapunov_steps: Option<usize>,
}

impl Common {
    fn partial(&self) -> PartialConfig {
        PartialConfig {
            kappa: self.kappa,
            grid: self.grid,
            kicks: self.kicks,
            seed: self.seed,
            threads: self.threads,
            out: self.out.clone(),
            map_variant: self.map_variant,
            formats: (!self.format.is_empty()).then(|| self.format.clone()),
            restarts: self.restarts,
            max_evals: self.max_evals,
            lyapunov_steps: self.lyapunov_steps,
            ..Default::default()
        }
    }
}

fn count_kappas(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n)
            .map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Classical { .. } => "classical",
            Self::Scan { .. } => "scan",
            Self::Sweep { .. } => "sweep",
            Self::Points { .. } => "points",
            Self::Lyapunov { .. } => "lyapunov",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Self::Classical { common, .. }
            | Self::Scan { common, .. }
            | Self::Sweep { common, .. }
            | Self::Points { common }
            | Self::Lyapunov { common } => common,
        }
    }

    /// Merges flags over the config file over defaults.
    pub fn config(&self) -> Result<RunConfig> {
        let common = self.common();
        let mut flags = common.partial();
        match self {
            Self::Classical { seeds, steps, .. } => {
                flags.seeds = *seeds;
                flags.steps = *steps;
            }
            Self::Scan { no_cache, .. } => {
                flags.cache = no_cache.then_some(false);
            }
            Self::Sweep {
                kappas,
                count,
                no_cache,
                ..
            } => {
                flags.kappas = match (kappas, count) {
                    (Some(k), _) => Some(k.clone()),
                    (None, Some(n)) => Some(count_kappas(*n)),
                    (None, None) => None,
                };
                flags.cache = no_cache.then_some(false);
            }
            Self::Points { .. } | Self::Lyapunov { .. } => {}
        }
        let file = match &common.config {
            Some(path) => PartialConfig::load(path)?,
            None => PartialConfig::default(),
        };
        flags.over(file).resolve(self.name())
    }

    pub fn run(&self) -> Result<(RunConfig, Outcome)> {
        let cfg = self.config()?;
        let outcome = match self {
            Self::Classical { .. } => commands::classical(&cfg),
            Self::Scan { .. } => commands::scan(&cfg),
            Self::Sweep { .. } => commands::sweep(&cfg),
            Self::Points { .. } => commands::points(&cfg),
            Self::Lyapunov { .. } => commands::lyapunov(&cfg),
        }?;
        Ok((cfg, outcome))
    }
}

/// Entry point used by the binary: parses `args`, runs, reports.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let started = std::time::Instant::now();
    match cli.command.run() {
        Ok((cfg, outcome)) => {
            eprintln!(
                "config: {}",
                serde_json::to_string(&cfg).unwrap_or_else(|_| String::from("?"))
            );
            for line in &outcome.summary {
                println!("{line}");
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            eprintln!("done in {:.1} s", started.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run `kontext {} --help` for usage", cli.command.name());
            }
            ExitCode::from(e.exit_code())
        }
    }
}
