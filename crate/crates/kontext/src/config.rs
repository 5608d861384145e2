//! Effective run configuration: flags override a config file, which
//! overrides defaults. The merged [`RunConfig`] is echoed into every output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use kontext_core::classical::MapVariant;
use kontext_core::scan::{GridSpec, DEFAULT_KICKS};
use kontext_core::OptimizerConfig;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Grid {
    pub fn spec(self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.n_theta, self.n_phi)?)
    }
}

impl Default for Grid {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            n_theta: g.n_theta,
            n_phi: g.n_phi,
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    /// Parses `AxB` as `A` polar rows by `B` azimuthal columns.
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected AxB, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("grid sizes must be positive integers, got {s:?}"))
        };
        Ok(Self {
            n_theta: parse(a)?,
            n_phi: parse(b)?,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_theta, self.n_phi)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GridRepr {
    Text(String),
    Dims { n_theta: usize, n_phi: usize },
}

impl TryFrom<GridRepr> for Grid {
    type Error = String;

    fn try_from(r: GridRepr) -> Result<Self, String> {
        match r {
            GridRepr::Text(s) => s.parse(),
            GridRepr::Dims { n_theta, n_phi } if n_theta > 0 && n_phi > 0 => {
                Ok(Self { n_theta, n_phi })
            }
            GridRepr::Dims { .. } => Err("grid sizes must be positive".into()),
        }
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr::Dims {
            n_theta: g.n_theta,
            n_phi: g.n_phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MapVariantArg {
    #[default]
    Norm,
    Verbatim,
}

impl From<MapVariantArg> for MapVariant {
    fn from(v: MapVariantArg) -> Self {
        match v {
            MapVariantArg::Norm => MapVariant::NormPreserving,
            MapVariantArg::Verbatim => MapVariant::Verbatim,
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub restarts: usize,
    pub max_evals: usize,
    pub f_tol: f64,
    pub initial_step: f64,
}

impl From<OptimizerConfig> for OptimizerSettings {
    fn from(c: OptimizerConfig) -> Self {
        Self {
            restarts: c.restarts,
            max_evals: c.max_evals,
            f_tol: c.f_tol,
            initial_step: c.initial_step,
        }
    }
}

impl From<OptimizerSettings> for OptimizerConfig {
    fn from(s: OptimizerSettings) -> Self {
        Self {
            restarts: s.restarts,
            max_evals: s.max_evals,
            f_tol: s.f_tol,
            initial_step: s.initial_step,
        }
    }
}

/// The κ values swept when none are given: `0, 0.25, …, 3.0, π`.
pub fn default_kappas() -> Vec<f64> {
    let mut v: Vec<f64> = (0..=12).map(|i| 0.25 * i as f64).collect();
    v.push(std::f64::consts::PI);
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappas: Option<Vec<f64>>,
    pub grid: Grid,
    pub kicks: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub map_variant: MapVariantArg,
    pub formats: Vec<Format>,
    pub optimizer: OptimizerSettings,
    pub seeds: usize,
    pub steps: usize,
    pub lyapunov_steps: usize,
    pub cache: bool,
}

impl RunConfig {
    pub fn kappa(&self) -> Result<f64> {
        let k = self
            .kappa
            .ok_or_else(|| Error::Usage(format!("{}: --kappa is required", self.command)))?;
        Ok(kontext_core::validate_kappa(k)?)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Every setting as optional, as read from flags or a config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub kappa: Option<f64>,
    pub kappas: Option<Vec<f64>>,
    pub grid: Option<Grid>,
    pub kicks: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub map_variant: Option<MapVariantArg>,
    pub formats: Option<Vec<Format>>,
    pub restarts: Option<usize>,
    pub max_evals: Option<usize>,
    pub f_tol: Option<f64>,
    pub initial_step: Option<f64>,
    pub seeds: Option<usize>,
    pub steps: Option<usize>,
    pub lyapunov_steps: Option<usize>,
    pub cache: Option<bool>,
}

impl PartialConfig {
    /// Reads TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| Error::Parse {
            path: path.to_owned(),
            message,
        })
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        macro_rules! pick {
            ($($f:ident),*) => { PartialConfig { $($f: self.$f.or(lower.$f)),* } };
        }
        pick!(
            kappa,
            kappas,
            grid,
            kicks,
            seed,
            threads,
            out,
            map_variant,
            formats,
            restarts,
            max_evals,
            f_tol,
            initial_step,
            seeds,
            steps,
            lyapunov_steps,
            cache
        )
    }

    pub fn resolve(self, command: &str) -> Result<RunConfig> {
        let opt = OptimizerConfig::default();
        let optimizer = OptimizerSettings {
            restarts: self.restarts.unwrap_or(opt.restarts),
            max_evals: self.max_evals.unwrap_or(opt.max_evals),
            f_tol: self.f_tol.unwrap_or(opt.f_tol),
            initial_step: self.initial_step.unwrap_or(opt.initial_step),
        };
        if !(optimizer.f_tol >= 0.0 && optimizer.initial_step > 0.0 && optimizer.max_evals > 0) {
            return Err(Error::Usage("invalid optimizer settings".into()));
        }
        let kicks = self.kicks.unwrap_or(DEFAULT_KICKS);
        if kicks == 0 {
            return Err(Error::Usage("--kicks must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        let mut formats = self
            .formats
            .filter(|f| !f.is_empty())
            .unwrap_or_else(|| vec![Format::Csv, Format::Json, Format::Svg]);
        formats.sort();
        formats.dedup();
        Ok(RunConfig {
            command: command.to_owned(),
            kappa: self.kappa,
            kappas: self.kappas,
            grid: self.grid.unwrap_or_default(),
            kicks,
            seed: self.seed.unwrap_or(0),
            threads: self.threads,
            out: self.out.unwrap_or_else(|| PathBuf::from("out")),
            map_variant: self.map_variant.unwrap_or_default(),
            formats,
            optimizer,
            seeds: self.seeds.unwrap_or(40),
            steps: self.steps.unwrap_or(500),
            lyapunov_steps: self.lyapunov_steps.unwrap_or(2000),
            cache: self.cache.unwrap_or(true),
        })
    }
}
