//! CSV and JSON output. Every file carries a [`Metadata`] block: JSON files
//! as a `meta` field, CSV files as a leading `# {json}` comment line.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use kontext_core::scan::{GridSpec, ScanResult};

use crate::config::{Grid, OptimizerSettings, RunConfig};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata<'a> {
    pub schema_version: u32,
    pub library_version: &'static str,
    pub seed: u64,
    pub config: &'a RunConfig,
}

impl<'a> Metadata<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            library_version: LIBRARY_VERSION,
            seed: config.seed,
            config,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metadata is always serializable")
    }
}

/// `v` with 9 significant digits in the shortest of fixed or exponent
/// notation, trailing zeros dropped (like C's `%.9g`).
pub fn fmt_num(v: f64) -> String {
    const DIGITS: i32 = 9;
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_owned());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// CSV text: metadata comment, header, rows. LF line endings.
pub fn csv_text<I, R>(meta: &Metadata, header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: AsRef<[String]>,
{
    let mut out = String::new();
    writeln!(out, "# {}", meta.to_json()).unwrap();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.as_ref().join(","));
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub reason: String,
}

/// A scan's data, independent of how it was requested. This is also the
/// on-disk cache format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub schema_version: u32,
    pub kappa: f64,
    pub n_kicks: usize,
    pub grid: Grid,
    pub seed: u64,
    /// Row-major over `(θ, φ)`.
    pub k_values: Vec<f64>,
    pub degraded: bool,
    pub failures: Vec<FailureRecord>,
    pub optimizer: OptimizerSettings,
}

impl From<&ScanResult> for ScanRecord {
    fn from(s: &ScanResult) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kappa: s.kappa,
            n_kicks: s.n_kicks,
            grid: Grid {
                n_theta: s.grid.n_theta,
                n_phi: s.grid.n_phi,
            },
            seed: s.seed,
            k_values: s.k_values.clone(),
            degraded: s.degraded,
            failures: s
                .failures
                .iter()
                .map(|f| FailureRecord {
                    index: f.index,
                    theta: f.theta,
                    phi: f.phi,
                    reason: f.reason.describe(),
                })
                .collect(),
            optimizer: s.optimizer.into(),
        }
    }
}

impl ScanRecord {
    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            n_theta: self.grid.n_theta,
            n_phi: self.grid.n_phi,
        }
    }

    pub fn mean_k(&self) -> f64 {
        crate::analysis::mean(&self.k_values).unwrap_or(0.0)
    }

    pub fn csv(&self, meta: &Metadata) -> String {
        grid_csv(meta, &self.grid_spec(), "k", &self.k_values)
    }

    /// The scan file: the record plus run metadata.
    pub fn json(&self, meta: &Metadata) -> Result<String> {
        #[derive(Serialize)]
        struct ScanFile<'a> {
            #[serde(flatten)]
            record: &'a ScanRecord,
            library_version: &'static str,
            config: &'a RunConfig,
        }
        let mut s = serde_json::to_string_pretty(&ScanFile {
            record: self,
            library_version: meta.library_version,
            config: meta.config,
        })?;
        s.push('\n');
        Ok(s)
    }
}

/// `theta,phi,<column>` rows for a row-major grid map.
pub fn grid_csv(meta: &Metadata, grid: &GridSpec, column: &str, values: &[f64]) -> String {
    let rows = grid
        .points()
        .zip(values)
        .map(|((t, p), v)| [fmt_num(t), fmt_num(p), fmt_num(*v)]);
    csv_text(meta, &["theta", "phi", column], rows)
}

pub fn json_text<T: Serialize>(meta: &Metadata, data: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        meta: &'a Metadata<'a>,
        data: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Doc { meta, data })?;
    s.push('\n');
    Ok(s)
}
