//! On-disk scan cache keyed by a SHA-256 of every parameter that affects
//! the values.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Grid, OptimizerSettings};
use crate::error::{Error, Result};
use crate::formats::{ScanRecord, LIBRARY_VERSION, SCHEMA_VERSION};

pub const CACHE_DIR_ENV: &str = "KONTEXT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanKey {
    pub kappa: f64,
    pub n_kicks: usize,
    pub grid: Grid,
    pub seed: u64,
    pub optimizer: OptimizerSettings,
}

impl ScanKey {
    pub fn digest(&self) -> String {
        #[derive(Serialize)]
        struct Keyed<'a> {
            schema_version: u32,
            library_version: &'static str,
            key: &'a ScanKey,
        }
        let text = serde_json::to_vec(&Keyed {
            schema_version: SCHEMA_VERSION,
            library_version: LIBRARY_VERSION,
            key: self,
        })
        .expect("key is serializable");
        hex::encode(Sha256::digest(text))
    }

    fn matches(&self, r: &ScanRecord) -> bool {
        r.schema_version == SCHEMA_VERSION
            && r.kappa.to_bits() == self.kappa.to_bits()
            && r.n_kicks == self.n_kicks
            && r.grid == self.grid
            && r.seed == self.seed
            && r.optimizer == self.optimizer
            && r.k_values.len() == self.grid.n_theta * self.grid.n_phi
    }
}

#[derive(Debug, Clone)]
pub struct ScanCache {
    dir: PathBuf,
}

impl ScanCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$KONTEXT_CACHE_DIR` if set, else `<out>/.kontext-cache`.
    pub fn for_output(out: &Path) -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(out.join(".kontext-cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &ScanKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// A cached record for `key`; unreadable or mismatched entries count as
    /// misses.
    pub fn load(&self, key: &ScanKey) -> Option<ScanRecord> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let record: ScanRecord = serde_json::from_str(&text).ok()?;
        key.matches(&record).then_some(record)
    }

    pub fn store(&self, key: &ScanKey, record: &ScanRecord) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let text = serde_json::to_string(record)?;
        std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }
}
