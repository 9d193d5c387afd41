//! Run configuration: CLI flags override the environment, which overrides
//! the TOML config file, which overrides the defaults.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "TRIVEX_CACHE";

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub k_max: usize,
    pub enum_cap_log2: usize,
    pub dense_cap: usize,
    pub iter_cap: usize,
    /// Comparison tolerance against the published 6-decimal table values.
    pub table_tol: f64,
    pub out: PathBuf,
    pub cache: PathBuf,
    pub threads: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_max: 5,
            enum_cap_log2: 16,
            dense_cap: 2048,
            iter_cap: 600,
            table_tol: 1e-5,
            out: PathBuf::from("out"),
            cache: PathBuf::from("out/cache"),
            threads: 1,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    k_max: Option<usize>,
    enum_cap_log2: Option<usize>,
    dense_cap: Option<usize>,
    iter_cap: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    cache: Option<PathBuf>,
    threads: Option<usize>,
    seed: Option<u64>,
}

/// Flag values as parsed; `None` means "not given".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub k_max: Option<usize>,
    pub dense_cap: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

pub fn load(config_file: Option<&Path>, flags: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = config_file {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: FileConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(v) = file.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = file.enum_cap_log2 {
            cfg.enum_cap_log2 = v;
        }
        if let Some(v) = file.dense_cap {
            cfg.dense_cap = v;
        }
        if let Some(v) = file.iter_cap {
            cfg.iter_cap = v;
        }
        if let Some(v) = file.tol {
            cfg.table_tol = v;
        }
        if let Some(v) = file.out {
            cfg.out = v;
        }
        if let Some(v) = file.cache {
            cfg.cache = v;
        }
        if let Some(v) = file.threads {
            cfg.threads = v;
        }
        if let Some(v) = file.seed {
            cfg.seed = v;
        }
    }
    if let Ok(dir) = std::env::var(CACHE_ENV) {
        if !dir.is_empty() {
            cfg.cache = PathBuf::from(dir);
        }
    }
    if let Some(v) = flags.k_max {
        cfg.k_max = v;
    }
    if let Some(v) = flags.dense_cap {
        cfg.dense_cap = v;
    }
    if let Some(v) = flags.tol {
        cfg.table_tol = v;
    }
    if let Some(v) = flags.out.clone() {
        cfg.out = v;
    }
    if let Some(v) = flags.cache.clone() {
        cfg.cache = v;
    }
    if let Some(v) = flags.threads {
        cfg.threads = v;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<()> {
    if cfg.k_max == 0 || cfg.k_max > 6 {
        bail!("--k-max must lie in 1..=6, got {}", cfg.k_max);
    }
    if cfg.dense_cap == 0 || cfg.enum_cap_log2 == 0 || cfg.iter_cap == 0 || cfg.threads == 0 {
        bail!("caps and thread counts must be positive");
    }
    if !(cfg.table_tol > 0.0) {
        bail!("--tol must be positive");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flag_over_file_over_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "k_max = 3\ndense_cap = 512\n").unwrap();
        let flags = Overrides {
            dense_cap: Some(1024),
            ..Default::default()
        };
        let cfg = load(Some(&path), &flags).unwrap();
        assert_eq!(cfg.k_max, 3); // from file
        assert_eq!(cfg.dense_cap, 1024); // flag wins
        assert_eq!(cfg.iter_cap, 600); // default
    }

    #[test]
    fn bad_values_are_rejected() {
        let flags = Overrides {
            k_max: Some(9),
            ..Default::default()
        };
        assert!(load(None, &flags).is_err());
        let flags = Overrides {
            tol: Some(0.0),
            ..Default::default()
        };
        assert!(load(None, &flags).is_err());
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "k_maxx = 3\n").unwrap();
        assert!(load(Some(&path), &Overrides::default()).is_err());
    }
}
