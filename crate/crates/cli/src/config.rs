//! Run configuration: built-in defaults, then a `key = value` file, then flags.

use std::path::{Path, PathBuf};

use rsel_core::Numerics;

use crate::error::CliError;

/// Default config file looked up in the working directory.
pub const DEFAULT_CONFIG: &str = "rsel.conf";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub numerics: Numerics,
    pub replications: u64,
    pub seed: u64,
    pub workers: usize,
    pub output: Option<PathBuf>,
    /// Largest k visited by the reproduction sweeps.
    pub max_k: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut numerics = Numerics::default();
        numerics.quad.abs_tol = 1e-10;
        numerics.quad.rel_tol = 1e-10;
        numerics.root.tol = 1e-10;
        Self {
            numerics,
            replications: 100_000,
            seed: 20_240_101,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            output: None,
            max_k: 10_000_000,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("cannot parse {key} = {value:?}")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "abs_tol" => self.numerics.quad.abs_tol = parse(key, value)?,
            "rel_tol" => self.numerics.quad.rel_tol = parse(key, value)?,
            "max_subdivisions" => self.numerics.quad.max_subdivisions = parse(key, value)?,
            "root_tol" => self.numerics.root.tol = parse(key, value)?,
            "max_iter" => self.numerics.root.max_iter = parse(key, value)?,
            "replications" => self.replications = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "workers" => self.workers = parse(key, value)?,
            "max_k" => self.max_k = parse(key, value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            "format" if value == "csv" => {}
            "format" => return Err(CliError::Config(format!("unsupported output format {value:?}"))),
            _ => return Err(CliError::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a config file body. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Reads `explicit` if given (it must exist), else `rsel.conf` if present.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let mut config = Self::default();
        let path = match explicit {
            Some(p) => Some(p.to_path_buf()),
            None => Some(PathBuf::from(DEFAULT_CONFIG)).filter(|p| p.is_file()),
        };
        if let Some(path) = path {
            let text =
                std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            config.apply_text(&text)?;
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let q = &self.numerics.quad;
        if !(q.abs_tol > 0.0 && q.rel_tol > 0.0 && self.numerics.root.tol > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        if q.max_subdivisions == 0 || self.numerics.root.max_iter == 0 {
            return Err(CliError::Config("iteration limits must be positive".into()));
        }
        if self.replications == 0 {
            return Err(CliError::Config("replications must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}
