//! Run configuration: defaults, an optional TOML file, then command-line
//! overrides, in that order of precedence.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sphere_strings::geodesic::{IndexOptions, ShootingOptions};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShootingConfig {
    pub tol: f64,
    pub max_iterations: usize,
    pub fd_step: f64,
    pub svd_cutoff: f64,
    pub steps_per_pi: usize,
    pub drift_tol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        let d = ShootingOptions::default();
        ShootingConfig {
            tol: d.tol,
            max_iterations: d.max_iterations,
            fd_step: d.fd_step,
            svd_cutoff: d.svd_cutoff,
            steps_per_pi: d.steps_per_pi,
            drift_tol: d.drift_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexConfig {
    pub null_threshold: f64,
    pub ambiguous_upper: f64,
    pub candidate_threshold: f64,
    pub residual_tol: f64,
}

impl Default for IndexConfig {
    fn default() -> Self {
        let d = IndexOptions::default();
        IndexConfig {
            null_threshold: d.null_threshold,
            ambiguous_upper: d.ambiguous_upper,
            candidate_threshold: d.candidate_threshold,
            residual_tol: d.residual_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub format: Format,
    /// Seed for every random draw (initial-velocity guesses).
    pub seed: u64,
    /// Index cutoff for the exhaustive table checks.
    pub cutoff: i64,
    /// Metric used by the geodesic commands when `--metric` is absent.
    pub metric: String,
    pub shooting: ShootingConfig,
    pub index: IndexConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: Format::Text,
            seed: 0x5eed_0001,
            cutoff: 10,
            metric: "round".into(),
            shooting: ShootingConfig::default(),
            index: IndexConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))
    }

    pub fn shooting_options(&self) -> ShootingOptions {
        let s = &self.shooting;
        ShootingOptions {
            tol: s.tol,
            max_iterations: s.max_iterations,
            fd_step: s.fd_step,
            svd_cutoff: s.svd_cutoff,
            steps_per_pi: s.steps_per_pi,
            drift_tol: s.drift_tol,
        }
    }

    pub fn index_options(&self) -> IndexOptions {
        let i = &self.index;
        IndexOptions {
            null_threshold: i.null_threshold,
            ambiguous_upper: i.ambiguous_upper,
            candidate_threshold: i.candidate_threshold,
            residual_tol: i.residual_tol,
            steps_per_pi: self.shooting.steps_per_pi,
            drift_tol: self.shooting.drift_tol,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("the run configuration always serializes")
    }
}

/// A metric given inline (`round`, `ellipsoid:1,1,1.1`, `conformal:…`) or
/// as the path of a key-value file holding `metric = "…"`.
pub fn resolve_metric(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if !path.is_file() {
        return Ok(arg.to_string());
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct MetricFile {
        metric: String,
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))?;
    let f: MetricFile = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e)))?;
    Ok(f.metric)
}
