//! One module per subcommand. Every experiment resolves its parameters
//! against its own defaults, writes its files and returns threshold checks.

pub mod eigen;
pub mod fit;
pub mod laplace;
pub mod linsolve;
pub mod ortho;
pub mod qipe;
pub mod qr;
pub mod scaling;

use serde::Serialize;

use qgs_core::qgs::RunConfig;
use qgs_core::rng::{derive_seed, domain};
use qgs_core::{ComplexMatrix, Mode};

use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::params::Params;

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    /// Resolved parameters, echoed into the manifest.
    pub settings: serde_json::Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new<S: Serialize>(settings: &S, checks: Vec<Check>) -> CliResult<Self> {
        Ok(Report {
            settings: serde_json::to_value(settings)?,
            checks,
        })
    }
}

pub type Runner = fn(&Params, &mut OutputDir) -> CliResult<Report>;

/// Exactly one value from a list parameter.
pub(crate) fn single<T: Copy + std::fmt::Debug>(name: &str, values: &Option<Vec<T>>, default: T) -> CliResult<T> {
    match values.as_deref() {
        None => Ok(default),
        Some([v]) => Ok(*v),
        Some(other) => Err(CliError::invalid(format!(
            "{name} takes a single value here, got {other:?}"
        ))),
    }
}

pub(crate) fn run_config(eps: f64, mode: Mode, seed: u64, inject: bool) -> CliResult<RunConfig> {
    let cfg = RunConfig::new(eps)
        .with_mode(mode)
        .with_seed(seed)
        .with_inject_error(inject);
    cfg.validate()?;
    Ok(cfg)
}

pub(crate) fn trial_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, domain::TRIAL, index)
}

/// Least-squares slope of `ln y` against `ln x`.
pub(crate) fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

pub(crate) fn load_matrix(path: &std::path::Path) -> CliResult<ComplexMatrix> {
    qgs_core::linalg::read_matrix(path).map_err(|e| CliError::Config {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}
