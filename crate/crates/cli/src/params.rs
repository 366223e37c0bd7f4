//! Experiment parameters shared by every subcommand. The same struct is
//! parsed from flags and from a JSON config file; flags win.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use qgs_core::apps::eigen::QrBackend;
use qgs_core::apps::laplace::ChargeCase;
use qgs_core::apps::spin::SpinModel;
use qgs_core::Mode;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QGS_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "qgs-out";

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// Vector dimension(s) N, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<Vec<usize>>,
    /// Number of vectors M (defaults to N).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Condition number(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond: Option<Vec<f64>>,
    /// Target precision(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    /// Failure probability of inner-product estimates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Measurement mode of the Gram-Schmidt steps.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Measurement mode of the inner-product estimates.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ipe_mode: Option<Mode>,
    /// Perturb every Hamiltonian evolution by a random error of size eps^4.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_error: Option<bool>,
    /// Base seed; every trial derives its own stream from it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random instances per grid point.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Grid points per axis for the Laplace solver.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Charge configuration(s) for the Laplace solver, comma separated.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<Vec<ChargeCase>>,
    /// Spin chain for the eigensolver.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<SpinModel>,
    /// Number of spins in the chain.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    /// QR backend of the eigensolver.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<QrBackend>,
    /// QR iteration limit of the eigensolver.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Convergence tolerance of the eigensolver.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Largest polynomial degree of the fitting grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    /// Matrix JSON file to decompose or solve instead of a random one.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PathBuf>,
    /// Right-hand side JSON file (a matrix file with one column).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<PathBuf>,
    /// Output directory; defaults to $QGS_OUT_DIR, then ./qgs-out.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr; $($field:ident),* $(,)?) => {
        Params { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Params {
    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Params) -> Params {
        overlay!(base, self;
            dim, count, cond, eps, delta, mode, ipe_mode, inject_error, seed, trials,
            grid, case, model, sites, backend, max_iter, tol, max_degree, matrix, rhs, out)
    }

    pub fn from_file(path: &Path) -> CliResult<Params> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

/// Check helpers for resolved values.
pub fn positive(name: &str, values: &[f64]) -> CliResult<()> {
    match values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        Some(v) => Err(CliError::invalid(format!("{name} must be positive, got {v}"))),
        None if values.is_empty() => Err(CliError::invalid(format!("{name} must not be empty"))),
        None => Ok(()),
    }
}

pub fn unit_interval(name: &str, values: &[f64]) -> CliResult<()> {
    positive(name, values)?;
    match values.iter().find(|v| **v >= 1.0) {
        Some(v) => Err(CliError::invalid(format!("{name} must lie in (0, 1), got {v}"))),
        None => Ok(()),
    }
}

pub fn at_least(name: &str, value: usize, min: usize) -> CliResult<()> {
    if value < min {
        return Err(CliError::invalid(format!("{name} must be at least {min}, got {value}")));
    }
    Ok(())
}
