//! Command-line experiment runner for the `qgs-core` simulations.

pub mod error;
pub mod experiments;
pub mod output;
pub mod params;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use error::CliResult;
use experiments::{Check, Runner};
use output::{FileRecord, OutputDir};
use params::Params;

#[derive(Debug, Parser)]
#[command(name = "qgs", version, about = "Quantum Gram-Schmidt and QR simulation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub params: Params,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Exit with status 2 when an acceptance threshold is missed.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Loss of orthogonality of classical vs quantum Gram-Schmidt.
    Qgs(RunArgs),
    /// Quantum QR reconstruction error across condition numbers.
    Qr(RunArgs),
    /// Accuracy of sampled inner-product estimates.
    QipeBench(RunArgs),
    /// Polynomial least-squares fits over a degree grid.
    Fit(RunArgs),
    /// Classify and solve a linear system.
    Linsolve(RunArgs),
    /// Laplace Dirichlet problem for point-charge potentials.
    Laplace(RunArgs),
    /// Spin-chain spectra by QR iteration.
    Eigen(RunArgs),
    /// Query and gate counts as the number of vectors grows.
    BenchScaling(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Qgs(_) => "qgs",
            Command::Qr(_) => "qr",
            Command::QipeBench(_) => "qipe-bench",
            Command::Fit(_) => "fit",
            Command::Linsolve(_) => "linsolve",
            Command::Laplace(_) => "laplace",
            Command::Eigen(_) => "eigen",
            Command::BenchScaling(_) => "bench-scaling",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Qgs(a)
            | Command::Qr(a)
            | Command::QipeBench(a)
            | Command::Fit(a)
            | Command::Linsolve(a)
            | Command::Laplace(a)
            | Command::Eigen(a)
            | Command::BenchScaling(a) => a,
        }
    }

    fn runner(&self) -> Runner {
        match self {
            Command::Qgs(_) => experiments::ortho::run,
            Command::Qr(_) => experiments::qr::run,
            Command::QipeBench(_) => experiments::qipe::run,
            Command::Fit(_) => experiments::fit::run,
            Command::Linsolve(_) => experiments::linsolve::run,
            Command::Laplace(_) => experiments::laplace::run,
            Command::Eigen(_) => experiments::eigen::run,
            Command::BenchScaling(_) => experiments::scaling::run,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub experiment: String,
    pub version: String,
    pub seed: Option<u64>,
    pub settings: serde_json::Value,
    pub checks: Vec<Check>,
    pub wall_time_seconds: f64,
    pub files: Vec<FileRecord>,
}

#[derive(Debug)]
pub struct Outcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
}

impl Outcome {
    pub fn all_checks_pass(&self) -> bool {
        self.manifest.checks.iter().all(|c| c.pass)
    }
}

/// Resolve parameters, run the experiment and write its files plus
/// `manifest.json` into `<out>/<experiment>/`.
pub fn run(command: &Command) -> CliResult<Outcome> {
    let args = command.args();
    let params = match &args.config {
        Some(path) => args.params.clone().over(Params::from_file(path)?),
        None => args.params.clone(),
    };
    let out_dir = params.out_dir().join(command.name());
    let mut out = OutputDir::create(&out_dir)?;
    let start = Instant::now();
    let report = (command.runner())(&params, &mut out)?;
    let manifest = Manifest {
        experiment: command.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: report.settings.get("seed").and_then(|v| v.as_u64()),
        settings: report.settings,
        checks: report.checks,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        files: out.files().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(out.root().join("manifest.json"), text).map_err(|source| error::CliError::Output {
        path: out.root().join("manifest.json").display().to_string(),
        source,
    })?;
    Ok(Outcome { out_dir, manifest })
}
