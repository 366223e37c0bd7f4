//! `eigen`: spin-chain spectra by QR iteration.

use serde::Serialize;

use qgs_core::apps::eigen::{qr_iteration_eigenvalues, QrBackend};
use qgs_core::apps::spin::{model_hamiltonian, SpinModel};
use qgs_core::linalg::exact_eigensolve;
use qgs_core::qipe::IpeConfig;
use qgs_core::Mode;

use super::{run_config, single, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{positive, unit_interval, Params};

#[derive(Debug, Serialize)]
struct Settings {
    model: SpinModel,
    sites: usize,
    backend: QrBackend,
    max_iter: usize,
    tol: f64,
    eps: f64,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Output {
    model: SpinModel,
    sites: usize,
    backend: QrBackend,
    iterations: usize,
    eigenvalues: Vec<f64>,
    exact: Vec<f64>,
    max_error: f64,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let sites = p.sites.unwrap_or(3);
    let s = Settings {
        model: p.model.unwrap_or(SpinModel::Ising),
        sites,
        backend: p.backend.unwrap_or(QrBackend::Quantum),
        max_iter: p.max_iter.unwrap_or(10usize.saturating_mul(1 << sites.min(20))),
        tol: p.tol.unwrap_or(1e-6),
        eps: single("eps", &p.eps, 1e-4)?,
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Analytic),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Analytic),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    positive("tol", &[s.tol])?;
    unit_interval("eps", &[s.eps])?;
    unit_interval("delta", &[s.delta])?;
    let h = model_hamiltonian(s.model, s.sites)?;
    let cfg = run_config(s.eps, s.mode, s.seed, false)?;
    let ipe = IpeConfig::new(s.eps, s.delta).with_mode(s.ipe_mode).with_seed(s.seed);
    let result = qr_iteration_eigenvalues(&h, s.max_iter, s.tol, s.backend, &cfg, &ipe)?;
    let exact = exact_eigensolve(&h)?.values;
    let max_error = result
        .eigenvalues
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.write_json(
        "eigen.json",
        &Output {
            model: s.model,
            sites: s.sites,
            backend: s.backend,
            iterations: result.iterations,
            eigenvalues: result.eigenvalues,
            exact,
            max_error,
        },
    )?;
    let check = Check::new(
        "eigenvalues",
        max_error <= s.tol,
        format!("max error {max_error:.3e} <= {:e} after {} iterations", s.tol, result.iterations),
    );
    Report::new(&s, vec![check])
}
