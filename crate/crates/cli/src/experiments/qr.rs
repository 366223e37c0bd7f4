//! `qr`: reconstruction error of quantum QR across condition numbers, or a
//! single decomposition of a matrix file.

use rayon::prelude::*;
use serde::Serialize;

use qgs_core::linalg::{loss_of_orthogonality, random_matrix_with_condition, MatrixFile};
use qgs_core::qgs::CostLedger;
use qgs_core::qipe::IpeConfig;
use qgs_core::qqr::{qr_error, quantum_qr_with_policy, RankPolicy};
use qgs_core::Mode;

use super::{load_matrix, run_config, single, trial_seed, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{at_least, positive, unit_interval, Params};

/// Reconstruction error required below the `1/eps` transition.
pub const EXACT_TOL: f64 = 1e-8;
/// Fraction of trials that must meet the error target at each `kappa`.
pub const REQUIRED_FRACTION: f64 = 0.9;

#[derive(Debug, Serialize)]
struct Settings {
    dim: usize,
    cond: Vec<f64>,
    eps: Vec<f64>,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    inject_error: bool,
    trials: usize,
    seed: u64,
    matrix: Option<String>,
}

#[derive(Debug, Serialize)]
struct Row {
    kappa: f64,
    eps: f64,
    eta: f64,
}

#[derive(Debug, Serialize)]
struct Decomposition {
    q: MatrixFile,
    r: MatrixFile,
    reconstruction_error: f64,
    loss_of_orthogonality: f64,
    dependent_columns: Vec<usize>,
    ledger: CostLedger,
}

fn default_kappas() -> Vec<f64> {
    (0..=12).map(|i| 10f64.powf(i as f64 / 2.0)).collect()
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        dim: single("dim", &p.dim, 8)?,
        cond: p.cond.clone().unwrap_or_else(default_kappas),
        eps: p.eps.clone().unwrap_or_else(|| match p.matrix {
            Some(_) => vec![1e-2],
            None => vec![1e-2, 1e-3],
        }),
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Sampled),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Analytic),
        inject_error: p.inject_error.unwrap_or(false),
        trials: p.trials.unwrap_or(20),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
        matrix: p.matrix.as_ref().map(|m| m.display().to_string()),
    };
    at_least("dim", s.dim, 1)?;
    at_least("trials", s.trials, 1)?;
    positive("cond", &s.cond)?;
    unit_interval("eps", &s.eps)?;
    unit_interval("delta", &[s.delta])?;

    if let Some(path) = &p.matrix {
        return decompose_file(&s, &load_matrix(path)?, out);
    }

    let jobs: Vec<(usize, usize, usize)> = (0..s.eps.len())
        .flat_map(|e| (0..s.cond.len()).flat_map(move |k| (0..s.trials).map(move |t| (e, k, t))))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(e, k, t)| {
            let (eps, kappa) = (s.eps[e], s.cond[k]);
            let seed = trial_seed(s.seed, ((e * s.cond.len() + k) as u64) << 32 | t as u64);
            let a = random_matrix_with_condition(s.dim, s.dim, kappa, seed)?;
            let cfg = run_config(eps, s.mode, seed, s.inject_error)?;
            let ipe = IpeConfig::new(eps, s.delta).with_mode(s.ipe_mode).with_seed(seed);
            let qr = quantum_qr_with_policy(&a, &cfg, &ipe, RankPolicy::Skip)?;
            Ok(Row {
                kappa,
                eps,
                eta: qr_error(&a, &qr.q, &qr.r)?,
            })
        })
        .collect::<CliResult<Vec<Row>>>()?;
    out.write_csv("qr_kappa_sweep.csv", &rows)?;

    let mut checks = Vec::new();
    for &eps in &s.eps {
        let mut failing = Vec::new();
        for &kappa in &s.cond {
            let etas: Vec<f64> = rows
                .iter()
                .filter(|r| r.eps == eps && r.kappa == kappa)
                .map(|r| r.eta)
                .collect();
            let hits = if kappa * eps <= 1.0 + 1e-9 {
                etas.iter().filter(|&&x| x <= EXACT_TOL).count()
            } else if kappa * eps >= 10.0 - 1e-9 {
                etas.iter().filter(|&&x| x < eps).count()
            } else {
                continue;
            };
            if (hits as f64) < REQUIRED_FRACTION * etas.len() as f64 {
                failing.push(kappa);
            }
        }
        checks.push(Check::new(
            &format!("kappa-transition eps={eps:e}"),
            failing.is_empty(),
            format!("kappas below {:.0}% of trials on target: {failing:?}", 100.0 * REQUIRED_FRACTION),
        ));
    }
    Report::new(&s, checks)
}

fn decompose_file(s: &Settings, a: &qgs_core::ComplexMatrix, out: &mut OutputDir) -> CliResult<Report> {
    let eps = single("eps", &Some(s.eps.clone()), 1e-2)?;
    let cfg = run_config(eps, s.mode, s.seed, s.inject_error)?;
    let ipe = IpeConfig::new(eps, s.delta).with_mode(s.ipe_mode).with_seed(s.seed);
    let qr = quantum_qr_with_policy(a, &cfg, &ipe, RankPolicy::Skip)?;
    let result = Decomposition {
        q: MatrixFile::from(&qr.q),
        r: MatrixFile::from(&qr.r),
        reconstruction_error: qr_error(a, &qr.q, &qr.r)?,
        loss_of_orthogonality: loss_of_orthogonality(&qr.q),
        dependent_columns: qr.dependent_columns,
        ledger: qr.ledger,
    };
    out.write_json("qr.json", &result)?;
    let check = Check::new(
        "full-rank",
        result.dependent_columns.is_empty(),
        format!("dependent columns {:?}", result.dependent_columns),
    );
    Report::new(s, vec![check])
}
