//! `fit`: mean test error of polynomial fits over a grid of true and
//! fitted degrees, plus one quadratic example.

use rayon::prelude::*;
use serde::Serialize;

use qgs_core::apps::fit::{
    fit_trial, polyfit_qr, quadratic_example_data, relative_error, FitProblem, FitReport,
};
use qgs_core::qgs::RunConfig;
use qgs_core::qipe::IpeConfig;
use qgs_core::Mode;

use super::{single, trial_seed, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{at_least, unit_interval, Params};

/// Analytic-mode dependence threshold for Vandermonde columns, whose
/// residual weight can sit well below the default `eps^2`.
pub const FIT_DEP_THRESHOLD: f64 = 1e-10;
/// Ceiling on the mean test error at `r = k = 2`.
pub const QUADRATIC_TOL: f64 = 0.1;

#[derive(Debug, Serialize)]
struct Settings {
    max_degree: usize,
    trials: usize,
    eps: f64,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    r: usize,
    k: usize,
    trial: usize,
    train_error: f64,
    test_error: f64,
}

#[derive(Debug, Serialize)]
struct Summary {
    degrees: Vec<usize>,
    /// `mean_test_error[r - 1][k - 1]`.
    mean_test_error: Vec<Vec<f64>>,
    best_k: Vec<usize>,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        max_degree: p.max_degree.unwrap_or(4),
        trials: p.trials.unwrap_or(20),
        eps: single("eps", &p.eps, 0.1)?,
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Analytic),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Sampled),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    at_least("max-degree", s.max_degree, 1)?;
    at_least("trials", s.trials, 1)?;
    unit_interval("eps", &[s.eps])?;
    unit_interval("delta", &[s.delta])?;
    let cfg = RunConfig {
        dep_threshold: FIT_DEP_THRESHOLD,
        ..RunConfig::new(s.eps).with_mode(s.mode)
    };
    cfg.validate()?;
    let ipe = IpeConfig::new(s.eps, s.delta).with_mode(s.ipe_mode);

    let degrees: Vec<usize> = (1..=s.max_degree).collect();
    let jobs: Vec<(usize, usize, usize)> = degrees
        .iter()
        .flat_map(|&r| degrees.iter().flat_map(move |&k| (0..s.trials).map(move |t| (r, k, t))))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(r, k, t)| {
            let seed = trial_seed(s.seed, (r as u64) << 32 | t as u64);
            let report = fit_trial(r, k, seed, &cfg, &ipe)?;
            Ok(Row {
                r,
                k,
                trial: t,
                train_error: report.train_error,
                test_error: report.test_error,
            })
        })
        .collect::<CliResult<Vec<Row>>>()?;
    out.write_csv("fit_grid.csv", &rows)?;

    let mean = |r: usize, k: usize| {
        let errs: Vec<f64> = rows.iter().filter(|x| x.r == r && x.k == k).map(|x| x.test_error).collect();
        errs.iter().sum::<f64>() / errs.len() as f64
    };
    let table: Vec<Vec<f64>> = degrees.iter().map(|&r| degrees.iter().map(|&k| mean(r, k)).collect()).collect();
    let best_k: Vec<usize> = table
        .iter()
        .map(|row| {
            let (i, _) = row.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty row");
            degrees[i]
        })
        .collect();
    out.write_json(
        "fit_summary.json",
        &Summary {
            degrees: degrees.clone(),
            mean_test_error: table.clone(),
            best_k: best_k.clone(),
        },
    )?;
    out.write_json("fit_example.json", &quadratic_example(s.seed, &cfg, &ipe)?)?;

    let mut checks = vec![Check::new(
        "fit-diagonal",
        best_k == degrees,
        format!("best fitted degree per true degree {best_k:?}"),
    )];
    if s.max_degree >= 2 {
        let e = table[1][1];
        checks.push(Check::new(
            "fit-quadratic",
            e <= QUADRATIC_TOL,
            format!("mean test error at r = k = 2: {e:.4} <= {QUADRATIC_TOL}"),
        ));
    }
    Report::new(&s, checks)
}

fn quadratic_example(seed: u64, cfg: &RunConfig, ipe: &IpeConfig) -> CliResult<FitReport> {
    let (train, test) = quadratic_example_data(seed);
    let problem = FitProblem::new(train.clone(), 2)?;
    let coefficients = polyfit_qr(&problem, &cfg.with_seed(seed), &ipe.with_seed(seed))?;
    Ok(FitReport {
        degree: 2,
        train_error: relative_error(&coefficients, &train),
        test_error: relative_error(&coefficients, &test),
        coefficients,
    })
}
