//! `laplace`: potential of point-charge configurations on `[-1, 1]^2`.

use serde::Serialize;

use qgs_core::apps::laplace::{electric_field, laplace_dirichlet_solve, ChargeCase, DEFAULT_GRID, MIN_GRID};
use qgs_core::qipe::IpeConfig;
use qgs_core::Mode;

use super::{run_config, single, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{at_least, unit_interval, Params};

/// Ceiling on the interior relative error at the default grid size.
pub const RELATIVE_TOL: f64 = 0.1;

#[derive(Debug, Serialize)]
struct Settings {
    grid: usize,
    cases: Vec<ChargeCase>,
    eps: f64,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct CaseSummary {
    case: ChargeCase,
    relative_error: f64,
    max_abs_error: f64,
    oracle_queries: u64,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        grid: p.grid.unwrap_or(DEFAULT_GRID),
        cases: p.case.clone().unwrap_or_else(|| ChargeCase::ALL.to_vec()),
        eps: single("eps", &p.eps, 1e-4)?,
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Analytic),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Analytic),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    at_least("grid", s.grid, MIN_GRID)?;
    unit_interval("eps", &[s.eps])?;
    unit_interval("delta", &[s.delta])?;
    let cfg = run_config(s.eps, s.mode, s.seed, false)?;
    let ipe = IpeConfig::new(s.eps, s.delta).with_mode(s.ipe_mode).with_seed(s.seed);

    let mut summaries = Vec::new();
    for &case in &s.cases {
        let grid = laplace_dirichlet_solve(case, s.grid, &cfg, &ipe)?;
        let mut csv = Vec::new();
        grid.write_csv(&mut csv)?;
        out.write_bytes(&format!("laplace_{case}.csv"), &csv)?;
        out.write_csv(&format!("laplace_{case}_field.csv"), &electric_field(&grid)?)?;
        summaries.push(CaseSummary {
            case,
            relative_error: grid.relative_error(),
            max_abs_error: grid.max_interior_error(),
            oracle_queries: grid.ledger.total_queries(),
        });
    }
    out.write_json("laplace_summary.json", &summaries)?;
    let checks = summaries
        .iter()
        .map(|c| {
            Check::new(
                &format!("laplace-{}", c.case),
                c.relative_error <= RELATIVE_TOL,
                format!("relative error {:.4} <= {RELATIVE_TOL}", c.relative_error),
            )
        })
        .collect();
    Report::new(&s, checks)
}
