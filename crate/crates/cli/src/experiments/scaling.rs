//! `bench-scaling`: ledger totals of Gram-Schmidt and full QR runs as the
//! number of vectors grows.

use rayon::prelude::*;
use serde::Serialize;

use qgs_core::linalg::{columns, random_matrix_with_condition};
use qgs_core::qgs::quantum_gram_schmidt;
use qgs_core::qipe::IpeConfig;
use qgs_core::qqr::{quantum_qr_with_policy, RankPolicy};
use qgs_core::Mode;

use super::{log_log_slope, run_config, single, trial_seed, Check, Report, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::params::{at_least, positive, unit_interval, Params};

/// Accepted log-log slope of Gram-Schmidt queries against `M`.
pub const QGS_SLOPE: (f64, f64) = (1.8, 2.2);
/// Accepted log-log slope of total QR queries against `M`.
pub const QR_SLOPE: (f64, f64) = (1.8, 2.3);

#[derive(Debug, Serialize)]
struct Settings {
    dims: Vec<usize>,
    cond: f64,
    eps: f64,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    #[serde(rename = "M")]
    m: usize,
    qubits: u32,
    qgs_queries: u64,
    qgs_gates: u64,
    qgs_runs: u64,
    qr_queries: u64,
    ipe_estimates: u64,
    ipe_oracle_calls: u64,
    qr_total_queries: u64,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        dims: p.dim.clone().unwrap_or_else(|| vec![4, 8, 16, 32]),
        cond: single("cond", &p.cond, 1.0)?,
        eps: single("eps", &p.eps, 1e-2)?,
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Sampled),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Sampled),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    if s.dims.len() < 2 {
        return Err(CliError::invalid("bench-scaling needs at least two dimensions"));
    }
    for &m in &s.dims {
        at_least("dim", m, 2)?;
    }
    positive("cond", &[s.cond])?;
    unit_interval("eps", &[s.eps])?;
    unit_interval("delta", &[s.delta])?;

    let rows = s
        .dims
        .par_iter()
        .map(|&m| {
            let seed = trial_seed(s.seed, m as u64);
            let a = random_matrix_with_condition(m, m, s.cond, seed)?;
            let cfg = run_config(s.eps, s.mode, seed, false)?;
            let gs = quantum_gram_schmidt(&columns(&a), &cfg)?;
            let ipe = IpeConfig::new(s.eps, s.delta).with_mode(s.ipe_mode).with_seed(seed);
            let qr = quantum_qr_with_policy(&a, &cfg, &ipe, RankPolicy::Skip)?;
            Ok(Row {
                m,
                qubits: gs.ledger.qubits,
                qgs_queries: gs.ledger.oracle_queries,
                qgs_gates: gs.ledger.two_qubit_gates,
                qgs_runs: gs.ledger.circuit_runs,
                qr_queries: qr.ledger.oracle_queries,
                ipe_estimates: qr.ledger.ipe_estimates,
                ipe_oracle_calls: qr.ledger.ipe_oracle_calls,
                qr_total_queries: qr.ledger.total_queries(),
            })
        })
        .collect::<CliResult<Vec<Row>>>()?;
    out.write_csv("scaling.csv", &rows)?;

    let ms: Vec<f64> = rows.iter().map(|r| r.m as f64).collect();
    let slope = |f: fn(&Row) -> u64| {
        let ys: Vec<f64> = rows.iter().map(|r| f(r) as f64).collect();
        log_log_slope(&ms, &ys)
    };
    let qgs = slope(|r| r.qgs_queries);
    let qr = slope(|r| r.qr_total_queries);
    let checks = vec![
        Check::new(
            "qgs-query-slope",
            (QGS_SLOPE.0..=QGS_SLOPE.1).contains(&qgs),
            format!("slope {qgs:.3} in [{}, {}]", QGS_SLOPE.0, QGS_SLOPE.1),
        ),
        Check::new(
            "qr-query-slope",
            (QR_SLOPE.0..=QR_SLOPE.1).contains(&qr),
            format!("slope {qr:.3} in [{}, {}]", QR_SLOPE.0, QR_SLOPE.1),
        ),
    ];
    Report::new(&s, checks)
}
