//! `qgs`: loss of orthogonality of classical and quantum Gram-Schmidt on
//! random matrices with a prescribed condition number.

use rayon::prelude::*;
use serde::Serialize;

use qgs_core::linalg::{
    classical_gram_schmidt, columns, from_columns, loss_of_orthogonality,
    random_matrix_with_condition,
};
use qgs_core::qgs::quantum_gram_schmidt;
use qgs_core::Mode;

use super::{run_config, single, trial_seed, Check, Report, DEFAULT_SEED};
use crate::error::CliResult;
use crate::output::OutputDir;
use crate::params::{at_least, positive, unit_interval, Params};

/// Floor on the quantum loss of orthogonality in exact-evolution runs.
pub const ETA_FLOOR: f64 = 1e-10;

#[derive(Debug, Serialize)]
struct Settings {
    dims: Vec<usize>,
    count: Option<usize>,
    cond: f64,
    eps: f64,
    mode: Mode,
    inject_error: bool,
    trials: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Row {
    #[serde(rename = "N")]
    n: usize,
    trial: usize,
    eta_cgs: f64,
    eta_qgs: f64,
}

#[derive(Debug, Serialize)]
struct CostRow {
    #[serde(rename = "N")]
    n: usize,
    trial: usize,
    oracle_queries: u64,
    two_qubit_gates: u64,
    circuit_runs: u64,
    qubits: u32,
    dependent: usize,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        dims: p.dim.clone().unwrap_or_else(|| vec![4, 8, 16, 32]),
        count: p.count,
        cond: single("cond", &p.cond, 100.0)?,
        eps: single("eps", &p.eps, 1e-4)?,
        mode: p.mode.unwrap_or(Mode::Analytic),
        inject_error: p.inject_error.unwrap_or(false),
        trials: p.trials.unwrap_or(10),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    for &n in &s.dims {
        at_least("dim", n, 1)?;
        at_least("count", s.count.unwrap_or(n), 1)?;
    }
    at_least("trials", s.trials, 1)?;
    positive("cond", &[s.cond])?;
    unit_interval("eps", &[s.eps])?;

    let jobs: Vec<(usize, usize)> = s
        .dims
        .iter()
        .flat_map(|&n| (0..s.trials).map(move |t| (n, t)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(n, t)| {
            let seed = trial_seed(s.seed, (n as u64) << 32 | t as u64);
            let m = s.count.unwrap_or(n).min(n);
            let a = random_matrix_with_condition(n, m, s.cond, seed)?;
            let cols = columns(&a);
            let cgs = classical_gram_schmidt(&cols, 0.0)?;
            let cfg = run_config(s.eps, s.mode, seed, s.inject_error)?;
            let gs = quantum_gram_schmidt(&cols, &cfg)?;
            let row = Row {
                n,
                trial: t,
                eta_cgs: loss_of_orthogonality(&from_columns(n, &cgs)),
                eta_qgs: loss_of_orthogonality(&gs.basis_matrix()),
            };
            let cost = CostRow {
                n,
                trial: t,
                oracle_queries: gs.ledger.oracle_queries,
                two_qubit_gates: gs.ledger.two_qubit_gates,
                circuit_runs: gs.ledger.circuit_runs,
                qubits: gs.ledger.qubits,
                dependent: gs.dependent_indices.len(),
            };
            Ok((row, cost))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let (rows, costs): (Vec<Row>, Vec<CostRow>) = results.into_iter().unzip();
    out.write_csv("ortho_sweep.csv", &rows)?;
    out.write_csv("ortho_costs.csv", &costs)?;

    let worst = rows.iter().map(|r| r.eta_qgs).fold(0.0, f64::max);
    let check = Check::new(
        "orthogonality-floor",
        worst <= ETA_FLOOR,
        format!("max eta_qgs {worst:.3e} <= {ETA_FLOOR:e}"),
    );
    Report::new(&s, vec![check])
}
