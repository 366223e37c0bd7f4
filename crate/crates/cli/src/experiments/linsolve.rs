//! `linsolve`: classify and solve `A x = b`.

use serde::Serialize;

use qgs_core::apps::linsys::{classify_linear_system, SolutionKind, RESIDUAL_FACTOR};
use qgs_core::linalg::{random_matrix_with_condition, random_unit_vector};
use qgs_core::qgs::CostLedger;
use qgs_core::qipe::IpeConfig;
use qgs_core::rng::{domain, substream};
use qgs_core::{ComplexVector, Mode};

use super::{load_matrix, run_config, single, Check, Report, DEFAULT_SEED};
use crate::error::{CliError, CliResult};
use crate::output::OutputDir;
use crate::params::{at_least, positive, unit_interval, Params};

#[derive(Debug, Serialize)]
struct Settings {
    matrix: Option<String>,
    rhs: Option<String>,
    dim: usize,
    cond: f64,
    eps: f64,
    delta: f64,
    mode: Mode,
    ipe_mode: Mode,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct Output {
    kind: &'static str,
    /// `[re, im]` pairs for a unique solution.
    solution: Option<Vec<[f64; 2]>>,
    p_residual: f64,
    rank: usize,
    dependent_columns: Vec<usize>,
    residual: Option<f64>,
    ledger: CostLedger,
}

pub fn run(p: &Params, out: &mut OutputDir) -> CliResult<Report> {
    let s = Settings {
        matrix: p.matrix.as_ref().map(|m| m.display().to_string()),
        rhs: p.rhs.as_ref().map(|m| m.display().to_string()),
        dim: single("dim", &p.dim, 8)?,
        cond: single("cond", &p.cond, 10.0)?,
        eps: single("eps", &p.eps, 1e-3)?,
        delta: p.delta.unwrap_or(0.1),
        mode: p.mode.unwrap_or(Mode::Analytic),
        ipe_mode: p.ipe_mode.unwrap_or(Mode::Analytic),
        seed: p.seed.unwrap_or(DEFAULT_SEED),
    };
    at_least("dim", s.dim, 1)?;
    positive("cond", &[s.cond])?;
    unit_interval("eps", &[s.eps])?;
    unit_interval("delta", &[s.delta])?;

    let a = match &p.matrix {
        Some(path) => load_matrix(path)?,
        None => random_matrix_with_condition(s.dim, s.dim, s.cond, s.seed)?,
    };
    let b: ComplexVector = match &p.rhs {
        Some(path) => {
            let m = load_matrix(path)?;
            if m.ncols() != 1 {
                return Err(CliError::invalid("rhs must have exactly one column"));
            }
            m.column(0).into_owned()
        }
        None => random_unit_vector(a.nrows(), &mut substream(s.seed, domain::IPE_RHS, 0)),
    };
    if b.len() != a.nrows() {
        return Err(CliError::invalid(format!(
            "rhs has {} entries but the matrix has {} rows",
            b.len(),
            a.nrows()
        )));
    }
    let cfg = run_config(s.eps, s.mode, s.seed, false)?;
    let ipe = IpeConfig::new(s.eps, s.delta).with_mode(s.ipe_mode).with_seed(s.seed);
    let result = classify_linear_system(&a, &b, &cfg, &ipe)?;
    let (kind, solution) = match &result.kind {
        SolutionKind::NoSolution => ("none", None),
        SolutionKind::Infinite => ("infinite", None),
        SolutionKind::Unique(x) => ("unique", Some(x.iter().map(|z| [z.re, z.im]).collect())),
    };
    let bound = RESIDUAL_FACTOR * s.eps * b.norm();
    let check = Check::new(
        "residual",
        result.residual.is_none_or(|r| r <= bound),
        match result.residual {
            Some(r) => format!("{kind} solution, residual {r:.3e} <= {bound:.3e}"),
            None => format!("{kind} solution, no residual to bound"),
        },
    );
    out.write_json(
        "linsolve.json",
        &Output {
            kind,
            solution,
            p_residual: result.p_residual,
            rank: result.rank,
            dependent_columns: result.dependent_columns,
            residual: result.residual,
            ledger: result.ledger,
        },
    )?;
    Report::new(&s, vec![check])
}
