//! Classification of `A x = b` by how many solutions it has.
//!
//! The columns of `A` are orthonormalized first so that the membership
//! Hamiltonian is a projector onto their span.

use crate::error::{Error, Result};
use crate::hamsim::ProjectorHamiltonian;
use crate::linalg::{back_substitution, columns, pad, ComplexMatrix, ComplexVector};
use crate::qgs::{qgs_step, quantum_gram_schmidt, CostLedger, RunConfig, StepKind};
use crate::qipe::IpeConfig;
use crate::qqr::{assemble_qr, entry_delta, estimate_coefficients, RankPolicy};
use crate::qsim::padded_dim;
use crate::rng::{derive_seed, domain, substream};

/// Unique solutions must satisfy `||Ax - b|| <= RESIDUAL_FACTOR eps ||b||`.
pub const RESIDUAL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub in_span: bool,
    /// `1 - Σ |<u_n|b>|^2` for unit `b`.
    pub p_residual: f64,
    pub runs: u64,
}

/// Decide whether `b` lies in the span of the orthonormal `basis` with one
/// QPE-projection step.
pub fn membership_test(
    basis: &[ComplexVector],
    b: &ComplexVector,
    cfg: &RunConfig,
) -> Result<Membership> {
    let mut ledger = CostLedger::default();
    membership_with_ledger(basis, b, cfg, &mut ledger)
}

fn membership_with_ledger(
    basis: &[ComplexVector],
    b: &ComplexVector,
    cfg: &RunConfig,
    ledger: &mut CostLedger,
) -> Result<Membership> {
    cfg.validate()?;
    if b.norm() == 0.0 {
        return Err(Error::ZeroVector { index: 0 });
    }
    let n = padded_dim(b.len());
    if let Some(u) = basis.iter().find(|u| u.len() != b.len()) {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            found: u.len(),
        });
    }
    let padded: Vec<ComplexVector> = basis.iter().map(|u| pad(u, n)).collect();
    let h = ProjectorHamiltonian::from_basis(n, cfg.tol_ortho, &padded)?;
    let mut rng = substream(cfg.seed, domain::MEMBERSHIP, 0);
    let step = qgs_step(&h, b, cfg, &mut rng, ledger)?;
    Ok(Membership {
        in_span: step.kind == StepKind::Dependent,
        p_residual: step.p_zero,
        runs: step.runs_used,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionKind {
    NoSolution,
    Unique(ComplexVector),
    Infinite,
}

#[derive(Debug, Clone)]
pub struct SystemClassification {
    pub kind: SolutionKind,
    pub p_residual: f64,
    /// Number of basis vectors found for the column space.
    pub rank: usize,
    pub dependent_columns: Vec<usize>,
    /// `||Ax - b||` for a unique solution.
    pub residual: Option<f64>,
    pub ledger: CostLedger,
}

/// Classify `A x = b` and solve it when the solution is unique.
///
/// A unique solution whose residual exceeds `10 eps ||b||` is reported as
/// [`Error::InaccurateSolution`] rather than returned.
pub fn classify_linear_system(
    a: &ComplexMatrix,
    b: &ComplexVector,
    cfg: &RunConfig,
    ipe: &IpeConfig,
) -> Result<SystemClassification> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    ipe.validate()?;
    let mut gs = quantum_gram_schmidt(&columns(a), cfg)?;
    let mut ledger = gs.ledger.clone();
    let membership = if b.norm() == 0.0 {
        Membership {
            in_span: true,
            p_residual: 0.0,
            runs: 0,
        }
    } else {
        let member_cfg = RunConfig {
            seed: derive_seed(cfg.seed, domain::MEMBERSHIP, 0),
            ..*cfg
        };
        membership_with_ledger(&gs.basis, b, &member_cfg, &mut ledger)?
    };
    let rank = gs.basis.len();
    let dependent_columns = gs.dependent_indices.clone();
    let classified = |kind, residual, ledger| SystemClassification {
        kind,
        p_residual: membership.p_residual,
        rank,
        dependent_columns: dependent_columns.clone(),
        residual,
        ledger,
    };
    if !membership.in_span {
        return Ok(classified(SolutionKind::NoSolution, None, ledger));
    }
    if !dependent_columns.is_empty() || a.nrows() < a.ncols() {
        return Ok(classified(SolutionKind::Infinite, None, ledger));
    }

    gs.ledger = ledger;
    let mut qr = assemble_qr(a, gs, cfg, ipe, RankPolicy::Error)?;
    let rhs_cfg = IpeConfig {
        delta: entry_delta(cfg.eps, a.ncols()),
        ..*ipe
    };
    let y = estimate_coefficients(&qr.q, b, &rhs_cfg, &mut qr.ledger)?;
    let x = back_substitution(&qr.r, &y)?;
    let residual = (a * &x - b).norm();
    let bound = RESIDUAL_FACTOR * cfg.eps * b.norm();
    if residual > bound {
        return Err(Error::InaccurateSolution { residual, bound });
    }
    Ok(classified(SolutionKind::Unique(x), Some(residual), qr.ledger))
}
