//! Quantum QR decomposition. `Q` comes from quantum Gram-Schmidt on the
//! columns of `A`; the strictly upper part of `R` from inner-product
//! estimates scaled by column norms; the diagonal from residual norms.

use crate::error::{Error, Result};
use crate::linalg::{columns, from_columns, spectral_norm, ComplexMatrix, ComplexVector, C64};
use crate::qgs::{quantum_gram_schmidt, CostLedger, GramSchmidtResult, RunConfig};
use crate::qipe::{estimate_inner_product, IpeConfig};
use crate::rng::{derive_seed, domain};

/// What to do with columns judged linearly dependent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RankPolicy {
    /// Fail with [`Error::RankDeficient`].
    #[default]
    Error,
    /// Drop the column from `Q` and keep only its coefficients on the
    /// earlier basis vectors in `R`.
    Skip,
}

#[derive(Debug, Clone)]
pub struct QrResult {
    /// `N x T`, one column per accepted input column.
    pub q: ComplexMatrix,
    /// `T x M`; row `j` is zero left of the column that created basis `j`.
    pub r: ComplexMatrix,
    pub ledger: CostLedger,
    pub eps_used: f64,
    pub dependent_columns: Vec<usize>,
    /// Input column that created each column of `q`.
    pub sources: Vec<usize>,
}

/// `||A - QR||_2`.
pub fn qr_error(a: &ComplexMatrix, q: &ComplexMatrix, r: &ComplexMatrix) -> Result<f64> {
    if q.nrows() != a.nrows() || r.ncols() != a.ncols() || q.ncols() != r.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            found: r.ncols(),
        });
    }
    Ok(spectral_norm(&(a - q * r)))
}

/// Quantum QR; any dependent column is an error.
pub fn quantum_qr(a: &ComplexMatrix, cfg: &RunConfig, ipe: &IpeConfig) -> Result<QrResult> {
    quantum_qr_with_policy(a, cfg, ipe, RankPolicy::Error)
}

/// Quantum QR with an explicit policy for dependent columns.
pub fn quantum_qr_with_policy(
    a: &ComplexMatrix,
    cfg: &RunConfig,
    ipe: &IpeConfig,
    policy: RankPolicy,
) -> Result<QrResult> {
    let (rows, m) = a.shape();
    if rows < m {
        return Err(Error::TooFewRows { rows, cols: m });
    }
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    ipe.validate()?;
    let gs = quantum_gram_schmidt(&columns(a), cfg)?;
    assemble_qr(a, gs, cfg, ipe, policy)
}

/// Build `R` (and phase-align `Q`) from a finished Gram-Schmidt run on the
/// columns of `a`.
///
/// Every inner product is estimated with accuracy `ipe.eps` and failure
/// probability `cfg.eps / M^2`. Each basis vector after the first is
/// rotated by the phase of its estimated overlap with its source column, so
/// that the diagonal of `R` is real and positive.
pub fn assemble_qr(
    a: &ComplexMatrix,
    gs: GramSchmidtResult,
    cfg: &RunConfig,
    ipe: &IpeConfig,
    policy: RankPolicy,
) -> Result<QrResult> {
    let (rows, m) = a.shape();
    if policy == RankPolicy::Error {
        if let Some(&column) = gs.dependent_indices.first() {
            return Err(Error::RankDeficient { column });
        }
    }
    let cols = columns(a);
    let norms: Vec<f64> = cols.iter().map(|c| c.norm()).collect();
    let unit_cols: Vec<ComplexVector> = cols
        .iter()
        .zip(&norms)
        .map(|(c, &n)| c.unscale(n))
        .collect();
    let mut ledger = gs.ledger;
    let mut basis = gs.basis;
    let sources = gs.sources;

    let entry_cfg = IpeConfig {
        delta: entry_delta(cfg.eps, m),
        ..*ipe
    };
    let mut entry = 0u64;
    let mut estimate = |x: &ComplexVector, y: &ComplexVector, ledger: &mut CostLedger| {
        let seed = derive_seed(ipe.seed, domain::IPE_ENTRY, entry);
        entry += 1;
        let est = estimate_inner_product(x, y, &IpeConfig { seed, ..entry_cfg })?;
        ledger.record_ipe(est.shots_used);
        Ok::<C64, Error>(est.value)
    };

    for j in 1..basis.len() {
        let overlap = estimate(&basis[j], &unit_cols[sources[j]], &mut ledger)?;
        if overlap.norm() > 0.0 {
            basis[j] *= overlap / overlap.norm();
        }
    }

    let t = basis.len();
    let mut r = ComplexMatrix::zeros(t, m);
    for col in 0..m {
        let mut residual = cols[col].clone();
        for (j, q) in basis.iter().enumerate() {
            match sources[j].cmp(&col) {
                std::cmp::Ordering::Less => {
                    let value = estimate(q, &unit_cols[col], &mut ledger)? * norms[col];
                    r[(j, col)] = value;
                    residual.axpy(-value, q, C64::new(1.0, 0.0));
                }
                std::cmp::Ordering::Equal => r[(j, col)] = C64::new(residual.norm(), 0.0),
                std::cmp::Ordering::Greater => {}
            }
        }
    }

    Ok(QrResult {
        q: from_columns(rows, &basis),
        r,
        ledger,
        eps_used: cfg.eps,
        dependent_columns: gs.dependent_indices,
        sources,
    })
}

/// Per-estimate failure probability `eps / M^2`.
pub fn entry_delta(eps: f64, m: usize) -> f64 {
    eps / (m * m).max(1) as f64
}

/// Estimate `Q^dag b` one column of `Q` at a time, as `||b|| <q_j|b/||b||>`.
pub fn estimate_coefficients(
    q: &ComplexMatrix,
    b: &ComplexVector,
    ipe: &IpeConfig,
    ledger: &mut CostLedger,
) -> Result<ComplexVector> {
    if q.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: q.nrows(),
            found: b.len(),
        });
    }
    let norm = b.norm();
    if norm == 0.0 {
        return Ok(ComplexVector::zeros(q.ncols()));
    }
    let unit = b.unscale(norm);
    let mut out = ComplexVector::zeros(q.ncols());
    for (j, col) in q.column_iter().enumerate() {
        let cfg = IpeConfig {
            seed: derive_seed(ipe.seed, domain::IPE_RHS, j as u64),
            ..*ipe
        };
        let est = estimate_inner_product(&col.into_owned(), &unit, &cfg)?;
        ledger.record_ipe(est.shots_used);
        out[j] = est.value * norm;
    }
    Ok(out)
}
