//! Unshifted QR iteration `A_{k+1} = R_k Q_k` with a classical or quantum
//! QR backend. Eigenvalues are read from the 1x1 and 2x2 diagonal blocks of
//! the final iterate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{classical_qr, hermitian_deviation, ComplexMatrix, HERMITIAN_TOL};
use crate::qgs::RunConfig;
use crate::qipe::IpeConfig;
use crate::qqr::quantum_qr;
use crate::rng::{derive_seed, domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QrBackend {
    Classical,
    Quantum,
}

impl std::str::FromStr for QrBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(QrBackend::Classical),
            "quantum" => Ok(QrBackend::Quantum),
            other => Err(Error::param(
                "backend",
                format!("expected classical|quantum, got {other}"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub iterations: usize,
    /// Iterate the eigenvalues were read from.
    pub final_matrix: ComplexMatrix,
}

/// Split the diagonal into 1x1 and 2x2 blocks whose entries below the block
/// diagonal are all smaller than `tol`. `None` if no such split exists.
pub fn block_structure(a: &ComplexMatrix, tol: f64) -> Option<Vec<(usize, usize)>> {
    let n = a.nrows();
    let below = |col: usize, from: usize| (from..n).all(|r| a[(r, col)].norm() < tol);
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < n {
        if below(i, i + 1) {
            blocks.push((i, 1));
            i += 1;
        } else if i + 1 < n && below(i, i + 2) && below(i + 1, i + 2) {
            blocks.push((i, 2));
            i += 2;
        } else {
            return None;
        }
    }
    Some(blocks)
}

/// Real parts of the eigenvalues of the diagonal blocks.
pub fn block_eigenvalues(a: &ComplexMatrix, blocks: &[(usize, usize)]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.nrows());
    for &(i, size) in blocks {
        if size == 1 {
            out.push(a[(i, i)].re);
        } else {
            let (p, q, r, s) = (a[(i, i)], a[(i, i + 1)], a[(i + 1, i)], a[(i + 1, i + 1)]);
            let mean = (p + s) * 0.5;
            let half = (p - s) * 0.5;
            let root = (half * half + q * r).sqrt();
            out.push((mean - root).re);
            out.push((mean + root).re);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn qr_step(
    a: &ComplexMatrix,
    backend: QrBackend,
    cfg: &RunConfig,
    ipe: &IpeConfig,
    iteration: u64,
) -> Result<ComplexMatrix> {
    let (q, r) = match backend {
        QrBackend::Classical => classical_qr(a)?,
        QrBackend::Quantum => {
            let cfg = RunConfig {
                seed: derive_seed(cfg.seed, domain::ITERATION, iteration),
                ..*cfg
            };
            let ipe = IpeConfig {
                seed: derive_seed(ipe.seed, domain::ITERATION, iteration),
                ..*ipe
            };
            let out = quantum_qr(a, &cfg, &ipe)?;
            (out.q, out.r)
        }
    };
    Ok(r * q)
}

/// Eigenvalues of a Hermitian matrix by unshifted QR iteration.
///
/// Iterates until the block structure is valid at `tol` or `max_iter` steps
/// have been taken.
pub fn qr_iteration_eigenvalues(
    a: &ComplexMatrix,
    max_iter: usize,
    tol: f64,
    backend: QrBackend,
    cfg: &RunConfig,
    ipe: &IpeConfig,
) -> Result<EigenResult> {
    if !a.is_square() || a.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let asymmetry = hermitian_deviation(a);
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let mut current = a.clone();
    let mut iterations = 0;
    loop {
        if iterations > 0 || max_iter == 0 {
            if let Some(blocks) = block_structure(&current, tol) {
                return Ok(EigenResult {
                    eigenvalues: block_eigenvalues(&current, &blocks),
                    iterations,
                    final_matrix: current,
                });
            }
        }
        if iterations == max_iter {
            return Err(Error::NonConvergence { iterations });
        }
        current = qr_step(&current, backend, cfg, ipe, iterations as u64)?;
        iterations += 1;
    }
}
