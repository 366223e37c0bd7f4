//! Open-boundary spin-chain Hamiltonians built from Pauli matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, kron, ComplexMatrix};

pub const MAX_SITES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinModel {
    Ising,
    Heisenberg,
}

impl std::str::FromStr for SpinModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising" => Ok(SpinModel::Ising),
            "heisenberg" => Ok(SpinModel::Heisenberg),
            other => Err(Error::param(
                "model",
                format!("expected ising|heisenberg, got {other}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let (a, b, c, d) = match self {
            Pauli::X => (c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)),
            Pauli::Y => (c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)),
            Pauli::Z => (c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)),
        };
        ComplexMatrix::from_row_slice(2, 2, &[a, b, c, d])
    }
}

fn check_sites(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SITES {
        return Err(Error::param(
            "sites",
            format!("must lie in 1..={MAX_SITES}, got {n}"),
        ));
    }
    Ok(())
}

/// Tensor product with `ops` placed on the listed sites and identity
/// elsewhere; site 0 is the most significant qubit.
pub fn site_operator(n: usize, ops: &[(usize, Pauli)]) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2, 2);
    let mut out = ComplexMatrix::identity(1, 1);
    for site in 0..n {
        let factor = ops
            .iter()
            .find(|(s, _)| *s == site)
            .map_or_else(|| id.clone(), |(_, p)| p.matrix());
        out = kron(&out, &factor);
    }
    out
}

/// `H = -h Σ_i X_i - J Σ_i Z_i Z_{i+1}`.
pub fn ising_hamiltonian(n: usize, h: f64, j: f64) -> Result<ComplexMatrix> {
    check_sites(n)?;
    let dim = 1 << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..n {
        out -= site_operator(n, &[(i, Pauli::X)]) * c64(h, 0.0);
    }
    for i in 0..n.saturating_sub(1) {
        out -= site_operator(n, &[(i, Pauli::Z), (i + 1, Pauli::Z)]) * c64(j, 0.0);
    }
    Ok(out)
}

/// `H = -J Σ_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1})`.
pub fn heisenberg_hamiltonian(n: usize, j: f64) -> Result<ComplexMatrix> {
    check_sites(n)?;
    let dim = 1 << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..n.saturating_sub(1) {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            out -= site_operator(n, &[(i, p), (i + 1, p)]) * c64(j, 0.0);
        }
    }
    Ok(out)
}

pub fn model_hamiltonian(model: SpinModel, n: usize) -> Result<ComplexMatrix> {
    match model {
        SpinModel::Ising => ising_hamiltonian(n, 1.0, 1.0),
        SpinModel::Heisenberg => heisenberg_hamiltonian(n, 1.0),
    }
}
