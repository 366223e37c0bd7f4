use super::{hermitian_deviation, ComplexMatrix, C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value; zero for an empty matrix.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// 2-norm condition number `sigma_max / sigma_min`.
pub fn condition_number(m: &ComplexMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: ComplexMatrix,
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn exact_eigensolve(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let asymmetry = hermitian_deviation(h);
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = h.nrows();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors
            .column_mut(dst)
            .copy_from(&eig.eigenvectors.column(src));
    }
    Ok(EigenDecomposition { values, vectors })
}

/// `exp(-i H t)` through the spectral decomposition of `H`.
pub fn matrix_exponential(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = exact_eigensolve(h)?;
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&l| C64::from_polar(1.0, -l * t))
        .collect();
    let mut scaled = eig.vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * eig.vectors.adjoint())
}
