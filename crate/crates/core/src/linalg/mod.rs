//! Dense complex linear algebra shared by every simulation module.
//!
//! Matrices and vectors are plain `nalgebra` dynamic containers over
//! `Complex<f64>`. Classical Gram-Schmidt, QR, back substitution and the
//! random test-matrix generator are implemented here; the symmetric
//! eigensolver and SVD come from `nalgebra`.

mod eigen;
mod gram_schmidt;
mod io;
mod random;

pub use eigen::{
    condition_number, exact_eigensolve, matrix_exponential, singular_values, spectral_norm,
    EigenDecomposition,
};
pub use gram_schmidt::{
    back_substitution, classical_gram_schmidt, classical_qr, loss_of_orthogonality,
};
pub use io::{matrix_from_json, matrix_to_json, read_matrix, write_matrix, MatrixFile};
pub use random::{
    gaussian_matrix, haar_isometry, random_hermitian, random_matrix_with_condition,
    random_matrix_with_condition_rng, random_unit_vector,
};

use nalgebra::{DMatrix, DVector};

pub type C64 = nalgebra::Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative tolerance used for rank and singularity decisions.
pub const RANK_TOL: f64 = 1e-12;

/// Absolute tolerance on `|H_ij - conj(H_ji)|` for Hermitian inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex vector from real entries.
pub fn real_vector(values: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(values.len(), values.iter().map(|&x| c64(x, 0.0)))
}

/// Complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, values.iter().map(|&x| c64(x, 0.0)))
}

/// `<x|y>`, conjugate-linear in the first argument.
#[inline]
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> C64 {
    x.dotc(y)
}

/// Largest `|H_ij - conj(H_ji)|`; infinite for non-square input.
pub fn hermitian_deviation(h: &ComplexMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    let n = h.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(h: &ComplexMatrix) -> bool {
    hermitian_deviation(h) <= HERMITIAN_TOL
}

/// Spectral norm of `U^dag U - I`.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    spectral_norm(&(u.adjoint() * u - ComplexMatrix::identity(n, n)))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Zero-pad (or keep) `v` to length `len`.
pub fn pad(v: &ComplexVector, len: usize) -> ComplexVector {
    debug_assert!(len >= v.len());
    let mut out = ComplexVector::zeros(len);
    out.rows_mut(0, v.len()).copy_from(v);
    out
}

/// True when every entry is finite.
pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Columns of `a` as owned vectors.
pub fn columns(a: &ComplexMatrix) -> Vec<ComplexVector> {
    a.column_iter().map(|c| c.into_owned()).collect()
}

/// Matrix whose columns are `cols`; all columns must share a length.
pub fn from_columns(rows: usize, cols: &[ComplexVector]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.column_mut(j).copy_from(c);
    }
    m
}
