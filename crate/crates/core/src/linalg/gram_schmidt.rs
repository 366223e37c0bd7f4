use super::{spectral_norm, ComplexMatrix, ComplexVector, C64, RANK_TOL};
use crate::error::{Error, Result};

/// Subtract the projection of `v` onto the orthonormal set `basis`, twice.
/// Returns the accumulated coefficients `<u_i|v>`.
fn project_out(basis: &[ComplexVector], v: &mut ComplexVector) -> Vec<C64> {
    let mut coeffs = vec![C64::new(0.0, 0.0); basis.len()];
    for _ in 0..2 {
        let pass: Vec<C64> = basis.iter().map(|u| u.dotc(v)).collect();
        for (u, &c) in basis.iter().zip(&pass) {
            v.axpy(-c, u, C64::new(1.0, 0.0));
        }
        for (acc, c) in coeffs.iter_mut().zip(pass) {
            *acc += c;
        }
    }
    coeffs
}

/// Orthonormalize `vectors` in order. Vectors whose residual norm is at most
/// `drop_tol` are treated as linearly dependent and skipped.
pub fn classical_gram_schmidt(
    vectors: &[ComplexVector],
    drop_tol: f64,
) -> Result<Vec<ComplexVector>> {
    let first = vectors.first().ok_or(Error::EmptyInput)?;
    if drop_tol < 0.0 || !drop_tol.is_finite() {
        return Err(Error::param(
            "drop_tol",
            "must be a finite non-negative number",
        ));
    }
    let dim = first.len();
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        project_out(&basis, &mut r);
        let norm = r.norm();
        if norm > drop_tol {
            basis.push(r.unscale(norm));
        }
    }
    Ok(basis)
}

/// Gram-Schmidt QR factorization `A = QR` with a real positive diagonal in `R`.
///
/// Each column is projected against the previous ones twice, which keeps
/// `Q` orthonormal to working precision for ill-conditioned inputs.
pub fn classical_qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::TooFewRows { rows, cols });
    }
    if cols == 0 {
        return Err(Error::EmptyInput);
    }
    let scale = spectral_norm(a);
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(cols);
    let mut r = ComplexMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v = a.column(j).into_owned();
        let coeffs = project_out(&basis, &mut v);
        for (i, c) in coeffs.into_iter().enumerate() {
            r[(i, j)] = c;
        }
        let norm = v.norm();
        if norm <= RANK_TOL * scale {
            return Err(Error::RankDeficient { column: j });
        }
        r[(j, j)] = C64::new(norm, 0.0);
        basis.push(v.unscale(norm));
    }
    Ok((super::from_columns(rows, &basis), r))
}

/// Solve `R x = y` for upper-triangular `R`.
pub fn back_substitution(r: &ComplexMatrix, y: &ComplexVector) -> Result<ComplexVector> {
    let n = r.nrows();
    if !r.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.ncols(),
        });
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let floor = 1e-14 * r.norm();
    let mut x = ComplexVector::zeros(n);
    for i in (0..n).rev() {
        let d = r[(i, i)];
        if d.norm() <= floor || d.norm() == 0.0 {
            return Err(Error::SingularDiagonal { index: i });
        }
        let mut acc = y[i];
        for k in i + 1..n {
            acc -= r[(i, k)] * x[k];
        }
        x[i] = acc / d;
    }
    Ok(x)
}

/// `||Q^dag Q - I||_2`.
pub fn loss_of_orthogonality(q: &ComplexMatrix) -> f64 {
    let m = q.ncols();
    spectral_norm(&(q.adjoint() * q - ComplexMatrix::identity(m, m)))
}
