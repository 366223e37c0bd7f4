use rand::Rng;
use rand_distr::StandardNormal;

use super::{classical_qr, ComplexMatrix, ComplexVector, C64};
use crate::error::{Error, Result};
use crate::rng::{domain, substream};

/// Matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed `rows x cols` isometry (orthonormal columns).
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rows, cols, rng);
        // Positive real diagonal in R makes Q exactly Haar.
        if let Ok((q, _)) = classical_qr(&g) {
            return q;
        }
    }
}

/// Random Hermitian matrix `(G + G^dag) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Uniformly random unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    loop {
        let v: ComplexVector = gaussian_matrix(n, 1, rng).column(0).into_owned();
        let norm = v.norm();
        if norm > 0.0 {
            return v.unscale(norm);
        }
    }
}

/// `n x m` matrix `U diag(s) V^dag` with Haar `U`, `V` and singular values
/// log-spaced from 1 down to `1 / kappa`.
pub fn random_matrix_with_condition(
    n: usize,
    m: usize,
    kappa: f64,
    seed: u64,
) -> Result<ComplexMatrix> {
    let mut rng = substream(seed, domain::MATRIX, 0);
    random_matrix_with_condition_rng(n, m, kappa, &mut rng)
}

pub fn random_matrix_with_condition_rng<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    kappa: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if n < m {
        return Err(Error::TooFewRows { rows: n, cols: m });
    }
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::param(
            "kappa",
            format!("must be finite and >= 1, got {kappa}"),
        ));
    }
    let u = haar_isometry(n, m, rng);
    let v = haar_isometry(m, m, rng);
    let mut us = u;
    for (i, mut col) in us.column_iter_mut().enumerate() {
        let frac = if m == 1 {
            0.0
        } else {
            i as f64 / (m - 1) as f64
        };
        col *= C64::new(kappa.powf(-frac), 0.0);
    }
    Ok(us * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{condition_number, loss_of_orthogonality, singular_values};

    #[test]
    fn condition_number_is_prescribed() {
        for (n, m, kappa) in [(8, 8, 100.0), (8, 4, 10.0), (16, 16, 1e4), (4, 4, 1.0)] {
            let a = random_matrix_with_condition(n, m, kappa, 42).unwrap();
            assert_eq!(a.shape(), (n, m));
            let c = condition_number(&a);
            assert!((c - kappa).abs() <= 0.01 * kappa, "cond {c} vs {kappa}");
        }
    }

    #[test]
    fn unit_condition_gives_isometry() {
        let a = random_matrix_with_condition(4, 4, 1.0, 3).unwrap();
        assert!(loss_of_orthogonality(&a) < 1e-12);
    }

    #[test]
    fn singular_values_are_log_spaced() {
        let a = random_matrix_with_condition(5, 5, 1e4, 1).unwrap();
        let s = singular_values(&a);
        for (i, &si) in s.iter().enumerate() {
            let expected = 10f64.powf(-(i as f64));
            assert!((si - expected).abs() <= 1e-10 * expected.max(1e-4) * 1e4);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = random_matrix_with_condition(6, 3, 50.0, 99).unwrap();
        let b = random_matrix_with_condition(6, 3, 50.0, 99).unwrap();
        let c = random_matrix_with_condition(6, 3, 50.0, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            random_matrix_with_condition(2, 3, 2.0, 0),
            Err(Error::TooFewRows { .. })
        ));
        assert!(matches!(
            random_matrix_with_condition(3, 3, 0.5, 0),
            Err(Error::InvalidParameter { .. })
        ));
    }
}
