//! Polynomial least squares through quantum QR: `R m = Q^dag Y`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{back_substitution, real_vector, ComplexMatrix, C64};
use crate::qgs::RunConfig;
use crate::qipe::IpeConfig;
use crate::qqr::{entry_delta, estimate_coefficients, quantum_qr};
use crate::rng::{derive_seed, domain, substream};

pub const TRAIN_POINTS: usize = 10;
pub const TEST_POINTS: usize = 100;
/// Range of the randomly drawn true coefficients.
pub const COEFFICIENT_RANGE: (f64, f64) = (0.3, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FitProblem {
    points: Vec<(f64, f64)>,
    degree: usize,
}

impl FitProblem {
    pub fn new(points: Vec<(f64, f64)>, degree: usize) -> Result<Self> {
        if points.len() < degree + 1 {
            return Err(Error::TooFewRows {
                rows: points.len(),
                cols: degree + 1,
            });
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::param("points", "coordinates must be finite"));
        }
        let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("points", "x values must be distinct"));
        }
        Ok(FitProblem { points, degree })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Vandermonde matrix with rows `(1, x_i, x_i^2, ..., x_i^k)`.
    pub fn design_matrix(&self) -> ComplexMatrix {
        let k = self.degree + 1;
        ComplexMatrix::from_fn(self.points.len(), k, |i, j| {
            C64::new(self.points[i].0.powi(j as i32), 0.0)
        })
    }

    pub fn targets(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }
}

/// Coefficients `(m_0, ..., m_k)` of the least-squares polynomial, lowest
/// order first.
pub fn polyfit_qr(p: &FitProblem, cfg: &RunConfig, ipe: &IpeConfig) -> Result<Vec<f64>> {
    let x = p.design_matrix();
    let mut qr = quantum_qr(&x, cfg, ipe)?;
    let rhs_cfg = IpeConfig {
        delta: entry_delta(cfg.eps, x.ncols()),
        ..*ipe
    };
    let y = estimate_coefficients(&qr.q, &real_vector(&p.targets()), &rhs_cfg, &mut qr.ledger)?;
    let m = back_substitution(&qr.r, &y)?;
    Ok(m.iter().map(|z| z.re).collect())
}

/// Reference solution of the normal equations `X^T X m = X^T Y`.
pub fn polyfit_normal_equations(p: &FitProblem) -> Result<Vec<f64>> {
    let n = p.points.len();
    let k = p.degree + 1;
    let x = DMatrix::from_fn(n, k, |i, j| p.points[i].0.powi(j as i32));
    let y = DVector::from_iterator(n, p.points.iter().map(|q| q.1));
    let gram = x.transpose() * &x;
    let chol = gram.cholesky().ok_or(Error::RankDeficient { column: k - 1 })?;
    Ok(chol.solve(&(x.transpose() * y)).iter().copied().collect())
}

pub fn evaluate_polynomial(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `||p(x) - y|| / ||y||` over `points`.
pub fn relative_error(coefficients: &[f64], points: &[(f64, f64)]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for &(x, y) in points {
        num += (evaluate_polynomial(coefficients, x) - y).powi(2);
        den += y * y;
    }
    (num / den).sqrt()
}

/// `||X m - Y||`.
pub fn residual_norm(coefficients: &[f64], points: &[(f64, f64)]) -> f64 {
    points
        .iter()
        .map(|&(x, y)| (evaluate_polynomial(coefficients, x) - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub train_error: f64,
    pub test_error: f64,
}

/// Random polynomial of degree `true_degree` sampled noiselessly at
/// `TRAIN_POINTS` and `TEST_POINTS` uniform points of `[-1, 1]`.
pub fn random_fit_data(true_degree: usize, seed: u64) -> (Vec<f64>, Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut rng = substream(seed, domain::FIT_DATA, true_degree as u64);
    let (lo, hi) = COEFFICIENT_RANGE;
    let coefficients: Vec<f64> = (0..=true_degree).map(|_| rng.random_range(lo..hi)).collect();
    let mut sample = |n: usize| -> Vec<(f64, f64)> {
        (0..n)
            .map(|_| {
                let x = rng.random_range(-1.0..1.0);
                (x, evaluate_polynomial(&coefficients, x))
            })
            .collect()
    };
    let train = sample(TRAIN_POINTS);
    let test = sample(TEST_POINTS);
    (coefficients, train, test)
}

/// `0.43 x^2 + 0.5 x + 0.86` at `TRAIN_POINTS` uniform points of `[-1, 1]`
/// and `TEST_POINTS` evenly spaced ones.
pub fn quadratic_example_data(seed: u64) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let g = |x: f64| 0.43 * x * x + 0.5 * x + 0.86;
    let mut rng = substream(seed, domain::FIT_DATA, u64::MAX);
    let train = (0..TRAIN_POINTS)
        .map(|_| {
            let x = rng.random_range(-1.0..1.0);
            (x, g(x))
        })
        .collect();
    let test = (0..TEST_POINTS)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (TEST_POINTS - 1) as f64;
            (x, g(x))
        })
        .collect();
    (train, test)
}

/// Fit a degree-`fit_degree` polynomial to data from a random degree-
/// `true_degree` polynomial and report train and test errors.
pub fn fit_trial(
    true_degree: usize,
    fit_degree: usize,
    seed: u64,
    cfg: &RunConfig,
    ipe: &IpeConfig,
) -> Result<FitReport> {
    let (_, train, test) = random_fit_data(true_degree, seed);
    let problem = FitProblem::new(train.clone(), fit_degree)?;
    let cfg = RunConfig {
        seed: derive_seed(seed, domain::TRIAL, fit_degree as u64),
        ..*cfg
    };
    let ipe = IpeConfig {
        seed: derive_seed(seed, domain::IPE_ENTRY, fit_degree as u64),
        ..*ipe
    };
    let coefficients = polyfit_qr(&problem, &cfg, &ipe)?;
    Ok(FitReport {
        degree: fit_degree,
        train_error: relative_error(&coefficients, &train),
        test_error: relative_error(&coefficients, &test),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mode;

    fn analytic(eps: f64) -> (RunConfig, IpeConfig) {
        (
            RunConfig::new(eps).with_mode(Mode::Analytic),
            IpeConfig::new(eps, 0.1).with_mode(Mode::Analytic),
        )
    }

    #[test]
    fn exact_line() {
        let (cfg, ipe) = analytic(1e-4);
        let points = vec![(-1.0, -1.0), (0.0, 1.0), (0.5, 2.0), (1.0, 3.0)];
        let p = FitProblem::new(points, 1).unwrap();
        let m = polyfit_qr(&p, &cfg, &ipe).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-8 && (m[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn analytic_matches_normal_equations() {
        let (cfg, ipe) = analytic(1e-4);
        let (_, train, _) = random_fit_data(3, 11);
        let p = FitProblem::new(train.clone(), 2).unwrap();
        let quantum = polyfit_qr(&p, &cfg, &ipe).unwrap();
        let classical = polyfit_normal_equations(&p).unwrap();
        for (a, b) in quantum.iter().zip(&classical) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn quadratic_instance() {
        let (train, test) = quadratic_example_data(1);
        let p = FitProblem::new(train, 2).unwrap();
        let cfg = RunConfig::new(0.1).with_mode(Mode::Analytic).with_seed(2);
        let ipe = IpeConfig::new(0.1, 0.1).with_seed(3);
        let m = polyfit_qr(&p, &cfg, &ipe).unwrap();
        for (a, b) in m.iter().zip([0.86, 0.5, 0.43]) {
            assert!((a - b).abs() <= 0.15, "{m:?}");
        }
        assert!(relative_error(&m, &test) <= 0.05, "{}", relative_error(&m, &test));
    }

    #[test]
    fn rejects_degenerate_problems() {
        assert!(FitProblem::new(vec![(0.0, 1.0), (0.0, 2.0)], 1).is_err());
        assert!(FitProblem::new(vec![(0.0, 1.0)], 1).is_err());
    }

    #[test]
    fn horner_evaluation() {
        assert_eq!(evaluate_polynomial(&[1.0, 2.0, 3.0], 2.0), 17.0);
        assert_eq!(evaluate_polynomial(&[], 2.0), 0.0);
    }
}
