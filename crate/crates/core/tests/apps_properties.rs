use proptest::prelude::*;

use qgs_core::apps::fit::{polyfit_normal_equations, polyfit_qr, random_fit_data, residual_norm, FitProblem};
use qgs_core::apps::laplace::{laplace_dirichlet_solve, solve_dirichlet, ChargeCase};
use qgs_core::apps::linsys::{classify_linear_system, SolutionKind, RESIDUAL_FACTOR};
use qgs_core::linalg::{
    exact_eigensolve, random_hermitian, random_matrix_with_condition, random_unit_vector,
    ComplexVector, C64,
};
use qgs_core::qgs::RunConfig;
use qgs_core::qipe::IpeConfig;
use qgs_core::qqr::quantum_qr;
use qgs_core::rng::substream;
use qgs_core::Mode;

fn sampled(eps: f64, seed: u64) -> (RunConfig, IpeConfig) {
    (RunConfig::new(eps).with_seed(seed), IpeConfig::new(eps, 0.1).with_seed(seed ^ 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn same_seed_same_decomposition(seed in any::<u64>(), n in 2usize..7) {
        let a = random_matrix_with_condition(n, n, 10.0, seed).unwrap();
        let (cfg, ipe) = sampled(0.05, seed);
        let x = quantum_qr(&a, &cfg, &ipe).unwrap();
        let y = quantum_qr(&a, &cfg, &ipe).unwrap();
        prop_assert_eq!(x.q, y.q);
        prop_assert_eq!(x.r, y.r);
        prop_assert_eq!(x.ledger, y.ledger);
    }

    #[test]
    fn unique_solutions_respect_residual_bound(seed in any::<u64>(), n in 2usize..7, kappa in 1.0f64..50.0) {
        let a = random_matrix_with_condition(n, n, kappa, seed).unwrap();
        let b = random_unit_vector(n, &mut substream(seed, 9, 0)) * C64::new(2.0, 0.0);
        let (cfg, ipe) = sampled(0.05, seed);
        match classify_linear_system(&a, &b, &cfg, &ipe) {
            Ok(out) => {
                if let SolutionKind::Unique(x) = out.kind {
                    let residual = (&a * &x - &b).norm();
                    prop_assert!(residual <= RESIDUAL_FACTOR * cfg.eps * b.norm());
                }
            }
            // An inaccurate solve is reported instead of returned.
            Err(qgs_core::Error::InaccurateSolution { residual, bound }) => prop_assert!(residual > bound),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn polyfit_is_near_least_squares_optimal(seed in any::<u64>(), r in 1usize..4, k in 1usize..4) {
        let eps = 0.05;
        let (_, train, _) = random_fit_data(r, seed);
        let p = FitProblem::new(train.clone(), k).unwrap();
        let cfg = RunConfig { dep_threshold: 1e-10, ..RunConfig::new(eps).with_mode(Mode::Analytic) };
        let ipe = IpeConfig::new(eps, 0.1).with_mode(Mode::Analytic);
        let quantum = polyfit_qr(&p, &cfg, &ipe).unwrap();
        let classical = polyfit_normal_equations(&p).unwrap();
        let y_norm = train.iter().map(|q| q.1 * q.1).sum::<f64>().sqrt();
        prop_assert!(residual_norm(&quantum, &train) <= residual_norm(&classical, &train) + 10.0 * eps * y_norm);
    }

    #[test]
    fn quantum_iterates_preserve_spectrum(seed in any::<u64>(), n in 2usize..6) {
        let eps = 1e-2;
        let h = random_hermitian(n, &mut substream(seed, 0, 0));
        let exact = exact_eigensolve(&h).unwrap().values;
        let cfg = RunConfig::new(eps).with_mode(Mode::Analytic).with_seed(seed);
        let mut current = h.clone();
        for it in 0..3u64 {
            let ipe = IpeConfig::new(eps, 0.1).with_seed(seed.wrapping_add(it));
            let qr = quantum_qr(&current, &cfg, &ipe).unwrap();
            current = &qr.r * &qr.q;
            let sym = (&current + current.adjoint()) * C64::new(0.5, 0.0);
            let moved = exact_eigensolve(&sym).unwrap().values;
            for (a, b) in moved.iter().zip(&exact) {
                prop_assert!((a - b).abs() <= 10.0 * eps, "{:?} vs {:?}", moved, exact);
            }
        }
    }
}

#[test]
fn laplace_obeys_maximum_principle() {
    let cfg = RunConfig::new(1e-3).with_mode(Mode::Analytic);
    let ipe = IpeConfig::new(1e-3, 0.1).with_mode(Mode::Analytic);
    for case in ChargeCase::ALL {
        let grid = laplace_dirichlet_solve(case, 9, &cfg, &ipe).unwrap();
        let (lo, hi) = grid.boundary_range();
        assert!(grid.values.iter().all(|&v| v >= lo - 1e-9 && v <= hi + 1e-9));
    }
    let saddle = solve_dirichlet(7, |x, y| Ok(x * x - y * y), &cfg, &ipe).unwrap();
    assert!(saddle.max_interior_error() <= 1e-8);
}

#[test]
fn zero_rhs_gives_zero_solution() {
    let a = random_matrix_with_condition(4, 4, 5.0, 2).unwrap();
    let cfg = RunConfig::new(1e-3).with_mode(Mode::Analytic);
    let ipe = IpeConfig::new(1e-3, 0.1).with_mode(Mode::Analytic);
    let out = classify_linear_system(&a, &ComplexVector::zeros(4), &cfg, &ipe).unwrap();
    assert_eq!(out.kind, SolutionKind::Unique(ComplexVector::zeros(4)));
}
