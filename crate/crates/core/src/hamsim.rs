//! Projector Hamiltonians `H = Σ |u><u|`, their time evolution (exact and
//! with a bounded injected error) and the query-cost model for simulating
//! them through a linear combination of unitaries.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    matrix_exponential, pad, random_hermitian, spectral_norm, ComplexMatrix, ComplexVector, C64,
};

/// Unit-norm tolerance for basis vectors.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Largest pairwise overlap for which `exp(-iHt)` is taken from the
/// projector identity instead of a dense exponential.
pub const SHORTCUT_OVERLAP_TOL: f64 = 1e-11;

/// `H = Σ_n |u_n><u_n|` over basis vectors padded to `dim`.
///
/// The dense matrix is maintained incrementally, as is the largest pairwise
/// overlap `max |<u_i|u_j>|`.
#[derive(Debug, Clone)]
pub struct ProjectorHamiltonian {
    dim: usize,
    tol_ortho: f64,
    basis: Vec<ComplexVector>,
    matrix: ComplexMatrix,
    max_overlap: f64,
}

impl ProjectorHamiltonian {
    pub fn new(dim: usize, tol_ortho: f64) -> Self {
        ProjectorHamiltonian {
            dim,
            tol_ortho,
            basis: Vec::new(),
            matrix: ComplexMatrix::zeros(dim, dim),
            max_overlap: 0.0,
        }
    }

    pub fn from_basis(dim: usize, tol_ortho: f64, basis: &[ComplexVector]) -> Result<Self> {
        let mut h = Self::new(dim, tol_ortho);
        for u in basis {
            h.push(u.clone())?;
        }
        Ok(h)
    }

    /// Append `u` (zero-padded to `dim`) and return its index.
    pub fn push(&mut self, u: ComplexVector) -> Result<usize> {
        if u.len() > self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.len(),
            });
        }
        let norm = u.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonUnitBasis {
                index: self.basis.len(),
                norm,
            });
        }
        let u = if u.len() < self.dim {
            pad(&u, self.dim)
        } else {
            u
        };
        for b in &self.basis {
            self.max_overlap = self.max_overlap.max(b.dotc(&u).norm());
        }
        self.matrix
            .ger(C64::new(1.0, 0.0), &u, &u.conjugate(), C64::new(1.0, 0.0));
        self.basis.push(u);
        Ok(self.basis.len() - 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Padded basis vectors.
    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    /// Dense `Σ |u><u|`.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn max_overlap(&self) -> f64 {
        self.max_overlap
    }

    pub fn tol_ortho(&self) -> f64 {
        self.tol_ortho
    }

    pub fn is_orthonormal_within(&self, tol: f64) -> bool {
        self.max_overlap <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMethod {
    /// `I + (e^{-it} - 1) P`.
    Projector,
    /// Spectral decomposition of the dense `H`.
    Dense,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub unitary: ComplexMatrix,
    pub method: EvolutionMethod,
    /// Set when the basis overlap exceeds the Hamiltonian's `tol_ortho`.
    pub orthogonality_violation: bool,
}

/// `exp(-iHt)`.
pub fn evolve_exact(h: &ProjectorHamiltonian, t: f64) -> Result<Evolution> {
    let orthogonality_violation = h.max_overlap > h.tol_ortho;
    if h.max_overlap <= SHORTCUT_OVERLAP_TOL {
        let n = h.dim;
        let factor = C64::from_polar(1.0, -t) - C64::new(1.0, 0.0);
        let unitary = ComplexMatrix::identity(n, n) + &h.matrix * factor;
        return Ok(Evolution {
            unitary,
            method: EvolutionMethod::Projector,
            orthogonality_violation,
        });
    }
    Ok(Evolution {
        unitary: matrix_exponential(&h.matrix, t)?,
        method: EvolutionMethod::Dense,
        orthogonality_violation,
    })
}

#[derive(Debug, Clone)]
pub struct ErrantEvolution {
    /// `E · exp(-iHt)`.
    pub unitary: ComplexMatrix,
    pub exact: Evolution,
    /// Rotation angle of `E = exp(-iθK)`; `||E - I|| = 2 sin(θ/2)`.
    pub theta: f64,
}

impl ErrantEvolution {
    /// Exact distance `||U - exp(-iHt)||` implied by the drawn angle.
    pub fn deviation(&self) -> f64 {
        2.0 * (self.theta / 2.0).sin()
    }
}

/// `exp(-iHt)` followed by a random unitary `exp(-iθK)` with `||K|| = 1` and
/// `θ = 2 asin(eps0 ρ / 2)`, `ρ ~ U(0, 1]`, so the result lies within `eps0`
/// of the exact evolution.
pub fn evolve_with_error<R: Rng + ?Sized>(
    h: &ProjectorHamiltonian,
    t: f64,
    eps0: f64,
    rng: &mut R,
) -> Result<ErrantEvolution> {
    if !(eps0 > 0.0 && eps0 < 1.0) {
        return Err(Error::param(
            "eps0",
            format!("must lie in (0, 1), got {eps0}"),
        ));
    }
    let exact = evolve_exact(h, t)?;
    let k = random_hermitian(h.dim, rng);
    let k = &k / C64::new(spectral_norm(&k), 0.0);
    let rho = 1.0 - rng.random::<f64>();
    let theta = 2.0 * (eps0 * rho / 2.0).asin();
    let e = matrix_exponential(&k, theta)?;
    Ok(ErrantEvolution {
        unitary: e * &exact.unitary,
        exact,
        theta,
    })
}

#[derive(Debug, Clone)]
pub struct LcuDecomposition {
    pub coefficients: Vec<f64>,
    pub unitaries: Vec<ComplexMatrix>,
    pub alpha_sum: f64,
}

impl LcuDecomposition {
    /// `Σ α_l V_l`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.unitaries.first().map_or(0, |v| v.nrows());
        let mut m = ComplexMatrix::zeros(n, n);
        for (&a, v) in self.coefficients.iter().zip(&self.unitaries) {
            m += v * C64::new(a, 0.0);
        }
        m
    }
}

/// `H = (k/2) I + Σ_n (1/2)(2|u_n><u_n| - I)`.
pub fn reflection_lcu(h: &ProjectorHamiltonian) -> Result<LcuDecomposition> {
    if h.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = h.dim;
    let k = h.len();
    let id = ComplexMatrix::identity(n, n);
    let mut coefficients = vec![k as f64 / 2.0];
    let mut unitaries = vec![id.clone()];
    for u in &h.basis {
        coefficients.push(0.5);
        unitaries.push(u * u.adjoint() * C64::new(2.0, 0.0) - &id);
    }
    Ok(LcuDecomposition {
        alpha_sum: coefficients.iter().sum(),
        coefficients,
        unitaries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryCost {
    pub queries: u64,
    pub gates: u64,
}

/// `k t + 4 log2(1/eps)` before rounding.
pub fn query_count_unrounded(k: usize, t: f64, eps: f64) -> f64 {
    k as f64 * t + 4.0 * (1.0 / eps).log2()
}

/// Oracle queries and two-qubit gates for one controlled evolution of a
/// `k`-term projector Hamiltonian for time `t` at precision `eps`.
pub fn lcu_query_cost(k: usize, t: f64, eps: f64) -> Result<QueryCost> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(
            "eps",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    let queries = query_count_unrounded(k, t, eps).ceil() as u64;
    let select_bits = (k.max(2) as f64).log2().ceil() as u64;
    Ok(QueryCost {
        queries,
        gates: select_bits * queries,
    })
}

/// Total qubits for orthonormalizing `m` vectors of dimension `n`:
/// `ceil(log2 m) + ceil(log2 n) + 3`.
pub fn qubit_count(m: usize, n: usize) -> u32 {
    ceil_log2(m) + ceil_log2(n) + 3
}

fn ceil_log2(x: usize) -> u32 {
    x.max(1).next_power_of_two().trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{
        c64, columns, haar_isometry, random_unit_vector, real_vector, unitarity_deviation,
    };
    use crate::qsim::qpe_circuit_matrix;
    use crate::rng::substream;
    use std::f64::consts::PI;

    fn random_projector(n: usize, k: usize, seed: u64) -> ProjectorHamiltonian {
        let q = haar_isometry(n, k, &mut substream(seed, 0, 0));
        ProjectorHamiltonian::from_basis(n, 1e-12, &columns(&q)).unwrap()
    }

    #[test]
    fn push_validates() {
        let mut h = ProjectorHamiltonian::new(4, 1e-3);
        assert!(matches!(
            h.push(real_vector(&[2.0, 0.0])),
            Err(Error::NonUnitBasis { .. })
        ));
        assert!(matches!(
            h.push(real_vector(&[1.0, 0.0, 0.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        h.push(real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(h.basis()[0].len(), 4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        h.push(real_vector(&[s, s])).unwrap();
        assert!((h.max_overlap() - s).abs() < 1e-15);
    }

    #[test]
    fn evolve_exact_examples() {
        let h = ProjectorHamiltonian::from_basis(2, 1e-12, &[real_vector(&[1.0, 0.0])]).unwrap();
        let ev = evolve_exact(&h, PI).unwrap();
        assert_eq!(ev.method, EvolutionMethod::Projector);
        let out = &ev.unitary * real_vector(&[1.0, 0.0]);
        assert!((out - real_vector(&[-1.0, 0.0])).norm() < 1e-15);
        let out = &ev.unitary * real_vector(&[0.0, 1.0]);
        assert!((out - real_vector(&[0.0, 1.0])).norm() < 1e-15);
    }

    #[test]
    fn projector_shortcut_matches_dense_exponential() {
        for (n, k) in [(8, 3), (16, 16), (32, 5)] {
            let h = random_projector(n, k, n as u64 * 31 + k as u64);
            let ev = evolve_exact(&h, 0.7).unwrap();
            let dense = matrix_exponential(h.matrix(), 0.7).unwrap();
            assert!((&ev.unitary - &dense).camax() <= 1e-11);
            assert!(unitarity_deviation(&ev.unitary) <= 1e-12);

            let ev = evolve_exact(&h, PI).unwrap();
            let reflect = ComplexMatrix::identity(n, n) - h.matrix() * c64(2.0, 0.0);
            assert!((&ev.unitary - reflect).camax() <= 1e-12);
        }
    }

    #[test]
    fn non_orthogonal_basis_falls_back_to_dense() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ProjectorHamiltonian::from_basis(
            2,
            1e-3,
            &[real_vector(&[1.0, 0.0]), real_vector(&[s, s])],
        )
        .unwrap();
        let ev = evolve_exact(&h, PI).unwrap();
        assert_eq!(ev.method, EvolutionMethod::Dense);
        assert!(ev.orthogonality_violation);
        assert!(unitarity_deviation(&ev.unitary) < 1e-12);
    }

    #[test]
    fn error_injection_stays_within_bound() {
        let h = random_projector(8, 3, 4);
        let exact = evolve_exact(&h, PI).unwrap().unitary;
        let mut rng = substream(12, 0, 0);
        let mut worst_ratio = 0.0_f64;
        for _ in 0..1000 {
            let eps0 = 1e-3;
            let ev = evolve_with_error(&h, PI, eps0, &mut rng).unwrap();
            let d = spectral_norm(&(&ev.unitary - &exact));
            assert!(d < eps0, "{d}");
            assert!((d - ev.deviation()).abs() < 1e-12);
            worst_ratio = worst_ratio.max(d / eps0);
        }
        assert!(worst_ratio > 0.9);
    }

    #[test]
    fn error_injection_small_limit_and_determinism() {
        let h = random_projector(4, 2, 5);
        let exact = evolve_exact(&h, PI).unwrap().unitary;
        let ev = evolve_with_error(&h, PI, 1e-15, &mut substream(1, 0, 0)).unwrap();
        assert!((&ev.unitary - &exact).camax() <= 1e-13);
        assert!(unitarity_deviation(&ev.unitary) <= 1e-12);

        let a = evolve_with_error(&h, PI, 1e-4, &mut substream(7, 0, 0)).unwrap();
        let b = evolve_with_error(&h, PI, 1e-4, &mut substream(7, 0, 0)).unwrap();
        assert_eq!(a.unitary, b.unitary);

        assert!(evolve_with_error(&h, PI, 0.0, &mut substream(7, 0, 0)).is_err());
        assert!(evolve_with_error(&h, PI, 1.0, &mut substream(7, 0, 0)).is_err());
    }

    #[test]
    fn circuit_matrices_inherit_the_bound() {
        let mut rng = substream(21, 0, 0);
        for n in [2, 4, 8, 16] {
            let h = random_projector(n, n / 2, n as u64);
            for _ in 0..20 {
                let eps0 = 1e-2;
                let ev = evolve_with_error(&h, PI, eps0, &mut rng).unwrap();
                let real = qpe_circuit_matrix(&ev.unitary);
                let ideal = qpe_circuit_matrix(&ev.exact.unitary);
                assert!(spectral_norm(&(real - ideal)) < eps0);
            }
        }
    }

    #[test]
    fn lcu_examples() {
        let h = random_projector(4, 1, 9);
        let lcu = reflection_lcu(&h).unwrap();
        assert_eq!(lcu.coefficients, vec![0.5, 0.5]);
        assert_eq!(lcu.alpha_sum, 1.0);

        for (n, k) in [(8, 3), (16, 7)] {
            let h = random_projector(n, k, 10 + k as u64);
            let lcu = reflection_lcu(&h).unwrap();
            assert_eq!(lcu.alpha_sum, k as f64);
            assert!((lcu.reconstruct() - h.matrix()).camax() <= 1e-12);
            for v in &lcu.unitaries {
                assert!(unitarity_deviation(v) <= 1e-10);
            }
        }
        assert!(reflection_lcu(&ProjectorHamiltonian::new(2, 1e-3)).is_err());
    }

    #[test]
    fn query_cost_examples() {
        let c = lcu_query_cost(1, PI, 0.1).unwrap();
        assert_eq!(c.queries, 17);
        let c = lcu_query_cost(4, PI, 0.1).unwrap();
        assert_eq!(
            c,
            QueryCost {
                queries: 26,
                gates: 52
            }
        );
        let d = query_count_unrounded(3, PI, 0.05) - query_count_unrounded(3, PI, 0.1);
        assert!((d - 4.0).abs() < 1e-12);
        assert!(lcu_query_cost(1, PI, 1.0).is_err());
        assert!(lcu_query_cost(0, PI, 0.1).is_err());
    }

    #[test]
    fn qubit_count_examples() {
        assert_eq!(qubit_count(8, 8), 9);
        assert_eq!(qubit_count(5, 100), 3 + 7 + 3);
        assert_eq!(qubit_count(1, 1), 3);
    }

    #[test]
    fn evolution_of_padded_state() {
        let h = random_projector(8, 2, 3);
        let v = random_unit_vector(8, &mut substream(4, 0, 0));
        let ev = evolve_exact(&h, PI).unwrap();
        let expected = &v - h.matrix() * &v * c64(2.0, 0.0);
        assert!((&ev.unitary * &v - expected).norm() < 1e-13);
    }
}
