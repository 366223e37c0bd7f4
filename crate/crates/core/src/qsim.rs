//! Statevector simulator for the one-flag-qubit phase-estimation circuit.
//!
//! The full register is `flag ⊗ data`; amplitude `f * N + n` belongs to flag
//! value `f` and data basis state `n`, where `N` is the data dimension padded
//! to a power of two.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{unitarity_deviation, ComplexMatrix, ComplexVector, C64};

/// Tolerance for accepting a matrix as unitary in the checked gate API.
pub const UNITARY_TOL: f64 = 1e-10;

/// Branches with smaller probability are treated as impossible.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;

/// Entries with smaller magnitude are skipped when fixing the readout phase.
const PHASE_REFERENCE_TOL: f64 = 1e-12;

/// Smallest power of two `>= n` (and at least 1).
pub fn padded_dim(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// Joint state of the flag qubit and the data register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    logical_dim: usize,
    data_dim: usize,
    amplitudes: ComplexVector,
}

/// Data-register state after the flag has been measured.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    logical_dim: usize,
    amplitudes: ComplexVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub bit: u8,
    pub probability: f64,
    pub collapsed: RegisterState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    /// Draw the outcome from the Born distribution.
    Sampled,
    /// Post-select the given flag value.
    Branch(u8),
}

impl StateVector {
    /// Build from the two unnormalized flag branches; both must have length
    /// `data_dim`.
    pub fn from_branches(
        logical_dim: usize,
        zero: &ComplexVector,
        one: &ComplexVector,
    ) -> Result<Self> {
        let data_dim = zero.len();
        if one.len() != data_dim {
            return Err(Error::DimensionMismatch {
                expected: data_dim,
                found: one.len(),
            });
        }
        if !data_dim.is_power_of_two() || logical_dim > data_dim {
            return Err(Error::param(
                "data_dim",
                format!("{data_dim} is not a power of two >= {logical_dim}"),
            ));
        }
        let mut amplitudes = ComplexVector::zeros(2 * data_dim);
        amplitudes.rows_mut(0, data_dim).copy_from(zero);
        amplitudes.rows_mut(data_dim, data_dim).copy_from(one);
        Ok(StateVector {
            logical_dim,
            data_dim,
            amplitudes,
        })
    }

    pub fn data_dim(&self) -> usize {
        self.data_dim
    }

    /// Dimension of the vector that was encoded, before padding.
    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    /// Unnormalized data amplitudes of flag branch `bit`.
    pub fn branch(&self, bit: u8) -> ComplexVector {
        let n = self.data_dim;
        self.amplitudes.rows(bit as usize * n, n).into_owned()
    }

    pub fn branch_probability(&self, bit: u8) -> f64 {
        let n = self.data_dim;
        self.amplitudes.rows(bit as usize * n, n).norm_squared()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }
}

impl RegisterState {
    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }
}

/// Encode `v / ||v||` into the data register with the flag in `|0>`.
pub fn amplitude_encode(v: &ComplexVector) -> Result<StateVector> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector { index: 0 });
    }
    let n = padded_dim(v.len());
    let mut amplitudes = ComplexVector::zeros(2 * n);
    amplitudes.rows_mut(0, v.len()).copy_from(&v.unscale(norm));
    Ok(StateVector {
        logical_dim: v.len(),
        data_dim: n,
        amplitudes,
    })
}

pub fn apply_flag_hadamard(s: &StateVector) -> StateVector {
    let n = s.data_dim;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = s.clone();
    for i in 0..n {
        let a = s.amplitudes[i];
        let b = s.amplitudes[n + i];
        out.amplitudes[i] = (a + b) * h;
        out.amplitudes[n + i] = (a - b) * h;
    }
    out
}

/// Multiply the flag `|1>` branch by `phase`, e.g. `-i` for `S^dag`.
pub fn apply_flag_phase(s: &StateVector, phase: C64) -> StateVector {
    let n = s.data_dim;
    let mut out = s.clone();
    for i in n..2 * n {
        out.amplitudes[i] *= phase;
    }
    out
}

/// Controlled-`U` with the flag as control. `U` is checked for unitarity.
pub fn apply_controlled_unitary(s: &StateVector, u: &ComplexMatrix) -> Result<StateVector> {
    check_gate_shape(s, u)?;
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(apply_controlled_trusted(s, u))
}

fn check_gate_shape(s: &StateVector, u: &ComplexMatrix) -> Result<()> {
    if u.nrows() != s.data_dim || u.ncols() != s.data_dim {
        return Err(Error::DimensionMismatch {
            expected: s.data_dim,
            found: u.nrows().max(u.ncols()),
        });
    }
    Ok(())
}

/// Controlled-`U` for callers that already guarantee `U` is unitary.
pub(crate) fn apply_controlled_trusted(s: &StateVector, u: &ComplexMatrix) -> StateVector {
    let n = s.data_dim;
    let mut out = s.clone();
    let rotated = u * s.amplitudes.rows(n, n);
    out.amplitudes.rows_mut(n, n).copy_from(&rotated);
    out
}

/// Measure the flag qubit.
pub fn measure_flag<R: Rng + ?Sized>(
    s: &StateVector,
    mode: MeasureMode,
    rng: &mut R,
) -> Result<MeasurementOutcome> {
    let p0 = s.branch_probability(0);
    let p1 = s.branch_probability(1);
    let bit = match mode {
        MeasureMode::Branch(b) if b > 1 => {
            return Err(Error::param(
                "bit",
                format!("flag value must be 0 or 1, got {b}"),
            ));
        }
        MeasureMode::Branch(b) => {
            let p = if b == 0 { p0 } else { p1 };
            if p < MIN_BRANCH_PROBABILITY {
                return Err(Error::ImpossibleOutcome {
                    bit: b,
                    probability: p,
                });
            }
            b
        }
        MeasureMode::Sampled => {
            let u: f64 = rng.random();
            if u * (p0 + p1) < p0 {
                0
            } else {
                1
            }
        }
    };
    let probability = (if bit == 0 { p0 } else { p1 }) / (p0 + p1);
    let branch = s.branch(bit);
    let norm = branch.norm();
    Ok(MeasurementOutcome {
        bit,
        probability,
        collapsed: RegisterState {
            logical_dim: s.logical_dim,
            amplitudes: branch.unscale(norm),
        },
    })
}

/// Read the data register: truncate padding and fix the global phase so that
/// the first non-negligible entry is real and positive.
pub fn readout(s: &RegisterState) -> ComplexVector {
    let mut v = readout_padded(s);
    v.resize_vertically_mut(s.logical_dim, C64::new(0.0, 0.0));
    v
}

/// As [`readout`] but keeping the padded amplitudes.
pub fn readout_padded(s: &RegisterState) -> ComplexVector {
    let mut v = s.amplitudes.clone();
    let reference = v
        .rows(0, s.logical_dim)
        .iter()
        .copied()
        .find(|z| z.norm() > PHASE_REFERENCE_TOL);
    if let Some(z) = reference {
        v *= z.conj() / z.norm();
    }
    v
}

/// State just before the flag measurement: encode `a`, Hadamard, controlled
/// `U`, Hadamard. `U` must already be unitary on the padded dimension.
pub fn qpe_circuit(a: &ComplexVector, u: &ComplexMatrix) -> Result<StateVector> {
    let s = amplitude_encode(a)?;
    check_gate_shape(&s, u)?;
    let s = apply_flag_hadamard(&s);
    let s = apply_controlled_trusted(&s, u);
    Ok(apply_flag_hadamard(&s))
}

/// The `2N x 2N` matrix `(H ⊗ I) CU (H ⊗ I)` of the phase-estimation circuit.
pub fn qpe_circuit_matrix(u: &ComplexMatrix) -> ComplexMatrix {
    let n = u.nrows();
    let id = ComplexMatrix::identity(n, n);
    let plus = (&id + u) * C64::new(0.5, 0.0);
    let minus = (&id - u) * C64::new(0.5, 0.0);
    let mut m = ComplexMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&plus);
    m.view_mut((0, n), (n, n)).copy_from(&minus);
    m.view_mut((n, 0), (n, n)).copy_from(&minus);
    m.view_mut((n, n), (n, n)).copy_from(&plus);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, haar_isometry, random_unit_vector, real_vector};
    use crate::rng::substream;
    use proptest::prelude::*;

    fn orthonormal(n: usize, k: usize, seed: u64) -> Vec<ComplexVector> {
        let mut rng = substream(seed, 0, 0);
        let q = haar_isometry(n, k, &mut rng);
        crate::linalg::columns(&q)
    }

    #[test]
    fn encode_examples() {
        let s = amplitude_encode(&real_vector(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(s.data_dim(), 4);
        assert_eq!(s.amplitudes()[0], c64(1.0, 0.0));
        assert_eq!(s.norm_squared(), 1.0);

        let s = amplitude_encode(&real_vector(&[3.0, 4.0])).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - 0.8).abs() < 1e-15);

        let s = amplitude_encode(&real_vector(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(s.data_dim(), 4);
        let r = 1.0 / 3f64.sqrt();
        assert!((s.amplitudes()[2].re - r).abs() < 1e-15);
        assert_eq!(s.amplitudes()[3], c64(0.0, 0.0));

        assert!(matches!(
            amplitude_encode(&real_vector(&[0.0, 0.0])),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn hadamard_examples() {
        let s = amplitude_encode(&real_vector(&[1.0, 0.0])).unwrap();
        let h = apply_flag_hadamard(&s);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((h.amplitudes()[2].re - r).abs() < 1e-15);

        let hh = apply_flag_hadamard(&h);
        assert!((hh.amplitudes() - s.amplitudes()).norm() < 1e-14);

        let minus =
            StateVector::from_branches(2, &real_vector(&[r, 0.0]), &real_vector(&[-r, 0.0]))
                .unwrap();
        let out = apply_flag_hadamard(&minus);
        assert!(out.branch_probability(0) < 1e-30);
        assert!((out.amplitudes()[2].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn controlled_unitary_examples() {
        let s = apply_flag_hadamard(&amplitude_encode(&real_vector(&[1.0, 0.0])).unwrap());
        let same = apply_controlled_unitary(&s, &ComplexMatrix::identity(2, 2)).unwrap();
        assert_eq!(same, s);

        let z = crate::linalg::real_matrix(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let kicked = apply_controlled_unitary(&s, &z).unwrap();
        let back = apply_flag_hadamard(&kicked);
        assert!((back.branch_probability(1) - 1.0).abs() < 1e-15);

        let not_unitary = ComplexMatrix::identity(2, 2) * c64(2.0, 0.0);
        assert!(matches!(
            apply_controlled_unitary(&s, &not_unitary),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            apply_controlled_unitary(&s, &ComplexMatrix::identity(4, 4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn measurement_examples() {
        let mut rng = substream(1, 0, 0);
        let one =
            StateVector::from_branches(2, &real_vector(&[0.0, 0.0]), &real_vector(&[1.0, 0.0]))
                .unwrap();
        assert!(matches!(
            measure_flag(&one, MeasureMode::Branch(0), &mut rng),
            Err(Error::ImpossibleOutcome { bit: 0, .. })
        ));

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mixed = StateVector::from_branches(2, &real_vector(&[r, 0.0]), &real_vector(&[0.0, r]))
            .unwrap();
        let out = measure_flag(&mixed, MeasureMode::Branch(0), &mut rng).unwrap();
        assert!((out.probability - 0.5).abs() < 1e-15);
        assert_eq!(readout(&out.collapsed), real_vector(&[1.0, 0.0]));
    }

    #[test]
    fn sampled_frequency_within_binomial_band() {
        // p(0) = 0.25; 5 sigma of Binomial(1e5, 0.25) is about 0.0069.
        let s = StateVector::from_branches(
            2,
            &real_vector(&[0.5, 0.0]),
            &real_vector(&[0.0, 0.75f64.sqrt()]),
        )
        .unwrap();
        let mut rng = substream(2, 0, 0);
        let shots = 100_000;
        let zeros = (0..shots)
            .filter(|_| {
                measure_flag(&s, MeasureMode::Sampled, &mut rng)
                    .unwrap()
                    .bit
                    == 0
            })
            .count();
        let freq = zeros as f64 / shots as f64;
        assert!((0.24..=0.26).contains(&freq), "{freq}");
    }

    #[test]
    fn readout_examples() {
        let v = real_vector(&[3.0, 4.0]);
        let s = amplitude_encode(&v).unwrap();
        let out = measure_flag(&s, MeasureMode::Branch(0), &mut substream(0, 0, 0)).unwrap();
        let r = readout(&out.collapsed);
        assert!((r - real_vector(&[0.6, 0.8])).norm() < 1e-15);

        let state = RegisterState {
            logical_dim: 2,
            amplitudes: ComplexVector::from_vec(vec![c64(0.0, 0.0), c64(0.0, 1.0)]),
        };
        assert_eq!(readout(&state), real_vector(&[0.0, 1.0]));

        let s = amplitude_encode(&real_vector(&[1.0, 2.0, 2.0])).unwrap();
        let out = measure_flag(&s, MeasureMode::Branch(0), &mut substream(0, 0, 0)).unwrap();
        assert_eq!(readout(&out.collapsed).len(), 3);
    }

    #[test]
    fn full_pipeline_matches_projection_formula() {
        let n = 8;
        let basis = orthonormal(n, 3, 5);
        let mut p = ComplexMatrix::zeros(n, n);
        for u in &basis {
            p += u * u.adjoint();
        }
        // exp(-i pi P) = I - 2P
        let u = ComplexMatrix::identity(n, n) - &p * c64(2.0, 0.0);
        let a = random_unit_vector(n, &mut substream(6, 0, 0));
        let s = qpe_circuit(&a, &u).unwrap();

        let proj: ComplexVector = &p * &a;
        assert!((s.branch(1) - &proj).camax() <= 1e-12);
        assert!((s.branch(0) - (&a - &proj)).camax() <= 1e-12);
        let overlap: f64 = basis.iter().map(|b| b.dotc(&a).norm_sqr()).sum();
        assert!((s.branch_probability(0) - (1.0 - overlap)).abs() <= 1e-12);

        let out = measure_flag(&s, MeasureMode::Branch(0), &mut substream(0, 0, 0)).unwrap();
        for b in &basis {
            assert!(b.dotc(out.collapsed.amplitudes()).norm() <= 1e-12);
        }
    }

    #[test]
    fn circuit_matrix_agrees_with_gate_sequence() {
        let n = 4;
        let q = haar_isometry(n, n, &mut substream(8, 0, 0));
        let a = random_unit_vector(n, &mut substream(9, 0, 0));
        let s = qpe_circuit(&a, &q).unwrap();
        let m = qpe_circuit_matrix(&q);
        let input = amplitude_encode(&a).unwrap();
        let expected = &m * input.amplitudes();
        assert!((s.amplitudes() - expected).camax() < 1e-13);
        assert!(unitarity_deviation(&m) < 1e-12);
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(seed in any::<u64>(), logical in 1usize..9) {
            let mut rng = substream(seed, 0, 0);
            let a = random_unit_vector(logical, &mut rng);
            let s = amplitude_encode(&a).unwrap();
            let n = s.data_dim();
            let u = haar_isometry(n, n, &mut rng);
            let s1 = apply_flag_hadamard(&s);
            prop_assert!((s1.norm_squared() - 1.0).abs() <= 1e-13);
            let s2 = apply_controlled_unitary(&s1, &u).unwrap();
            prop_assert!((s2.norm_squared() - 1.0).abs() <= 1e-13);
            let s3 = apply_flag_phase(&s2, c64(0.0, -1.0));
            prop_assert!((s3.norm_squared() - 1.0).abs() <= 1e-13);
            let out = measure_flag(&s3, MeasureMode::Sampled, &mut rng).unwrap();
            prop_assert!((out.collapsed.amplitudes().norm() - 1.0).abs() <= 1e-12);
            let total = s3.branch_probability(out.bit);
            prop_assert!((out.probability - total).abs() <= 1e-12);
        }
    }
}
