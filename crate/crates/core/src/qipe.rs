//! Inner-product estimation with two Hadamard tests, one for the real part
//! and one (with an `S^dag` on the flag) for the imaginary part.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pad, ComplexVector, C64};
use crate::qsim::{apply_flag_hadamard, apply_flag_phase, padded_dim, StateVector};
use crate::rng::{domain, substream};
use crate::Mode;

/// Inputs must have unit norm to this tolerance.
pub const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpeConfig {
    pub eps: f64,
    pub delta: f64,
    pub mode: Mode,
    pub seed: u64,
}

impl IpeConfig {
    pub fn new(eps: f64, delta: f64) -> Self {
        IpeConfig {
            eps,
            delta,
            mode: Mode::Sampled,
            seed: 0,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        sample_count(self.eps, self.delta).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IpeEstimate {
    pub value: C64,
    /// Shots over both circuits; zero in analytic mode.
    pub shots_used: u64,
}

/// Shots per circuit: `ceil((16 / eps^2) log2(4 / delta))`.
pub fn sample_count(eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(
            "eps",
            format!("must lie in (0, 1), got {eps}"),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(
            "delta",
            format!("must lie in (0, 1), got {delta}"),
        ));
    }
    Ok((16.0 / (eps * eps) * (4.0 / delta).log2()).ceil() as u64)
}

fn check_pair(x: &ComplexVector, y: &ComplexVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, v) in [x, y].into_iter().enumerate() {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitBasis { index, norm });
        }
    }
    Ok(())
}

/// `(|0>|x> + |1>|y>) / √2`, the state after the flag Hadamard and the two
/// controlled state preparations.
fn prepared(x: &ComplexVector, y: &ComplexVector) -> Result<StateVector> {
    let n = padded_dim(x.len());
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_branches(x.len(), &pad(x, n).scale(s), &pad(y, n).scale(s))
}

/// Branch-0 probability of the real-part circuit, `(1 + Re<x|y>) / 2`.
pub fn real_part_circuit(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    check_pair(x, y)?;
    let s = apply_flag_hadamard(&prepared(x, y)?);
    Ok(s.branch_probability(0))
}

/// Branch-0 probability of the imaginary-part circuit, `(1 + Im<x|y>) / 2`.
pub fn imag_part_circuit(x: &ComplexVector, y: &ComplexVector) -> Result<f64> {
    check_pair(x, y)?;
    let s = apply_flag_phase(&prepared(x, y)?, C64::new(0.0, -1.0));
    let s = apply_flag_hadamard(&s);
    Ok(s.branch_probability(0))
}

fn sample_mean<R: Rng + ?Sized>(p: f64, shots: u64, rng: &mut R) -> Result<f64> {
    let dist =
        Binomial::new(shots, p.clamp(0.0, 1.0)).map_err(|e| Error::param("p", e.to_string()))?;
    let zeros = dist.sample(rng);
    Ok(2.0 * zeros as f64 / shots as f64 - 1.0)
}

/// Estimate `<x|y>` to within `eps` with probability above `1 - delta`.
pub fn estimate_inner_product(
    x: &ComplexVector,
    y: &ComplexVector,
    cfg: &IpeConfig,
) -> Result<IpeEstimate> {
    let shots = sample_count(cfg.eps, cfg.delta)?;
    let p_re = real_part_circuit(x, y)?;
    let p_im = imag_part_circuit(x, y)?;
    match cfg.mode {
        Mode::Analytic => Ok(IpeEstimate {
            value: C64::new(2.0 * p_re - 1.0, 2.0 * p_im - 1.0),
            shots_used: 0,
        }),
        Mode::Sampled => {
            let re = sample_mean(p_re, shots, &mut substream(cfg.seed, domain::IPE_REAL, 0))?;
            let im = sample_mean(p_im, shots, &mut substream(cfg.seed, domain::IPE_IMAG, 0))?;
            Ok(IpeEstimate {
                value: C64::new(re, im),
                shots_used: 2 * shots,
            })
        }
    }
}
