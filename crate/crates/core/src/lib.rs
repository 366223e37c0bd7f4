//! Simulation of quantum Gram-Schmidt orthonormalization, quantum QR
//! decomposition and the applications built on top of them.

pub mod apps;
pub mod error;
pub mod hamsim;
pub mod linalg;
pub mod qgs;
pub mod qipe;
pub mod qqr;
pub mod qsim;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64};

use serde::{Deserialize, Serialize};

/// How measurement outcomes are produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Outcomes drawn at random, as on hardware.
    #[default]
    Sampled,
    /// Exact probabilities; post-selection on the desired branch.
    Analytic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sampled" => Ok(Mode::Sampled),
            "analytic" => Ok(Mode::Analytic),
            other => Err(Error::param(
                "mode",
                format!("expected sampled|analytic, got {other}"),
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Sampled => "sampled",
            Mode::Analytic => "analytic",
        })
    }
}
