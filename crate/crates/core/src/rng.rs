//! Deterministic random streams.
//!
//! Every consumer of randomness derives its own stream from a master seed and
//! a `(domain, index)` label, so results do not depend on the order in which
//! independent trials or steps are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream labels used inside the crate.
pub mod domain {
    pub const QGS_STEP: u64 = 0x5147_5300;
    pub const IPE_ENTRY: u64 = 0x4950_4500;
    pub const IPE_REAL: u64 = 0x4950_4552;
    pub const IPE_IMAG: u64 = 0x4950_4549;
    pub const MEMBERSHIP: u64 = 0x4d45_4d00;
    pub const TRIAL: u64 = 0x5452_4900;
    pub const MATRIX: u64 = 0x4d41_5400;
    pub const IPE_RHS: u64 = 0x4950_4552_4853;
    pub const FIT_DATA: u64 = 0x4649_5400;
    pub const ITERATION: u64 = 0x4954_4500;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `seed` and a label.
pub fn derive_seed(seed: u64, domain: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(domain)) ^ index)
}

/// Independent generator for `(domain, index)` under the master `seed`.
pub fn substream(seed: u64, domain: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(seed, domain, index))
}
