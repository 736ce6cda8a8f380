//! Counter-based seeding: every trial gets its own generator, derived from the
//! master seed and the trial index, so results do not depend on the order in
//! which trials are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_GUE: u64 = 1;
pub const STREAM_GUE_TRIDIAGONAL: u64 = 2;
pub const STREAM_HAAR: u64 = 3;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index ^ 0xD1B5_4A32_D192_ED03))
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
