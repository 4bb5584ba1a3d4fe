//! Seeding contract.
//!
//! Every random object is derived from a 64-bit master seed and a stream
//! index. The per-stream seed is
//! `splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15))`, and the
//! stream generator is ChaCha8 seeded from that value with
//! `SeedableRng::seed_from_u64`. Changing either function changes every
//! result, so both are fixed here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream.wrapping_add(GOLDEN_GAMMA)))
}

pub fn stream_rng(master: u64, stream: u64) -> SimRng {
    SimRng::seed_from_u64(stream_seed(master, stream))
}

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}
