//! Hierarchical, reproducible random streams.
//!
//! Every random decision in the crate draws from a ChaCha8 stream whose key is
//! the master seed mixed with a path of integer tags (point, graph, run, node,
//! ...). Streams with different paths are statistically independent, and any
//! single stream can be recreated without replaying the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Domain tags keeping unrelated stream families apart.
pub mod tag {
    pub const GRAPH: u64 = 0x4752_4150_4800_0001;
    pub const CHOICE: u64 = 0x4348_4f49_4345_0002;
    pub const RUN: u64 = 0x5255_4e00_0000_0003;
    pub const POINT: u64 = 0x504f_494e_5400_0004;
    pub const SUBGRAPH: u64 = 0x5355_4247_5200_0005;
}

#[inline]
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive a child key from `seed` and a path of tags.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn stream(seed: u64, path: &[u64]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}
