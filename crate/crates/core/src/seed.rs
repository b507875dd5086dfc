//! Deterministic seed derivation.
//!
//! Every random stream in the crate is keyed by a base seed plus a path of
//! indices (repetition, sweep point, layer, ...). Streams never depend on
//! execution order, so parallel runs reproduce serial ones bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `base` with an ordered path of indices into a new 64-bit seed.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut h = splitmix64(base);
    for (depth, &p) in path.iter().enumerate() {
        h = splitmix64(h ^ splitmix64(p.wrapping_add((depth as u64 + 1) << 56)));
    }
    h
}

/// A ChaCha8 stream for `(base, path)`.
pub fn stream(base: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(base, path))
}

// Stream tags, so that e.g. the membership and connectivity draws of one
// repetition never share a stream.
pub(crate) const TAG_MEMBERSHIP: u64 = 0x4d45_4d42;
pub(crate) const TAG_CONNECTIVITY: u64 = 0x434f_4e4e;
pub(crate) const TAG_NETWORK: u64 = 0x4e45_5457;
pub(crate) const TAG_LAYER: u64 = 0x4c41_5952;
