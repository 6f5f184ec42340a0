//! Deterministic seed derivation.
//!
//! Every source of randomness in the crate is a `ChaCha12` stream keyed from
//! a caller-supplied 64-bit seed. Independent sub-tasks (repetitions, trials)
//! derive their own seeds through `derive`, so results are reproducible and
//! order-independent under concurrency.
//!
//! Per-node solver seeds deliberately use plain XOR (`seed ^ node_index`):
//! node 0 then shares the solver seed, which makes single-node runs reproduce
//! a centralized run bit for bit.

/// SplitMix64 finalizer; a full-avalanche mix of the input.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed for sub-task `tag` of `seed`.
pub fn derive(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}
