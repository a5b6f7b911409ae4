//! Deterministic random streams.
//!
//! Every realization owns one ChaCha20 generator keyed by the 64-bit master
//! seed and addressed by a 64-bit stream number. ChaCha is counter based, so
//! distinct stream numbers give non-overlapping sequences under the same key
//! and no two realizations share a prefix.
//!
//! Stream layout for realization `i`:
//!
//! - stream `2 i`: the agent (τ draws, measurements, rotation angles);
//! - stream `2 i + 1`: model construction (fresh random Hamiltonians).
//!
//! Within one iteration the agent stream is consumed in a fixed order: one
//! draw for τ, one draw per qudit measurement in qudit order, then three
//! draws (α, β, γ) for every punished pair in lexicographic pair order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Stream = ChaCha20Rng;

pub fn stream(seed: u64, stream: u64) -> Stream {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn agent_stream_id(realization: u64) -> u64 {
    realization.wrapping_mul(2)
}

pub fn model_stream_id(realization: u64) -> u64 {
    realization.wrapping_mul(2).wrapping_add(1)
}
