//! Seeded random substreams.
//!
//! All randomness in the crate comes from ChaCha8 (RFC 7539 block function,
//! 8 rounds) as implemented by `rand_chacha`. A substream is addressed by
//! `(seed, stream, block)`: the 256-bit key is expanded from `(seed, stream)`
//! with SplitMix64 and `block` selects the ChaCha stream id. Two different
//! addresses select unrelated keystreams, and a given address produces the same
//! bits on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for block `block` of stream `stream` under `seed`.
pub fn substream(seed: u64, stream: u64, block: u64) -> SimRng {
    let mut state = seed;
    let mixed = splitmix64(&mut state) ^ stream.wrapping_mul(GOLDEN_GAMMA).rotate_left(17);
    let mut state = mixed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(block);
    rng
}
