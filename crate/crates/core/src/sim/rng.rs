//! Seeded random streams for the simulator.
//!
//! The scheme is fixed so runs reproduce across machines, thread counts
//! and reimplementations:
//!
//! 1. Expand the 64-bit user seed into a 256-bit ChaCha key by taking four
//!    successive SplitMix64 outputs starting from state `seed`, each
//!    written little-endian.
//! 2. Games are grouped into blocks of [`GAMES_PER_BLOCK`]; block `b` uses
//!    ChaCha8 with that key and stream id `b`, starting at word 0.
//! 3. A shot with make probability `x` draws one `u64` word `w` and is made
//!    iff `(w >> 11) · 2⁻⁵³ < x`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GAMES_PER_BLOCK: u64 = 8192;

/// The SplitMix64 output function applied to a state after increment.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_key(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Source of shot outcomes. The simulator only ever asks "is this shot,
/// made with probability `prob`, a make?".
pub trait ShotSource {
    fn makes(&mut self, prob: f64) -> bool;
}

/// ChaCha8-backed [`ShotSource`] for one block of games.
#[derive(Debug, Clone)]
pub struct ShotRng {
    inner: ChaCha8Rng,
}

impl ShotRng {
    pub fn for_block(seed: u64, block: u64) -> Self {
        let mut inner = ChaCha8Rng::from_seed(derive_key(seed));
        inner.set_stream(block);
        Self { inner }
    }

    pub fn next_unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl ShotSource for ShotRng {
    fn makes(&mut self, prob: f64) -> bool {
        self.next_unit() < prob
    }
}
