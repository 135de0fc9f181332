//! Counter-based random streams.
//!
//! A stream is identified by `(master_seed, stream_index)`. The master seed
//! keys a ChaCha8 generator and the index selects one of its 2^64 independent
//! streams, so replication `i` always sees the same numbers no matter which
//! worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream {
            master_seed,
            stream_index,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = self.master_seed;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Family of streams keyed by an extra label; `derive(tag).with_index(i)`
    /// is independent of `derive(tag')` for `tag != tag'`.
    pub fn derive(&self, tag: u64) -> RngStream {
        RngStream {
            master_seed: mix_seed(self.master_seed, &[self.stream_index, tag]),
            stream_index: 0,
        }
    }

    pub fn with_index(&self, stream_index: u64) -> RngStream {
        RngStream {
            master_seed: self.master_seed,
            stream_index,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a master seed together with a list of labels into a new seed.
pub fn mix_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out ^= splitmix64(&mut state);
        state = out;
    }
    out
}
