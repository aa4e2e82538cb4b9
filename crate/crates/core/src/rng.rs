//! Keyed random streams.
//!
//! Every random draw in a run comes from a ChaCha stream whose seed is the
//! SHA-256 digest of `(master seed, purpose, channel, index)`. Streams are
//! therefore independent of evaluation order and of which other channels run.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// The RNG type handed to channels and samplers.
pub type StreamRng = ChaCha12Rng;

/// Purpose tag for the transmitted symbol stream.
pub const PURPOSE_SYMBOLS: &str = "symbols";
/// Purpose tag for channel randomness.
pub const PURPOSE_CHANNEL: &str = "channel";
/// Purpose tag for Born-rule decisions.
pub const PURPOSE_DECISION: &str = "decision";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyedStreams {
    master_seed: u64,
}

impl KeyedStreams {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream(&self, purpose: &str, channel: &str, index: u64) -> StreamRng {
        let mut hasher = Sha256::new();
        hasher.update(self.master_seed.to_le_bytes());
        // Length prefixes keep ("ab", "c") and ("a", "bc") apart.
        hasher.update((purpose.len() as u64).to_le_bytes());
        hasher.update(purpose.as_bytes());
        hasher.update((channel.len() as u64).to_le_bytes());
        hasher.update(channel.as_bytes());
        hasher.update(index.to_le_bytes());
        StreamRng::from_seed(hasher.finalize().into())
    }
}
