//! Seed derivation for replayable random streams.
//!
//! Every random stream in an experiment is keyed by `(master seed, purpose
//! label, item indices)`. Work items can therefore run in any order, on any
//! number of threads, and still draw exactly the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// The generator used for all simulation randomness.
pub type SimRng = ChaCha8Rng;

/// Hashes `(master, label, indices)` into a 256-bit generator seed.
pub fn derive_seed(master: u64, label: &str, indices: &[u64]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    for index in indices {
        hasher.update(index.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    seed
}

/// Opens the random stream for one work item.
pub fn stream(master: u64, label: &str, indices: &[u64]) -> SimRng {
    SimRng::from_seed(derive_seed(master, label, indices))
}
