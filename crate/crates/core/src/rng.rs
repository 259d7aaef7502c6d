//! Counter-based random streams keyed by `(domain, seed, index)`.
//!
//! Every random quantity in the crate (one edge's weight factor, one edge's
//! presence, one Monte-Carlo trial) draws from its own ChaCha stream, so the
//! value depends only on its key and never on iteration order or thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the streams used by different consumers of the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    WeightPerturbation = 1,
    EdgePresence = 2,
    DeterminantTrial = 3,
    Sampling = 4,
}

pub fn stream(domain: Domain, seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
