//! Splittable seed derivation.
//!
//! Every random stream in the pipeline descends from one master seed. A child
//! seed is the first eight bytes (little endian) of
//! `SHA-256(master_le || tag || index_le)`, so streams for different purposes
//! or indices never collide and do not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(tag.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// Generator for `(master, tag, index)`.
pub fn rng_for(master: u64, tag: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag, index))
}

/// Independent per-node substreams sharing one seed.
///
/// Node `i` draws from ChaCha stream `i`, so per-node work can be scheduled in
/// any order or on any number of threads with identical results.
#[derive(Debug, Clone, Copy)]
pub struct NodeStreams {
    seed: u64,
}

impl NodeStreams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn rng(&self, node: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(node as u64);
        rng
    }
}
