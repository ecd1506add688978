//! Deterministic seeding. Every random stream is keyed by
//! `(master seed, stream name, replication index)`, so adding a stream never
//! perturbs the draws of an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPolicy {
    pub master: u64,
    pub replication: u32,
}

impl SeedPolicy {
    pub fn new(master: u64, replication: u32) -> Self {
        Self {
            master,
            replication,
        }
    }

    pub fn sub_seed(&self, stream: &str) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.master.to_le_bytes());
        h.update((stream.len() as u64).to_le_bytes());
        h.update(stream.as_bytes());
        h.update(self.replication.to_le_bytes());
        h.finalize().into()
    }

    pub fn rng(&self, stream: &str) -> StreamRng {
        StreamRng::from_seed(self.sub_seed(stream))
    }
}
