//! Deterministic, labelled random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A master seed plus a stream label.
///
/// The generator for a stream is keyed by `sha256(master || label)`, so two
/// labels under one master are independent and the same pair always yields
/// the same bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master: u64,
    pub stream: String,
}

impl RngSeed {
    pub fn new(master: u64, stream: impl Into<String>) -> Self {
        Self { master, stream: stream.into() }
    }

    /// Sub-stream `label` of this stream.
    pub fn child(&self, label: &str) -> Self {
        Self { master: self.master, stream: format!("{}/{}", self.stream, label) }
    }

    pub fn indexed(&self, label: &str, index: u64) -> Self {
        self.child(&format!("{label}#{index}"))
    }

    fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.master.to_le_bytes());
        h.update([0u8]);
        h.update(self.stream.as_bytes());
        h.finalize().into()
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.digest())
    }

    /// A 64-bit value derived from the stream; used to hand out per-trial
    /// master seeds that reproduce a trial on their own.
    pub fn derive_u64(&self) -> u64 {
        let d = self.digest();
        u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
    }
}
