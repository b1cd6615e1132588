//! Deterministic, splittable randomness.
//!
//! Every run is driven by one 64-bit seed. Child generators are separate
//! ChaCha20 streams under the same key, so splitting never consumes parent
//! draws and trial `i` of an experiment sees the same bits no matter how the
//! trials are scheduled.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Clone, Debug)]
pub struct DetRng {
    key: [u8; 32],
    stream: u64,
    inner: ChaCha20Rng,
    draws: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a, then mixed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(h)
}

impl DetRng {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        Self::with_stream(key, 0)
    }

    /// Generator keyed directly by 32 bytes, e.g. a PRF output.
    pub fn from_key(key: [u8; 32]) -> Self {
        Self::with_stream(key, 0)
    }

    fn with_stream(key: [u8; 32], stream: u64) -> Self {
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(stream);
        DetRng {
            key,
            stream,
            inner,
            draws: 0,
        }
    }

    /// Independent child stream identified by `label`.
    pub fn split(&self, label: &str) -> DetRng {
        Self::with_stream(self.key, splitmix64(self.stream ^ label_hash(label)))
    }

    /// Independent child stream identified by an integer (e.g. trial index).
    pub fn split_index(&self, index: u64) -> DetRng {
        Self::with_stream(
            self.key,
            splitmix64(self.stream ^ splitmix64(index ^ 0x5bd1_e995_0000_0000)),
        )
    }

    /// Number of draws taken from this stream so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }
}

impl RngCore for DetRng {
    fn next_u32(&mut self) -> u32 {
        self.draws += 1;
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.draws += 1;
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}
