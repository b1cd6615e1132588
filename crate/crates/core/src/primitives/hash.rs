//! Sponge hash used as the one-way function behind every classical primitive.
//!
//! State: eight 64-bit words (512 bits), rate four words (32 bytes),
//! capacity four words.
//!
//! Permutation: eight rounds. Round `r` XORs `ROUND_CONSTANTS[r]` into word 0,
//! then applies the mixing function `G` to the columns `(0,2,4,6)`,
//! `(1,3,5,7)` and then to the diagonals `(0,3,4,7)`, `(1,2,5,6)`, where
//!
//! ```text
//! G(a,b,c,d): a += b; d = (d ^ a) >>> 32; c += d; b = (b ^ c) >>> 24;
//!             a += b; d = (d ^ a) >>> 16; c += d; b = (b ^ c) >>> 63;
//! ```
//!
//! (`+=` is wrapping addition, `>>>` right rotation).
//!
//! Absorbing: input bytes are XORed little-endian into words 0..4, one
//! permutation per full 32-byte block. A fresh sponge first absorbs
//! `[len(domain)] ‖ domain`. Finalisation pads with `0x01`, zeros, and XORs
//! `0x80` into the last rate byte, then permutes.
//!
//! Squeezing: words 0..4 are emitted little-endian, permuting between blocks;
//! the output bit string takes bit `j` from byte `j / 8`, bit `j % 8`.

use qsim::BitString;

const RATE_BYTES: usize = 32;
const ROUNDS: usize = 8;
const IV: [u64; 8] = [
    0x6a09_e667_f3bc_c908,
    0xbb67_ae85_84ca_a73b,
    0x3c6e_f372_fe94_f82b,
    0xa54f_f53a_5f1d_36f1,
    0x510e_527f_ade6_82d1,
    0x9b05_688c_2b3e_6c1f,
    0x1f83_d9ab_fb41_bd6b,
    0x5be0_cd19_137e_2179,
];
const ROUND_CONSTANTS: [u64; ROUNDS] = [
    0x428a_2f98_d728_ae22,
    0x7137_4491_23ef_65cd,
    0xb5c0_fbcf_ec4d_3b2f,
    0xe9b5_dba5_8189_dbbc,
    0x3956_c25b_f348_b538,
    0x59f1_11f1_b605_d019,
    0x923f_82a4_af19_4f9b,
    0xab1c_5ed5_da6d_8118,
];

macro_rules! g {
    ($a:ident, $b:ident, $c:ident, $d:ident) => {
        $a = $a.wrapping_add($b);
        $d = ($d ^ $a).rotate_right(32);
        $c = $c.wrapping_add($d);
        $b = ($b ^ $c).rotate_right(24);
        $a = $a.wrapping_add($b);
        $d = ($d ^ $a).rotate_right(16);
        $c = $c.wrapping_add($d);
        $b = ($b ^ $c).rotate_right(63);
    };
}

fn permute(s: &mut [u64; 8]) {
    let [mut s0, mut s1, mut s2, mut s3, mut s4, mut s5, mut s6, mut s7] = *s;
    for rc in ROUND_CONSTANTS {
        s0 ^= rc;
        g!(s0, s2, s4, s6);
        g!(s1, s3, s5, s7);
        g!(s0, s3, s4, s7);
        g!(s1, s2, s5, s6);
    }
    *s = [s0, s1, s2, s3, s4, s5, s6, s7];
}

#[derive(Clone)]
pub struct Sponge {
    state: [u64; 8],
    block: [u8; RATE_BYTES],
    filled: usize,
}

impl Sponge {
    pub fn new(domain: &[u8]) -> Self {
        assert!(domain.len() < 256, "domain tag too long");
        let mut s = Sponge {
            state: IV,
            block: [0; RATE_BYTES],
            filled: 0,
        };
        s.absorb(&[domain.len() as u8]);
        s.absorb(domain);
        s
    }

    fn flush_block(&mut self) {
        for (i, chunk) in self.block.chunks_exact(8).enumerate() {
            self.state[i] ^= u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        }
        permute(&mut self.state);
        self.block = [0; RATE_BYTES];
        self.filled = 0;
    }

    pub fn absorb(&mut self, mut data: &[u8]) {
        while !data.is_empty() {
            let take = (RATE_BYTES - self.filled).min(data.len());
            self.block[self.filled..self.filled + take].copy_from_slice(&data[..take]);
            self.filled += take;
            data = &data[take..];
            if self.filled == RATE_BYTES {
                self.flush_block();
            }
        }
    }

    pub fn absorb_u64(&mut self, v: u64) {
        self.absorb(&v.to_le_bytes());
    }

    /// Absorbs the bit length followed by the packed bits, so strings of
    /// different lengths never collide.
    pub fn absorb_bits(&mut self, b: &BitString) {
        self.absorb_u64(b.len() as u64);
        self.absorb(&b.to_bytes());
    }

    pub fn squeeze_bytes(self, nbytes: usize) -> Vec<u8> {
        let mut out = vec![0u8; nbytes];
        self.squeeze_into(&mut out);
        out
    }

    /// Fills `out` with output bytes.
    pub fn squeeze_into(mut self, out: &mut [u8]) {
        let last = RATE_BYTES - 1;
        self.block[self.filled] ^= 0x01;
        self.block[last] ^= 0x80;
        self.filled = RATE_BYTES;
        self.flush_block();
        let mut chunks = out.chunks_mut(RATE_BYTES).peekable();
        while let Some(chunk) = chunks.next() {
            for (dst, w) in chunk.chunks_mut(8).zip(&self.state) {
                dst.copy_from_slice(&w.to_le_bytes()[..dst.len()]);
            }
            if chunks.peek().is_some() {
                permute(&mut self.state);
            }
        }
    }

    pub fn squeeze(self, bits: usize) -> BitString {
        let nbytes = bits.div_ceil(8);
        let mut out = self.squeeze_bytes(nbytes);
        if bits % 8 != 0 {
            out[nbytes - 1] &= (1u8 << (bits % 8)) - 1;
        }
        BitString::from_bytes(&out, bits).expect("masked output")
    }
}

/// One-shot hash of bit-string parts under a domain tag.
pub fn hash_bits(domain: &[u8], parts: &[&BitString], out_bits: usize) -> BitString {
    let mut s = Sponge::new(domain);
    for p in parts {
        s.absorb_bits(p);
    }
    s.squeeze(out_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::bits;

    #[test]
    fn deterministic_and_domain_separated() {
        let m = bits("10110");
        let a = hash_bits(b"t1", &[&m], 128);
        assert_eq!(a, hash_bits(b"t1", &[&m], 128));
        assert_ne!(a, hash_bits(b"t2", &[&m], 128));
        assert_ne!(a, hash_bits(b"t1", &[&bits("101100")], 128));
        assert_eq!(a.len(), 128);
    }

    #[test]
    fn long_outputs_and_odd_lengths() {
        let out = hash_bits(b"x", &[], 1000);
        assert_eq!(out.len(), 1000);
        assert_eq!(hash_bits(b"x", &[], 13), out.slice(0, 13));
    }

    #[test]
    fn output_bits_are_balanced() {
        let mut ones = 0usize;
        let n = 4000;
        for i in 0..n {
            let h = hash_bits(b"bias", &[&BitString::from_index(i, 32)], 64);
            ones += h.count_ones();
        }
        let frac = ones as f64 / (n as f64 * 64.0);
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn absorb_across_block_boundary() {
        let mut a = Sponge::new(b"d");
        a.absorb(&[7u8; 70]);
        let mut b = Sponge::new(b"d");
        b.absorb(&[7u8; 31]);
        b.absorb(&[7u8; 39]);
        assert_eq!(a.squeeze(256), b.squeeze(256));
    }
}
