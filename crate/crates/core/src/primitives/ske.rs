//! Symmetric encryption from the PRF in counter mode.
//!
//! `K_enc = PRF_K("enc")`, `K_mac = PRF_K("mac")`. A ciphertext under nonce
//! `n` is `n ‖ (m ⊕ PRF_{K_enc}(n ‖ 0) ‖ PRF_{K_enc}(n ‖ 1) ‖ …)`; CCA mode
//! appends `PRF_{K_mac}(n ‖ body)` (encrypt-then-MAC).

use qsim::BitString;
use rand::RngCore;

use super::prf::{prf_eval, PrfKey};
use crate::error::Result;
use crate::wire::{Reader, Wire, Writer};

const BLOCK_BITS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeMode {
    Cpa,
    Cca,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeKey(pub BitString);

impl SkeKey {
    pub fn random<R: RngCore + ?Sized>(bits: usize, rng: &mut R) -> Self {
        SkeKey(BitString::random(bits, rng))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn subkey(&self, label: &[u8]) -> PrfKey {
        let label = BitString::from_bytes(label, label.len() * 8).expect("whole bytes");
        PrfKey(prf_eval(&PrfKey(self.0.clone()), &label, self.0.len()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeCiphertext {
    pub nonce: BitString,
    pub body: BitString,
    pub tag: Option<BitString>,
}

impl SkeCiphertext {
    pub fn len(&self) -> usize {
        self.nonce.len() + self.body.len() + self.tag.as_ref().map_or(0, BitString::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Wire for SkeCiphertext {
    fn write(&self, w: &mut Writer) {
        w.bits(&self.nonce).bits(&self.body).put(&self.tag);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(SkeCiphertext {
            nonce: r.bits()?,
            body: r.bits()?,
            tag: r.get()?,
        })
    }
}

fn keystream(k: &PrfKey, nonce: &BitString, len: usize) -> BitString {
    let blocks: Vec<BitString> = (0..len.div_ceil(BLOCK_BITS) as u64)
        .map(|i| prf_eval(k, &nonce.concat(&BitString::from_index(i, 64)), BLOCK_BITS))
        .collect();
    BitString::concat_all(blocks.iter()).slice(0, len)
}

fn tag(key: &SkeKey, nonce: &BitString, body: &BitString) -> BitString {
    prf_eval(&key.subkey(b"mac"), &nonce.concat(body), key.len())
}

/// Encryption under a caller-chosen nonce (`λ` bits). Deterministic.
pub fn ske_enc_with_nonce(key: &SkeKey, nonce: BitString, msg: &BitString, mode: SkeMode) -> SkeCiphertext {
    let body = msg
        .xor(&keystream(&key.subkey(b"enc"), &nonce, msg.len()))
        .expect("keystream length");
    let tag = (mode == SkeMode::Cca).then(|| tag(key, &nonce, &body));
    SkeCiphertext { nonce, body, tag }
}

pub fn ske_enc<R: RngCore + ?Sized>(key: &SkeKey, msg: &BitString, mode: SkeMode, rng: &mut R) -> SkeCiphertext {
    let nonce = BitString::random(key.len(), rng);
    ske_enc_with_nonce(key, nonce, msg, mode)
}

pub fn ske_dec(key: &SkeKey, ct: &SkeCiphertext, mode: SkeMode) -> Option<BitString> {
    if ct.nonce.len() != key.len() {
        return None;
    }
    match (mode, &ct.tag) {
        (SkeMode::Cpa, None) => {}
        (SkeMode::Cca, Some(t)) if *t == tag(key, &ct.nonce, &ct.body) => {}
        _ => return None,
    }
    ct.body
        .xor(&keystream(&key.subkey(b"enc"), &ct.nonce, ct.body.len()))
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::DetRng;
    use rand::Rng;

    #[test]
    fn round_trip_both_modes() {
        let mut rng = DetRng::from_seed(1);
        let k = SkeKey::random(128, &mut rng);
        for len in [0, 1, 255, 256, 257, 1000] {
            let m = BitString::random(len, &mut rng);
            for mode in [SkeMode::Cpa, SkeMode::Cca] {
                let ct = ske_enc(&k, &m, mode, &mut rng);
                assert_eq!(ske_dec(&k, &ct, mode), Some(m.clone()));
                assert_eq!(SkeCiphertext::from_wire(&ct.to_wire()).unwrap(), ct);
            }
            assert_eq!(ske_enc(&k, &m, SkeMode::Cpa, &mut rng).len(), len + 128);
        }
    }

    #[test]
    fn cca_rejects_every_single_bit_flip() {
        let mut rng = DetRng::from_seed(2);
        let k = SkeKey::random(128, &mut rng);
        let m = BitString::random(64, &mut rng);
        for _ in 0..1000 {
            let mut ct = ske_enc(&k, &m, SkeMode::Cca, &mut rng);
            let total = ct.len();
            let i = rng.gen_range(0..total);
            if i < 128 {
                ct.nonce.flip(i);
            } else if i < 192 {
                ct.body.flip(i - 128);
            } else {
                ct.tag.as_mut().unwrap().flip(i - 192);
            }
            assert_eq!(ske_dec(&k, &ct, SkeMode::Cca), None);
        }
    }

    #[test]
    fn wrong_key_garbles() {
        let mut rng = DetRng::from_seed(3);
        let k1 = SkeKey::random(128, &mut rng);
        let k2 = SkeKey::random(128, &mut rng);
        let m = BitString::random(128, &mut rng);
        let ct = ske_enc(&k1, &m, SkeMode::Cpa, &mut rng);
        assert_ne!(ske_dec(&k2, &ct, SkeMode::Cpa), Some(m.clone()));
        let ct = ske_enc(&k1, &m, SkeMode::Cca, &mut rng);
        assert_eq!(ske_dec(&k2, &ct, SkeMode::Cca), None);
    }
}
