//! Recyclable hybrid: one quantum encryption of a symmetric key `K` yields a
//! classical recycled key `rk = (K, qct)` that encrypts any number of further
//! messages without touching a quantum public key again.
//!
//! The symmetric nonce is the recycled key's message counter as a `λ`-bit
//! number: the first ciphertext uses `0`, each `renc` the next value.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use qsim::{BitString, DetRng};

use crate::error::{Error, Result};
use crate::primitives::{ske_dec, ske_enc_with_nonce, SkeCiphertext, SkeKey, SkeMode};
use crate::scheme::{check_msg_len, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct Recyclable<S> {
    /// Carries `λ`-bit symmetric keys.
    pub inner: S,
    pub mode: SkeMode,
    pub ell: usize,
    quantum_encryptions: Arc<AtomicUsize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecCiphertext<C> {
    /// The quantum part encrypted to ⊥; nothing derived from it decrypts.
    Bottom,
    Present { qct: C, sct: SkeCiphertext },
}

impl<C: Wire> Wire for RecCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        match self {
            RecCiphertext::Bottom => {
                w.u8(0);
            }
            RecCiphertext::Present { qct, sct } => {
                w.u8(1).put(qct).put(sct);
            }
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.tag()? {
            Ok(RecCiphertext::Present {
                qct: r.get()?,
                sct: r.get()?,
            })
        } else {
            Ok(RecCiphertext::Bottom)
        }
    }
}

/// `rk = (K, qct)` plus the nonce counter. `None` when the quantum
/// encryption produced ⊥.
#[derive(Clone, Debug, PartialEq)]
pub struct RecyclableKey<C> {
    pub material: Option<(SkeKey, C)>,
    pub counter: u64,
}

impl<C: Wire> Wire for RecyclableKey<C> {
    fn write(&self, w: &mut Writer) {
        match &self.material {
            None => {
                w.u8(0);
            }
            Some((k, qct)) => {
                w.u8(1).bits(&k.0).put(qct);
            }
        }
        w.u64(self.counter);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let material = if r.tag()? {
            Some((SkeKey(r.bits()?), r.get()?))
        } else {
            None
        };
        Ok(RecyclableKey {
            material,
            counter: r.u64()?,
        })
    }
}

fn nonce(counter: u64, lambda: usize) -> BitString {
    let mut n = BitString::zeros(lambda);
    let low = lambda.min(64);
    n.write_at(lambda - low, &BitString::from_index(counter & ((1u128 << low) - 1) as u64, low));
    n
}

impl<S: Qpke> Recyclable<S> {
    pub fn new(inner: S, mode: SkeMode, ell: usize) -> Self {
        Recyclable {
            inner,
            mode,
            ell,
            quantum_encryptions: Arc::default(),
        }
    }

    pub fn lambda(&self) -> usize {
        self.inner.msg_len()
    }

    /// How many times a quantum public key has been consumed.
    pub fn quantum_encryptions(&self) -> usize {
        self.quantum_encryptions.load(Ordering::Relaxed)
    }

    pub fn rec_enc(
        &self,
        vk: &S::VerKey,
        pk: S::PublicKey,
        msg: &BitString,
        rng: &mut DetRng,
    ) -> Result<(RecCiphertext<S::Ciphertext>, RecyclableKey<S::Ciphertext>)> {
        check_msg_len(self.ell, msg)?;
        let key = SkeKey::random(self.lambda(), rng);
        self.quantum_encryptions.fetch_add(1, Ordering::Relaxed);
        let qct = self.inner.enc(vk, pk, &key.0, rng)?;
        let mut rk = RecyclableKey {
            material: (!self.inner.is_bottom(&qct)).then_some((key, qct)),
            counter: 0,
        };
        let ct = self.rec_renc(&mut rk, msg)?;
        Ok((ct, rk))
    }

    /// Encrypts with a recycled key. Classical only.
    pub fn rec_renc(&self, rk: &mut RecyclableKey<S::Ciphertext>, msg: &BitString) -> Result<RecCiphertext<S::Ciphertext>> {
        check_msg_len(self.ell, msg)?;
        let Some((key, qct)) = &rk.material else {
            return Ok(RecCiphertext::Bottom);
        };
        if rk.counter == u64::MAX {
            return Err(Error::Protocol("recycled key counter exhausted".into()));
        }
        let sct = ske_enc_with_nonce(key, nonce(rk.counter, key.len()), msg, self.mode);
        rk.counter += 1;
        Ok(RecCiphertext::Present { qct: qct.clone(), sct })
    }
}

impl<S: Qpke> Qpke for Recyclable<S> {
    type SecretKey = S::SecretKey;
    type VerKey = S::VerKey;
    type PublicKey = S::PublicKey;
    type Ciphertext = RecCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        let mode = match self.mode {
            SkeMode::Cpa => "cpa",
            SkeMode::Cca => "cca",
        };
        format!("recyclable[{mode}]({})", self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.ell
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        self.inner.skgen(rng)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        self.inner.pkgen(sk, rng)
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        Ok(self.rec_enc(vk, pk, msg, rng)?.0)
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        match ct {
            RecCiphertext::Bottom => None,
            RecCiphertext::Present { qct, sct } => {
                let key = SkeKey(self.inner.dec(sk, qct)?);
                ske_dec(&key, sct, self.mode)
            }
        }
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        matches!(ct, RecCiphertext::Bottom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mock::Mock;

    fn scheme(mode: SkeMode) -> Recyclable<Mock> {
        Recyclable::new(Mock { ell: 128 }, mode, 24)
    }

    #[test]
    fn one_quantum_encryption_then_many_recycled() {
        for mode in [SkeMode::Cpa, SkeMode::Cca] {
            let s = scheme(mode);
            let mut rng = DetRng::from_seed(1);
            let (sk, vk) = s.skgen(&mut rng);
            let m = BitString::random(24, &mut rng);
            let (ct, mut rk) = s.rec_enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
            assert_eq!(s.dec(&sk, &ct), Some(m));
            let mut seen = vec![ct];
            for _ in 0..100 {
                let m = BitString::random(24, &mut rng);
                let ct = s.rec_renc(&mut rk, &m).unwrap();
                assert_eq!(s.dec(&sk, &ct), Some(m));
                assert!(!seen.contains(&ct));
                seen.push(ct);
            }
            assert_eq!(s.quantum_encryptions(), 1);
            assert_eq!(rk.counter, 101);
            assert_eq!(RecyclableKey::from_wire(&rk.to_wire()).unwrap(), rk);
        }
    }

    #[test]
    fn renc_is_deterministic_in_key_and_counter() {
        let s = scheme(SkeMode::Cca);
        let mut rng = DetRng::from_seed(2);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::zeros(24);
        let (_, rk) = s.rec_enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        let (mut a, mut b) = (rk.clone(), rk);
        assert_eq!(s.rec_renc(&mut a, &m).unwrap(), s.rec_renc(&mut b, &m).unwrap());
        let first = s.rec_renc(&mut a, &m).unwrap();
        assert_ne!(first, s.rec_renc(&mut a, &m).unwrap());
    }

    #[test]
    fn bottom_quantum_part_poisons_everything() {
        let s = scheme(SkeMode::Cpa);
        let mut rng = DetRng::from_seed(3);
        let (sk, vk) = s.skgen(&mut rng);
        let mut pk = s.pkgen(&sk, &mut rng);
        pk.reject = true;
        let m = BitString::zeros(24);
        let (ct, mut rk) = s.rec_enc(&vk, pk, &m, &mut rng).unwrap();
        assert_eq!(ct, RecCiphertext::Bottom);
        for _ in 0..10 {
            assert_eq!(s.rec_renc(&mut rk, &m).unwrap(), RecCiphertext::Bottom);
        }
        assert_eq!(s.dec(&sk, &ct), None);
    }

    #[test]
    fn nonce_encodes_counter() {
        assert_eq!(nonce(5, 8), BitString::from_index(5, 8));
        assert_eq!(nonce(1, 128).count_ones(), 1);
        assert!(nonce(1, 128).get(127));
    }
}
