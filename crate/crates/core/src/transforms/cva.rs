//! Cut-and-choose: `4λ_r` inner instances, each encrypting a random share.
//! A random half (`Test`) carries the share in the clear; the rest carry
//! `share ⊕ msg`. Decryption rejects on any Test mismatch and otherwise takes
//! the majority of the non-Test candidates.

use std::collections::BTreeMap;

use qsim::{BitString, DetRng};
use rand::seq::index;

use crate::error::Result;
use crate::scheme::{check_arity, check_msg_len, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct Cva<S> {
    pub inner: S,
    pub lambda_r: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvaCiphertext<C> {
    /// Indicator of the Test set over the `4λ_r` slots.
    pub test: BitString,
    pub slots: Vec<(C, BitString)>,
}

impl<C: Wire> Wire for CvaCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        w.bits(&self.test).put(&self.slots);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(CvaCiphertext {
            test: r.bits()?,
            slots: r.get()?,
        })
    }
}

impl<S: Qpke> Cva<S> {
    pub fn new(inner: S, lambda_r: usize) -> Self {
        Cva { inner, lambda_r }
    }

    pub fn instances(&self) -> usize {
        4 * self.lambda_r
    }

    pub fn test_size(&self) -> usize {
        2 * self.lambda_r
    }

    /// Encrypts under a caller-chosen Test set (used by the games to replay
    /// the challenger's choice).
    pub fn enc_with_test(
        &self,
        vk: &[S::VerKey],
        pk: Vec<S::PublicKey>,
        msg: &BitString,
        test: BitString,
        rng: &mut DetRng,
    ) -> Result<CvaCiphertext<S::Ciphertext>> {
        let n = self.instances();
        check_arity(n, vk.len())?;
        check_arity(n, pk.len())?;
        check_arity(n, test.len())?;
        check_msg_len(self.inner.msg_len(), msg)?;
        let ell = self.inner.msg_len();
        let mut slots = Vec::with_capacity(n);
        for (i, (vk_i, pk_i)) in vk.iter().zip(pk).enumerate() {
            let u = BitString::random(ell, rng);
            let ct = self.inner.enc(vk_i, pk_i, &u, rng)?;
            let v = if test.get(i) { u } else { u.xor(msg)? };
            slots.push((ct, v));
        }
        Ok(CvaCiphertext { test, slots })
    }

    pub fn random_test(&self, rng: &mut DetRng) -> BitString {
        let mut t = BitString::zeros(self.instances());
        for i in index::sample(rng, self.instances(), self.test_size()) {
            t.set(i, true);
        }
        t
    }
}

impl<S: Qpke> Qpke for Cva<S> {
    type SecretKey = Vec<S::SecretKey>;
    type VerKey = Vec<S::VerKey>;
    type PublicKey = Vec<S::PublicKey>;
    type Ciphertext = CvaCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        format!("cva[λr={}]({})", self.lambda_r, self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.inner.msg_len()
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        (0..self.instances()).map(|_| self.inner.skgen(rng)).unzip()
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        sk.iter().map(|k| self.inner.pkgen(k, rng)).collect()
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        let test = self.random_test(rng);
        self.enc_with_test(vk, pk, msg, test, rng)
    }

    /// A ⊥ from a non-Test instance also yields ⊥.
    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        let n = self.instances();
        if sk.len() != n || ct.slots.len() != n || ct.test.len() != n || ct.test.count_ones() != self.test_size() {
            return None;
        }
        let mut votes: BTreeMap<BitString, usize> = BTreeMap::new();
        for (i, (sk_i, (c, v))) in sk.iter().zip(&ct.slots).enumerate() {
            let u = self.inner.dec(sk_i, c)?;
            if ct.test.get(i) {
                if &u != v {
                    return None;
                }
            } else {
                *votes.entry(v.xor(&u).ok()?).or_default() += 1;
            }
        }
        // BTreeMap iterates in lexicographic order, so the first maximum wins ties.
        let best = votes.values().copied().max()?;
        votes.into_iter().find(|(_, c)| *c == best).map(|(m, _)| m)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        ct.slots.iter().any(|(c, _)| self.inner.is_bottom(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mock::Mock;
    use rand::Rng;

    fn scheme() -> Cva<Mock> {
        Cva::new(Mock { ell: 6 }, 4)
    }

    #[test]
    fn round_trip_and_test_size() {
        let s = scheme();
        let mut rng = DetRng::from_seed(1);
        let (sk, vk) = s.skgen(&mut rng);
        for _ in 0..200 {
            let m = BitString::random(6, &mut rng);
            let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
            assert_eq!(ct.test.count_ones(), 8);
            assert_eq!(s.dec(&sk, &ct), Some(m));
            let back = CvaCiphertext::from_wire(&ct.to_wire()).unwrap();
            assert_eq!(back, ct);
        }
    }

    #[test]
    fn many_corrupt_slots_are_caught() {
        let s = scheme();
        let mut rng = DetRng::from_seed(2);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::random(6, &mut rng);
        let mut bottoms = 0;
        for _ in 0..500 {
            let mut pk = s.pkgen(&sk, &mut rng);
            // corrupt λ_r + 3 = 7 of 16 slots
            for i in index::sample(&mut rng, 16, 7) {
                let mut f = BitString::random(6, &mut rng);
                f.set(0, true);
                pk[i].flip = Some(f);
            }
            match s.dec(&sk, &s.enc(&vk, pk, &m, &mut rng).unwrap()) {
                None => bottoms += 1,
                Some(out) => assert_eq!(out, m),
            }
        }
        // miss probability C(9,8)/C(16,8) ≈ 7e-4 per trial
        assert!(bottoms >= 495, "{bottoms}");
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let s = Cva::new(Mock { ell: 2 }, 1);
        let mut rng = DetRng::from_seed(3);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::from_bits([true, true]);
        let test = BitString::from_bits([true, true, false, false]);
        let mut pk = s.pkgen(&sk, &mut rng);
        pk[3].flip = Some(BitString::from_bits([true, false]));
        let ct = s.enc_with_test(&vk, pk, &m, test, &mut rng).unwrap();
        // candidates 11 and 01 each once
        assert_eq!(s.dec(&sk, &ct), Some(BitString::from_bits([false, true])));
    }

    #[test]
    fn non_test_bottom_is_bottom() {
        let s = Cva::new(Mock { ell: 2 }, 1);
        let mut rng = DetRng::from_seed(4);
        let (sk, vk) = s.skgen(&mut rng);
        let mut pk = s.pkgen(&sk, &mut rng);
        pk[2].reject = true;
        let test = BitString::from_bits([true, true, false, false]);
        let ct = s.enc_with_test(&vk, pk, &BitString::zeros(2), test, &mut rng).unwrap();
        assert!(s.is_bottom(&ct));
        assert_eq!(s.dec(&sk, &ct), None);
    }

    #[test]
    fn arbitrary_mismatched_keys_never_decrypt_wrong() {
        let s = scheme();
        let mut rng = DetRng::from_seed(5);
        for _ in 0..300 {
            let (sk, vk) = s.skgen(&mut rng);
            let (sk2, _) = s.skgen(&mut rng);
            let mut pk = s.pkgen(&sk, &mut rng);
            for p in pk.iter_mut() {
                match rng.gen_range(0..4) {
                    0 => p.flip = Some(BitString::random(6, &mut rng)),
                    1 => p.key = sk2[0],
                    _ => {}
                }
            }
            let m = BitString::random(6, &mut rng);
            let ct = s.enc(&vk, pk, &m, &mut rng).unwrap();
            if let Some(out) = s.dec(&sk, &ct) {
                assert_eq!(out, m);
            }
        }
    }
}
