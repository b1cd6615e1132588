//! One-query CCA from CVA: `2n` inner instances indexed by `(i, α)`. An
//! encryption picks instance `(i, sigvk[i])` for XOR share `i` under a fresh
//! one-time signature key and signs the share ciphertexts.

use qsim::{BitString, DetRng};

use super::wire_bits;
use crate::error::{Error, Result};
use crate::primitives::{sig_gen, SigParams, VerifyingKey};
use crate::scheme::{check_arity, check_msg_len, draw_seed, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct OneCca<S> {
    pub inner: S,
    pub binding: SigParams,
    /// Number of shares `n`; the first `n` bits of `sigvk` select instances.
    /// Equals the binding key length unless set lower.
    pub shares: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneCcaCiphertext<C> {
    pub sigvk: VerifyingKey,
    pub parts: Vec<C>,
    pub sigma: BitString,
}

impl<C: Wire> OneCcaCiphertext<C> {
    /// The string the binding signature covers.
    pub fn signed_bits(&self) -> BitString {
        wire_bits(&self.parts)
    }
}

impl<C: Wire> Wire for OneCcaCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        w.put(&self.sigvk).put(&self.parts).bits(&self.sigma);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(OneCcaCiphertext {
            sigvk: r.get()?,
            parts: r.get()?,
            sigma: r.bits()?,
        })
    }
}

impl<S: Qpke> OneCca<S> {
    pub fn new(inner: S, binding: SigParams) -> Self {
        OneCca {
            inner,
            binding,
            shares: binding.hash_bits,
        }
    }

    pub fn with_shares(inner: S, binding: SigParams, shares: usize) -> Result<Self> {
        if shares == 0 || shares > binding.hash_bits {
            return Err(Error::Params(format!(
                "share count {shares} outside 1..={}",
                binding.hash_bits
            )));
        }
        Ok(OneCca {
            inner,
            binding,
            shares,
        })
    }
}

impl<S: Qpke> Qpke for OneCca<S> {
    type SecretKey = Vec<(S::SecretKey, S::SecretKey)>;
    type VerKey = Vec<(S::VerKey, S::VerKey)>;
    type PublicKey = Vec<(S::PublicKey, S::PublicKey)>;
    type Ciphertext = OneCcaCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        format!("1cca[n={}]({})", self.shares, self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.inner.msg_len()
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        (0..self.shares)
            .map(|_| {
                let (s0, v0) = self.inner.skgen(rng);
                let (s1, v1) = self.inner.skgen(rng);
                ((s0, s1), (v0, v1))
            })
            .unzip()
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        sk.iter()
            .map(|(s0, s1)| {
                let p0 = self.inner.pkgen(s0, rng);
                (p0, self.inner.pkgen(s1, rng))
            })
            .collect()
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_arity(self.shares, vk.len())?;
        check_arity(self.shares, pk.len())?;
        check_msg_len(self.msg_len(), msg)?;
        let kp = sig_gen(&draw_seed(rng), self.binding);
        let sel = kp.vk.bits();
        let ell = self.msg_len();
        let mut last = msg.clone();
        let mut shares: Vec<BitString> = (1..self.shares)
            .map(|_| {
                let u = BitString::random(ell, rng);
                last.xor_assign(&u).expect("equal lengths");
                u
            })
            .collect();
        shares.push(last);
        let mut parts = Vec::with_capacity(self.shares);
        for (i, ((v0, v1), (p0, p1))) in vk.iter().zip(pk).enumerate() {
            let (v, p) = if sel.get(i) { (v1, p1) } else { (v0, p0) };
            parts.push(self.inner.enc(v, p, &shares[i], rng)?);
        }
        let sigma = kp.sk.sign(&wire_bits(&parts));
        Ok(OneCcaCiphertext {
            sigvk: kp.vk,
            parts,
            sigma,
        })
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        if ct.sigvk.params() != &self.binding || ct.parts.len() != self.shares || sk.len() != self.shares {
            return None;
        }
        if !ct.sigvk.verify(&ct.signed_bits(), &ct.sigma) {
            return None;
        }
        let sel = ct.sigvk.bits();
        let mut out = BitString::zeros(self.msg_len());
        for (i, ((s0, s1), c)) in sk.iter().zip(&ct.parts).enumerate() {
            let u = self.inner.dec(if sel.get(i) { s1 } else { s0 }, c)?;
            out.xor_assign(&u).ok()?;
        }
        Some(out)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        ct.parts.iter().any(|c| self.inner.is_bottom(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mock::Mock;
    use rand::Rng;

    fn scheme() -> OneCca<Mock> {
        OneCca::new(Mock { ell: 5 }, SigParams::new(16, 0).unwrap())
    }

    #[test]
    fn round_trip_selects_by_vk_bits() {
        let s = scheme();
        let mut rng = DetRng::from_seed(1);
        let (sk, vk) = s.skgen(&mut rng);
        for _ in 0..100 {
            let m = BitString::random(5, &mut rng);
            let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
            assert_eq!(ct.parts.len(), 16);
            assert_eq!(s.dec(&sk, &ct), Some(m));
            assert_eq!(OneCcaCiphertext::from_wire(&ct.to_wire()).unwrap(), ct);
            // part i went to instance (i, sigvk[i]), whose key is the mock's vk
            let sel = ct.sigvk.bits();
            for (i, part) in ct.parts.iter().enumerate() {
                let key = if sel.get(i) { sk[i].1 } else { sk[i].0 };
                assert!(part.is_some());
                assert_eq!(Mock { ell: 5 }.dec(&key, part).map(|u| u.len()), Some(5));
            }
        }
    }

    #[test]
    fn flipped_part_bit_breaks_binding() {
        let s = scheme();
        let mut rng = DetRng::from_seed(2);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::random(5, &mut rng);
        let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        for _ in 0..1000 {
            let mut bad = ct.clone();
            let i = rng.gen_range(0..16);
            let part = bad.parts[i].as_mut().unwrap();
            part.flip(rng.gen_range(0..5));
            assert_eq!(s.dec(&sk, &bad), None);
        }
    }

    #[test]
    fn single_share_is_the_message() {
        let s = OneCca::with_shares(Mock { ell: 3 }, SigParams::new(8, 0).unwrap(), 1).unwrap();
        let mut rng = DetRng::from_seed(3);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::from_bits([true, false, true]);
        let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        assert_eq!(s.dec(&sk, &ct), Some(m));
        assert!(OneCca::with_shares(Mock { ell: 3 }, SigParams::new(8, 0).unwrap(), 9).is_err());
    }

    #[test]
    fn any_bottom_share_is_bottom() {
        let s = scheme();
        let mut rng = DetRng::from_seed(4);
        let (sk, vk) = s.skgen(&mut rng);
        let mut pk = s.pkgen(&sk, &mut rng);
        pk[7].0.reject = true;
        pk[7].1.reject = true;
        let ct = s.enc(&vk, pk, &BitString::zeros(5), &mut rng).unwrap();
        assert!(s.is_bottom(&ct));
        assert_eq!(s.dec(&sk, &ct), None);
    }
}
