//! Full CCA from one-query CCA: the public key carries a tokenized-MAC token,
//! the inner plaintext is `sigvk* ‖ msg`, the token signs the inner
//! ciphertext and a fresh one-time signature binds both together.

use qsim::{BitString, DetRng};

use super::wire_bits;
use crate::error::{Error, Result};
use crate::primitives::{
    sig_gen, tmac_keygen, tmac_sign, tmac_token, tmac_verify, SigParams, TmacKey, TmacParams, TmacSignature, TmacToken,
    VerifyingKey,
};
use crate::scheme::{check_msg_len, draw_seed, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct Cca<S> {
    pub inner: S,
    pub binding: SigParams,
    pub tmac: TmacParams,
}

#[derive(Clone, Debug)]
pub struct CcaSecretKey<K> {
    pub inner: K,
    pub mk: TmacKey,
}

#[derive(Debug)]
pub struct CcaPublicKey<P> {
    pub inner: P,
    pub token: TmacToken,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CcaCiphertext<C> {
    pub inner: C,
    pub tag: TmacSignature,
    pub sigma: BitString,
}

impl<C: Wire> CcaCiphertext<C> {
    /// `inner ‖ tag`, the string the binding signature covers.
    pub fn bound_bits(&self) -> BitString {
        wire_bits(&self.inner).concat(&self.tag.0)
    }
}

impl<C: Wire> Wire for CcaCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        w.put(&self.inner).put(&self.tag).bits(&self.sigma);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(CcaCiphertext {
            inner: r.get()?,
            tag: r.get()?,
            sigma: r.bits()?,
        })
    }
}

/// One decryption check, in the order they run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CcaCheck {
    Mac(bool),
    Inner(bool),
    Binding(bool),
}

impl<S: Qpke> Cca<S> {
    /// The inner scheme must carry `binding.hash_bits + ℓ` bits.
    pub fn new(inner: S, binding: SigParams, tmac: TmacParams) -> Result<Self> {
        if inner.msg_len() < binding.hash_bits {
            return Err(Error::Params(format!(
                "inner message length {} cannot hold a {}-bit signature key",
                inner.msg_len(),
                binding.hash_bits
            )));
        }
        Ok(Cca { inner, binding, tmac })
    }

    /// Decryption that also reports which checks ran and how they went.
    pub fn dec_traced(&self, sk: &CcaSecretKey<S::SecretKey>, ct: &CcaCiphertext<S::Ciphertext>) -> (Option<BitString>, Vec<CcaCheck>) {
        let mut trace = Vec::with_capacity(3);
        let ok = tmac_verify(&sk.mk, &wire_bits(&ct.inner), &ct.tag);
        trace.push(CcaCheck::Mac(ok));
        if !ok {
            return (None, trace);
        }
        let plain = self.inner.dec(&sk.inner, &ct.inner);
        trace.push(CcaCheck::Inner(plain.is_some()));
        let Some(plain) = plain else {
            return (None, trace);
        };
        let h = self.binding.hash_bits;
        let sigvk = VerifyingKey::from_bits(self.binding, &plain.slice(0, h)).expect("fixed width");
        let ok = sigvk.verify(&ct.bound_bits(), &ct.sigma);
        trace.push(CcaCheck::Binding(ok));
        (ok.then(|| plain.slice(h, plain.len() - h)), trace)
    }
}

impl<S: Qpke> Qpke for Cca<S> {
    type SecretKey = CcaSecretKey<S::SecretKey>;
    type VerKey = S::VerKey;
    type PublicKey = CcaPublicKey<S::PublicKey>;
    type Ciphertext = CcaCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        format!("cca({})", self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.inner.msg_len() - self.binding.hash_bits
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        let (inner, vk) = self.inner.skgen(rng);
        let mk = tmac_keygen(&draw_seed(rng), self.tmac);
        (CcaSecretKey { inner, mk }, vk)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        CcaPublicKey {
            inner: self.inner.pkgen(&sk.inner, rng),
            token: tmac_token(&sk.mk),
        }
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_msg_len(self.msg_len(), msg)?;
        let CcaPublicKey { inner: ipk, mut token } = pk;
        let kp = sig_gen(&draw_seed(rng), self.binding);
        let inner = self.inner.enc(vk, ipk, &kp.vk.bits().concat(msg), rng)?;
        let tag = tmac_sign(&mut token, &wire_bits(&inner), rng)?;
        let mut ct = CcaCiphertext {
            inner,
            tag,
            sigma: BitString::empty(),
        };
        ct.sigma = kp.sk.sign(&ct.bound_bits());
        Ok(ct)
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        self.dec_traced(sk, ct).0
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        self.inner.is_bottom(&ct.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mock::Mock;
    use rand::Rng;

    fn scheme() -> Cca<Mock> {
        let binding = SigParams::new(16, 0).unwrap();
        Cca::new(Mock { ell: 16 + 4 }, binding, TmacParams::new(8, 16).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_and_check_order() {
        let s = scheme();
        let mut rng = DetRng::from_seed(1);
        let (sk, vk) = s.skgen(&mut rng);
        for _ in 0..50 {
            let m = BitString::random(4, &mut rng);
            let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
            let (out, trace) = s.dec_traced(&sk, &ct);
            assert_eq!(out, Some(m));
            assert_eq!(trace, vec![CcaCheck::Mac(true), CcaCheck::Inner(true), CcaCheck::Binding(true)]);
            assert_eq!(CcaCiphertext::from_wire(&ct.to_wire()).unwrap(), ct);
        }
    }

    #[test]
    fn tampered_tag_fails_first() {
        let s = scheme();
        let mut rng = DetRng::from_seed(2);
        let (sk, vk) = s.skgen(&mut rng);
        let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &BitString::zeros(4), &mut rng).unwrap();
        let mut rejected = 0;
        for _ in 0..1000 {
            let mut bad = ct.clone();
            // flip a position the verifier checks
            let h = crate::primitives::tmac::message_hash(&wire_bits(&bad.inner), &s.tmac);
            let checked: Vec<usize> = (0..s.tmac.qubits())
                .filter(|&k| sk.mk.theta().get(k) == h.get(k / s.tmac.block_qubits))
                .collect();
            bad.tag.0.flip(checked[rng.gen_range(0..checked.len())]);
            let (out, trace) = s.dec_traced(&sk, &bad);
            if out.is_none() && trace == vec![CcaCheck::Mac(false)] {
                rejected += 1;
            }
        }
        assert_eq!(rejected, 1000);
    }

    #[test]
    fn replay_with_second_token_fails_binding() {
        let s = scheme();
        let mut rng = DetRng::from_seed(3);
        let (sk, vk) = s.skgen(&mut rng);
        for _ in 0..100 {
            let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &BitString::random(4, &mut rng), &mut rng).unwrap();
            let mut spare = s.pkgen(&sk, &mut rng);
            let tag = tmac_sign(&mut spare.token, &wire_bits(&ct.inner), &mut rng).unwrap();
            if tag == ct.tag {
                continue;
            }
            let replay = CcaCiphertext { tag, ..ct.clone() };
            let (out, trace) = s.dec_traced(&sk, &replay);
            assert_eq!(out, None);
            assert_eq!(trace, vec![CcaCheck::Mac(true), CcaCheck::Inner(true), CcaCheck::Binding(false)]);
        }
    }

    #[test]
    fn rejects_narrow_inner() {
        assert!(Cca::new(Mock { ell: 8 }, SigParams::new(16, 0).unwrap(), TmacParams::new(8, 4).unwrap()).is_err());
    }
}
