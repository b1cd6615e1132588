//! Generic decryption-error detectability: encrypt `msg ‖ τ` where `τ` signs
//! `msg` under an ephemeral one-time key whose verification key travels in
//! the clear. A receiver whose inner decryption went wrong sees a signature
//! that no longer verifies and outputs ⊥.

use qsim::{BitString, DetRng};

use crate::error::{Error, Result};
use crate::primitives::{sig_gen, SigParams, VerifyingKey};
use crate::scheme::{check_msg_len, draw_seed, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct DetectWrap<S> {
    pub inner: S,
    pub ots: SigParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectCiphertext<C> {
    pub svk: VerifyingKey,
    pub inner: C,
}

impl<C: Wire> Wire for DetectCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        w.put(&self.svk).put(&self.inner);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(DetectCiphertext {
            svk: r.get()?,
            inner: r.get()?,
        })
    }
}

impl<S: Qpke> DetectWrap<S> {
    /// The inner scheme must carry `ℓ + sig_len` bits.
    pub fn new(inner: S, ots: SigParams) -> Result<Self> {
        if inner.msg_len() < ots.sig_len() {
            return Err(Error::Params(format!(
                "inner message length {} cannot hold a {}-bit signature",
                inner.msg_len(),
                ots.sig_len()
            )));
        }
        Ok(DetectWrap { inner, ots })
    }
}

impl<S: Qpke> Qpke for DetectWrap<S> {
    type SecretKey = S::SecretKey;
    type VerKey = S::VerKey;
    type PublicKey = S::PublicKey;
    type Ciphertext = DetectCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        format!("detect({})", self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.inner.msg_len() - self.ots.sig_len()
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        self.inner.skgen(rng)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        self.inner.pkgen(sk, rng)
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_msg_len(self.msg_len(), msg)?;
        let kp = sig_gen(&draw_seed(rng), self.ots);
        let tau = kp.sk.sign(msg);
        let inner = self.inner.enc(vk, pk, &msg.concat(&tau), rng)?;
        Ok(DetectCiphertext { svk: kp.vk, inner })
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        if ct.svk.params() != &self.ots {
            return None;
        }
        let plain = self.inner.dec(sk, &ct.inner)?;
        let ell = self.msg_len();
        if plain.len() != self.inner.msg_len() {
            return None;
        }
        let msg = plain.slice(0, ell);
        ct.svk
            .verify(&msg, &plain.slice(ell, plain.len() - ell))
            .then_some(msg)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        self.inner.is_bottom(&ct.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::mock::Mock;

    fn scheme() -> DetectWrap<Mock> {
        let ots = SigParams::new(16, 0).unwrap();
        DetectWrap::new(Mock { ell: 4 + ots.sig_len() }, ots).unwrap()
    }

    #[test]
    fn round_trip_and_wrong_svk() {
        let s = scheme();
        let mut rng = DetRng::from_seed(1);
        let (sk, vk) = s.skgen(&mut rng);
        let m = BitString::from_bits([true, false, false, true]);
        let ct = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        assert_eq!(s.dec(&sk, &ct), Some(m.clone()));
        assert_eq!(DetectCiphertext::from_wire(&ct.to_wire()).unwrap(), ct);
        let other = s.enc(&vk, s.pkgen(&sk, &mut rng), &m, &mut rng).unwrap();
        let swapped = DetectCiphertext {
            svk: other.svk,
            inner: ct.inner,
        };
        assert_eq!(s.dec(&sk, &swapped), None);
    }

    #[test]
    fn corrupted_inner_plaintext_is_detected() {
        let s = scheme();
        let mut rng = DetRng::from_seed(2);
        let (sk, vk) = s.skgen(&mut rng);
        for _ in 0..500 {
            let m = BitString::random(4, &mut rng);
            let mut pk = s.pkgen(&sk, &mut rng);
            let mut flip = BitString::random(s.inner.ell, &mut rng);
            flip.set(0, true);
            pk.flip = Some(flip);
            let ct = s.enc(&vk, pk, &m, &mut rng).unwrap();
            assert_eq!(s.dec(&sk, &ct), None);
        }
    }
}
