//! Many public keys from one-key security: every public key carries a fresh
//! serial number `snum`, the inner key pair is regenerated from
//! `PRF_K(snum)`, and a master signature certifies `snum ‖ vk₁`.

use qsim::{BitString, DetRng};

use super::wire_bits;
use crate::error::Result;
use crate::primitives::prf::prf_seed;
use crate::primitives::{sig_gen, PrfKey, SigParams, SigningKey, VerifyingKey};
use crate::scheme::{draw_seed, Qpke};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Debug)]
pub struct MKey<S> {
    pub inner: S,
    /// `λ`: PRF key and serial-number length.
    pub lambda: usize,
    pub master: SigParams,
}

/// `(K, sigk)` and nothing else; per-serial keys are always re-derived.
#[derive(Clone, Debug)]
pub struct MKeySecretKey {
    pub k: PrfKey,
    pub sigk: SigningKey,
}

#[derive(Debug)]
pub struct MKeyPublicKey<V, P> {
    pub snum: BitString,
    pub vk1: V,
    pub pk1: P,
    pub sigma: BitString,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MKeyCiphertext<C> {
    /// The master signature on the public key did not verify.
    Bottom,
    Present { snum: BitString, inner: C },
}

impl<C: Wire> Wire for MKeyCiphertext<C> {
    fn write(&self, w: &mut Writer) {
        match self {
            MKeyCiphertext::Bottom => {
                w.u8(0);
            }
            MKeyCiphertext::Present { snum, inner } => {
                w.u8(1).bits(snum).put(inner);
            }
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.tag()? {
            Ok(MKeyCiphertext::Present {
                snum: r.bits()?,
                inner: r.get()?,
            })
        } else {
            Ok(MKeyCiphertext::Bottom)
        }
    }
}

/// The string the master key signs.
pub fn certified_bits<V: Wire>(snum: &BitString, vk1: &V) -> BitString {
    snum.concat(&wire_bits(vk1))
}

impl<S: Qpke> MKey<S> {
    pub fn new(inner: S, lambda: usize, master: SigParams) -> Self {
        MKey { inner, lambda, master }
    }

    /// The inner key pair for serial number `snum`.
    pub fn derive(&self, sk: &MKeySecretKey, snum: &BitString) -> (S::SecretKey, S::VerKey) {
        self.inner.skgen(&mut DetRng::from_key(prf_seed(&sk.k, snum)))
    }
}

impl<S: Qpke> Qpke for MKey<S> {
    type SecretKey = MKeySecretKey;
    type VerKey = VerifyingKey;
    type PublicKey = MKeyPublicKey<S::VerKey, S::PublicKey>;
    type Ciphertext = MKeyCiphertext<S::Ciphertext>;

    fn name(&self) -> String {
        format!("mkey({})", self.inner.name())
    }

    fn msg_len(&self) -> usize {
        self.inner.msg_len()
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        let k = PrfKey::random(self.lambda, rng);
        let kp = sig_gen(&draw_seed(rng), self.master);
        (MKeySecretKey { k, sigk: kp.sk }, kp.vk)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        let snum = BitString::random(self.lambda, rng);
        let (sk1, vk1) = self.derive(sk, &snum);
        let pk1 = self.inner.pkgen(&sk1, rng);
        let sigma = sk.sigk.sign(&certified_bits(&snum, &vk1));
        MKeyPublicKey { snum, vk1, pk1, sigma }
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        if !vk.verify(&certified_bits(&pk.snum, &pk.vk1), &pk.sigma) {
            return Ok(MKeyCiphertext::Bottom);
        }
        let inner = self.inner.enc(&pk.vk1, pk.pk1, msg, rng)?;
        Ok(MKeyCiphertext::Present { snum: pk.snum, inner })
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        match ct {
            MKeyCiphertext::Bottom => None,
            MKeyCiphertext::Present { snum, inner } => {
                let (sk1, _) = self.derive(sk, snum);
                self.inner.dec(&sk1, inner)
            }
        }
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        match ct {
            MKeyCiphertext::Bottom => true,
            MKeyCiphertext::Present { inner, .. } => self.inner.is_bottom(inner),
        }
    }
}
