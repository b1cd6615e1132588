//! Built-in adversaries.

use qsim::{BitString, Complex64, DetRng, SparseState};
use rand::seq::index::sample;
use rand::Rng;

use super::{Adversary, Oracles, Tampered};
use crate::base::{BaseCiphertext, QuantumPublicKey, REG_A, REG_B};
use crate::error::{Error, Result};
use crate::primitives::tmac_sign;
use crate::scheme::Qpke;
use crate::transforms::{wire_bits, Cca, CcaCiphertext};

fn first<P>(copies: Vec<P>) -> Result<P> {
    copies
        .into_iter()
        .next()
        .ok_or_else(|| Error::Protocol("adversary needs at least one key copy".into()))
}

/// Forwards the first copy untouched and guesses at random.
#[derive(Clone, Copy, Debug, Default)]
pub struct HonestForwarder;

impl<S: Qpke> Adversary<S> for HonestForwarder {
    fn name(&self) -> String {
        "honest".into()
    }

    fn tamper(&mut self, _: &S, _: &S::VerKey, copies: Vec<S::PublicKey>, _: &mut Oracles<'_, S>, _: &mut DetRng) -> Result<Tampered<S::PublicKey>> {
        Ok(Tampered::new(first(copies)?, "forwarded copy 0"))
    }

    fn guess(&mut self, _: &S, _: &S::Ciphertext, _: Option<bool>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<bool> {
        Ok(rng.gen())
    }
}

/// Substitutes a public key generated from its own secret key, and decrypts
/// the challenge with that key when encryption accepts it.
#[derive(Debug, Default)]
pub struct KeySwap<K> {
    own: Option<K>,
}

impl<K> KeySwap<K> {
    pub fn new() -> Self {
        KeySwap { own: None }
    }
}

impl<S: Qpke> Adversary<S> for KeySwap<S::SecretKey> {
    fn name(&self) -> String {
        "keyswap".into()
    }

    fn tamper(&mut self, scheme: &S, _: &S::VerKey, _: Vec<S::PublicKey>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<Tampered<S::PublicKey>> {
        let (sk, _) = scheme.skgen(rng);
        let pk = scheme.pkgen(&sk, rng);
        self.own = Some(sk);
        Ok(Tampered::new(pk, "own key substituted"))
    }

    fn guess(&mut self, scheme: &S, ct: &S::Ciphertext, _: Option<bool>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<bool> {
        let m1 = BitString::ones(scheme.msg_len());
        match self.own.as_ref().and_then(|sk| scheme.dec(sk, ct)) {
            Some(m) => Ok(m == m1),
            None => Ok(rng.gen()),
        }
    }
}

/// Replaces every slot key by `|0, β₀⟩ + |1, β₁⟩` with branches it chose,
/// then reads `b = d · (0‖β₀ ⊕ 1‖β₁)` off the first slot.
#[derive(Clone, Debug, Default)]
pub struct KnownBranch {
    diff: Option<BitString>,
}

impl KnownBranch {
    pub fn new() -> Self {
        KnownBranch { diff: None }
    }
}

fn two_branch(x0: &BitString, x1: &BitString, layout: qsim::RegisterLayout) -> Result<SparseState> {
    let amp = Complex64::new(1.0, 0.0);
    Ok(SparseState::superpose(layout, [(x0.clone(), amp), (x1.clone(), amp)])?)
}

impl<S> Adversary<S> for KnownBranch
where
    S: Qpke<PublicKey = Vec<QuantumPublicKey>, Ciphertext = Vec<BaseCiphertext>>,
{
    fn name(&self) -> String {
        "known-branch".into()
    }

    fn tamper(&mut self, _: &S, _: &S::VerKey, copies: Vec<S::PublicKey>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<Tampered<S::PublicKey>> {
        let honest = first(copies)?;
        let mut out = Vec::with_capacity(honest.len());
        for (i, k) in honest.into_iter().enumerate() {
            let layout = k.state.layout().clone();
            let w = layout.register_width(REG_B)?;
            let x0 = BitString::from_bits([false]).concat(&BitString::random(w, rng));
            let x1 = BitString::from_bits([true]).concat(&BitString::random(w, rng));
            if i == 0 {
                self.diff = Some(x0.xor(&x1)?);
            }
            out.push(QuantumPublicKey {
                r: k.r,
                state: two_branch(&x0, &x1, layout)?,
            });
        }
        Ok(Tampered::new(out, "all branches replaced with known strings"))
    }

    fn guess(&mut self, _: &S, ct: &S::Ciphertext, _: Option<bool>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<bool> {
        match (ct.first(), &self.diff) {
            (Some(BaseCiphertext::Present { d, .. }), Some(diff)) => Ok(d.dot(diff)?),
            _ => Ok(rng.gen()),
        }
    }
}

/// Applies `Z` to register A of every slot key, which flips every bit the
/// sender encrypts.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseTamper;

impl<S: Qpke<PublicKey = Vec<QuantumPublicKey>>> Adversary<S> for PhaseTamper {
    fn name(&self) -> String {
        "phase-tamper".into()
    }

    fn tamper(&mut self, _: &S, _: &S::VerKey, copies: Vec<S::PublicKey>, _: &mut Oracles<'_, S>, _: &mut DetRng) -> Result<Tampered<S::PublicKey>> {
        let keys = first(copies)?
            .into_iter()
            .map(|k| {
                Ok(QuantumPublicKey {
                    r: k.r,
                    state: k.state.apply_z_power(REG_A, true)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Tampered::new(keys, "Z on A of every slot"))
    }

    fn guess(&mut self, _: &S, _: &S::Ciphertext, _: Option<bool>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<bool> {
        Ok(rng.gen())
    }
}

/// Measures `slots` randomly chosen slot keys, keeps the valid branch it
/// sees and pairs it with a garbage branch on the other value of A.
#[derive(Clone, Copy, Debug)]
pub struct GarbageBranch {
    pub slots: usize,
}

impl<S: Qpke<PublicKey = Vec<QuantumPublicKey>>> Adversary<S> for GarbageBranch {
    fn name(&self) -> String {
        format!("garbage-branch[{}]", self.slots)
    }

    fn tamper(&mut self, _: &S, _: &S::VerKey, copies: Vec<S::PublicKey>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<Tampered<S::PublicKey>> {
        let mut keys = first(copies)?;
        let n = self.slots.min(keys.len());
        let chosen = sample(rng, keys.len(), n).into_vec();
        for &i in &chosen {
            let k = &mut keys[i];
            let layout = k.state.layout().clone();
            let (a, st) = k.state.measure_computational(REG_A, rng)?;
            let (beta, _) = st.measure_computational(REG_B, rng)?;
            let valid = a.concat(&beta);
            let garbage = BitString::from_bits([!a.get(0)]).concat(&BitString::random(beta.len(), rng));
            k.state = two_branch(&valid, &garbage, layout)?;
        }
        let mut sorted = chosen;
        sorted.sort_unstable();
        Ok(Tampered::new(keys, format!("garbage branch in slots {sorted:?}")))
    }

    fn guess(&mut self, _: &S, _: &S::Ciphertext, _: Option<bool>, _: &mut Oracles<'_, S>, rng: &mut DetRng) -> Result<bool> {
        Ok(rng.gen())
    }
}

/// Against the CCA layer: forwards copy 0, keeps the token of copy 1, and
/// re-signs the challenge's inner ciphertext with it before querying the
/// decryption oracle.
#[derive(Debug, Default)]
pub struct Replay {
    token: Option<crate::primitives::TmacToken>,
}

impl Replay {
    pub fn new() -> Self {
        Replay { token: None }
    }
}

impl<T: Qpke> Adversary<Cca<T>> for Replay {
    fn name(&self) -> String {
        "replay".into()
    }

    fn tamper(
        &mut self,
        _: &Cca<T>,
        _: &T::VerKey,
        copies: Vec<<Cca<T> as Qpke>::PublicKey>,
        _: &mut Oracles<'_, Cca<T>>,
        _: &mut DetRng,
    ) -> Result<Tampered<<Cca<T> as Qpke>::PublicKey>> {
        let mut it = copies.into_iter();
        let (Some(fwd), Some(spare)) = (it.next(), it.next()) else {
            return Err(Error::Protocol("replay needs two key copies".into()));
        };
        self.token = Some(spare.token);
        Ok(Tampered::new(fwd, "forwarded copy 0, kept token of copy 1"))
    }

    fn guess(
        &mut self,
        scheme: &Cca<T>,
        ct: &CcaCiphertext<T::Ciphertext>,
        _: Option<bool>,
        oracles: &mut Oracles<'_, Cca<T>>,
        rng: &mut DetRng,
    ) -> Result<bool> {
        let mut token = self.token.take().ok_or_else(|| Error::Protocol("no spare token".into()))?;
        let replayed = CcaCiphertext {
            inner: ct.inner.clone(),
            tag: tmac_sign(&mut token, &wire_bits(&ct.inner), rng)?,
            sigma: ct.sigma.clone(),
        };
        match oracles.decrypt(&replayed)? {
            Some(m) => Ok(m == BitString::ones(scheme.msg_len())),
            None => Ok(rng.gen()),
        }
    }
}
