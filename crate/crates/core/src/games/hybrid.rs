//! The single-bit base-scheme hybrids.
//!
//! Hybrid 0 is the tampering CPA game with an adversary-held register C.
//! Hybrid 1 skips the Hadamard measurement and hands `(A, B, C)` back.
//! Hybrid 2 asks for both signatures `(Sign(k,0‖r), Sign(k,1‖r))` instead of
//! a guess.

use qsim::{BitString, DetRng, SparseState};
use rand::Rng;

use super::{GameId, GameReport, GameSpec, Tampered, TrialRecord};
use crate::base::{base_pkgen, base_skgen, enc_check, enc_finish, BaseCiphertext, BaseParams, BaseSecretKey, Checked, QuantumPublicKey, REG_A, REG_B};
use crate::error::{Error, Result};
use crate::primitives::VerifyingKey;
use crate::scheme::draw_seed;

pub trait HybridAdversary {
    fn name(&self) -> String;

    /// Sanity-ceiling hook: called with the real secret key before anything
    /// else. Honest adversaries ignore it.
    fn peek_secret(&mut self, _sk: &BaseSecretKey) {}

    /// Returns the key `(r, state over A, B and optionally C)`.
    fn tamper(&mut self, params: &BaseParams, vk: &VerifyingKey, copies: Vec<QuantumPublicKey>, rng: &mut DetRng) -> Result<Tampered<QuantumPublicKey>>;

    /// Hybrid 0: the ciphertext and whatever registers the adversary kept.
    fn guess_ct(&mut self, _ct: &BaseCiphertext, _kept: Option<SparseState>, rng: &mut DetRng) -> Result<bool> {
        Ok(rng.gen())
    }

    /// Hybrid 1: `r` and the unmeasured state.
    fn guess_state(&mut self, _r: &BitString, _state: SparseState, rng: &mut DetRng) -> Result<bool> {
        Ok(rng.gen())
    }

    /// Hybrid 2.
    fn output_pair(&mut self, r: &BitString, state: SparseState, rng: &mut DetRng) -> Result<(BitString, BitString)>;
}

fn first(copies: Vec<QuantumPublicKey>) -> Result<QuantumPublicKey> {
    copies
        .into_iter()
        .next()
        .ok_or_else(|| Error::Protocol("adversary needs at least one key copy".into()))
}

/// Measures `(A, B)` in the computational basis: one genuine signature and
/// a random guess for the other.
fn measure_and_guess(state: SparseState, rng: &mut DetRng) -> Result<(BitString, BitString)> {
    let (a, st) = state.measure_computational(REG_A, rng)?;
    let (sig, _) = st.measure_computational(REG_B, rng)?;
    let other = BitString::random(sig.len(), rng);
    Ok(if a.get(0) { (other, sig) } else { (sig, other) })
}

/// Forwards copy 0; in Hybrid 2 measures and guesses the missing signature.
#[derive(Clone, Copy, Debug, Default)]
pub struct HonestHybrid;

impl HybridAdversary for HonestHybrid {
    fn name(&self) -> String {
        "honest".into()
    }

    fn tamper(&mut self, _: &BaseParams, _: &VerifyingKey, copies: Vec<QuantumPublicKey>, _: &mut DetRng) -> Result<Tampered<QuantumPublicKey>> {
        Ok(Tampered::new(first(copies)?, "forwarded copy 0"))
    }

    fn output_pair(&mut self, _: &BitString, state: SparseState, rng: &mut DetRng) -> Result<(BitString, BitString)> {
        measure_and_guess(state, rng)
    }
}

/// Measures every copy, forwards the copy whose `r` it will attack, and in
/// Hybrid 2 reuses any signature seen for that `r`.
#[derive(Clone, Debug, Default)]
pub struct MeasureAndCopy {
    seen: Vec<(BitString, bool, BitString)>,
}

impl HybridAdversary for MeasureAndCopy {
    fn name(&self) -> String {
        "measure-and-copy".into()
    }

    fn tamper(&mut self, _: &BaseParams, _: &VerifyingKey, copies: Vec<QuantumPublicKey>, rng: &mut DetRng) -> Result<Tampered<QuantumPublicKey>> {
        self.seen.clear();
        let mut it = copies.into_iter();
        let fwd = it.next().ok_or_else(|| Error::Protocol("adversary needs at least one key copy".into()))?;
        for k in it {
            let (a, st) = k.state.measure_computational(REG_A, rng)?;
            let (sig, _) = st.measure_computational(REG_B, rng)?;
            self.seen.push((k.r, a.get(0), sig));
        }
        Ok(Tampered::new(fwd, format!("forwarded copy 0, measured {}", self.seen.len())))
    }

    fn output_pair(&mut self, r: &BitString, state: SparseState, rng: &mut DetRng) -> Result<(BitString, BitString)> {
        let (mut s0, mut s1) = measure_and_guess(state, rng)?;
        for (sr, b, sig) in &self.seen {
            if sr == r {
                if *b {
                    s1 = sig.clone();
                } else {
                    s0 = sig.clone();
                }
            }
        }
        Ok((s0, s1))
    }
}

/// Handed the secret key; signs both messages itself.
#[derive(Clone, Debug, Default)]
pub struct SecretHolder {
    sk: Option<BaseSecretKey>,
}

impl HybridAdversary for SecretHolder {
    fn name(&self) -> String {
        "secret-holder".into()
    }

    fn peek_secret(&mut self, sk: &BaseSecretKey) {
        self.sk = Some(sk.clone());
    }

    fn tamper(&mut self, _: &BaseParams, _: &VerifyingKey, copies: Vec<QuantumPublicKey>, _: &mut DetRng) -> Result<Tampered<QuantumPublicKey>> {
        Ok(Tampered::new(first(copies)?, "forwarded copy 0"))
    }

    fn output_pair(&mut self, r: &BitString, _: SparseState, _: &mut DetRng) -> Result<(BitString, BitString)> {
        let sk = self.sk.as_ref().ok_or_else(|| Error::Protocol("no key was handed over".into()))?;
        Ok((sk.signature(false, r), sk.signature(true, r)))
    }
}

/// Runs Hybrid 0, 1 or 2 on the single-bit base scheme.
pub fn run_hybrid<A: HybridAdversary + ?Sized>(params: BaseParams, spec: &GameSpec, adv: &mut A) -> Result<GameReport> {
    if !spec.game.is_hybrid() {
        return Err(Error::Params(format!("{} is not a hybrid", spec.game)));
    }
    let scheme = format!("base[u={}]", params.u);
    let mut records = Vec::with_capacity(spec.trials);
    for t in 0..spec.trials {
        let mut rng = spec.trial_rng(t);
        let mut steps = vec!["gen"];
        let (sk, vk) = base_skgen(params, &draw_seed(&mut rng));
        adv.peek_secret(&sk);
        steps.push("pkgen");
        let copies = (0..spec.copies).map(|_| base_pkgen(&sk, &mut rng)).collect();
        let mut note = String::new();
        let mut b = false;
        let mut guess = None;
        let mut bottom = false;
        let outcome = (|| -> Result<bool> {
            steps.push("tamper");
            let tampered = adv.tamper(&params, &vk, copies, &mut rng)?;
            note = tampered.note;
            steps.push("check");
            let (r, state) = match enc_check(&params, &vk, tampered.pk, &mut rng)? {
                Checked::Rejected => {
                    bottom = true;
                    if spec.game == GameId::Hybrid2 {
                        return Ok(false);
                    }
                    b = rng.gen();
                    let g = adv.guess_ct(&BaseCiphertext::Bottom, None, &mut rng)?;
                    guess = Some(g);
                    return Ok(g == b);
                }
                Checked::Accepted { r, state } => (r, state),
            };
            steps.push("phase");
            b = rng.gen();
            match spec.game {
                GameId::Hybrid0 => {
                    steps.push("hadamard");
                    let (ct, rest) = enc_finish(r, state, b, &mut rng)?;
                    let kept = (rest.layout().registers().count() > 0).then_some(rest);
                    steps.push("guess");
                    let g = adv.guess_ct(&ct, kept, &mut rng)?;
                    guess = Some(g);
                    Ok(g == b)
                }
                GameId::Hybrid1 => {
                    let phased = state.apply_z_power(REG_A, b)?;
                    steps.push("guess");
                    let g = adv.guess_state(&r, phased, &mut rng)?;
                    guess = Some(g);
                    Ok(g == b)
                }
                _ => {
                    let phased = state.apply_z_power(REG_A, b)?;
                    steps.push("pair");
                    let (m0, m1) = adv.output_pair(&r, phased, &mut rng)?;
                    Ok(m0 == sk.signature(false, &r) && m1 == sk.signature(true, &r))
                }
            }
        })();
        let (win, aborted) = match outcome {
            Ok(w) => (w, None),
            Err(e) => (false, Some(e.to_string())),
        };
        records.push(TrialRecord {
            kind: "trial",
            game: spec.game,
            scheme: scheme.clone(),
            adversary: adv.name(),
            trial: t,
            seed: spec.seed,
            steps,
            tamper: note,
            b,
            guess,
            bottom,
            cv: None,
            queries: Vec::new(),
            win,
            aborted,
        });
    }
    Ok(GameReport::from_trials(spec, scheme, adv.name(), records))
}
