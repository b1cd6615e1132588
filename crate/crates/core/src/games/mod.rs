//! Security experiments with pluggable adversaries.
//!
//! A game runs independent trials, each on its own stream
//! `DetRng::from_seed(seed).split_index(trial)`, so a report is a pure
//! function of the scheme, the adversary and the seed. Reports stream as
//! JSON lines: one `trial` record per trial, then a `summary` record.

mod adversaries;
pub mod demos;
pub mod detectability;
pub mod hybrid;
mod oracle;
pub mod stats;
pub mod strawman;
pub mod tmac_forge;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use qsim::{BitString, DetRng};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::Qpke;
use crate::transforms::Recyclable;
use crate::wire::Wire;

pub use adversaries::{GarbageBranch, HonestForwarder, KeySwap, KnownBranch, PhaseTamper, Replay};
pub use oracle::{DecOracle, Oracles, QueryRecord};
pub use stats::{wilson, Rate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameId {
    Cpa,
    Cva,
    Cca,
    #[serde(rename = "1cca")]
    OneCca,
    Hybrid0,
    Hybrid1,
    Hybrid2,
    RecyclableQpk,
    RecyclableRk,
}

impl GameId {
    pub const ALL: [GameId; 9] = [
        GameId::Cpa,
        GameId::Cva,
        GameId::Cca,
        GameId::OneCca,
        GameId::Hybrid0,
        GameId::Hybrid1,
        GameId::Hybrid2,
        GameId::RecyclableQpk,
        GameId::RecyclableRk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Cpa => "cpa",
            GameId::Cva => "cva",
            GameId::Cca => "cca",
            GameId::OneCca => "1cca",
            GameId::Hybrid0 => "hybrid0",
            GameId::Hybrid1 => "hybrid1",
            GameId::Hybrid2 => "hybrid2",
            GameId::RecyclableQpk => "recyclable-qpk",
            GameId::RecyclableRk => "recyclable-rk",
        }
    }

    /// Whether the adversary learns `cv`.
    pub fn gives_cv(self) -> bool {
        matches!(self, GameId::Cva | GameId::Cca | GameId::OneCca)
    }

    /// `None`: no decryption oracle. `Some(None)`: unlimited.
    pub fn dec_budget(self) -> Option<Option<usize>> {
        match self {
            GameId::Cca => Some(None),
            GameId::OneCca => Some(Some(1)),
            _ => None,
        }
    }

    pub fn is_hybrid(self) -> bool {
        matches!(self, GameId::Hybrid0 | GameId::Hybrid1 | GameId::Hybrid2)
    }

    pub fn is_recyclable(self) -> bool {
        matches!(self, GameId::RecyclableQpk | GameId::RecyclableRk)
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.strip_prefix("ind-pkt-").unwrap_or(s);
        GameId::ALL
            .into_iter()
            .find(|g| g.as_str() == key)
            .ok_or_else(|| Error::Params(format!("unknown game {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub game: GameId,
    /// Public-key copies handed to the adversary.
    pub copies: usize,
    pub trials: usize,
    pub seed: u64,
}

impl GameSpec {
    pub fn new(game: GameId, copies: usize, trials: usize, seed: u64) -> Self {
        GameSpec {
            game,
            copies,
            trials,
            seed,
        }
    }

    pub fn trial_rng(&self, trial: usize) -> DetRng {
        DetRng::from_seed(self.seed).split_index(trial as u64)
    }
}

/// The key the adversary hands back, with a free-form description.
#[derive(Debug)]
pub struct Tampered<P> {
    pub pk: P,
    pub note: String,
}

impl<P> Tampered<P> {
    pub fn new(pk: P, note: impl Into<String>) -> Self {
        Tampered { pk, note: note.into() }
    }
}

pub trait Adversary<S: Qpke> {
    fn name(&self) -> String;

    /// Receives `vk` and the key copies; returns the key to encrypt under.
    fn tamper(
        &mut self,
        scheme: &S,
        vk: &S::VerKey,
        copies: Vec<S::PublicKey>,
        oracles: &mut Oracles<'_, S>,
        rng: &mut DetRng,
    ) -> Result<Tampered<S::PublicKey>>;

    fn choose_messages(&mut self, scheme: &S, _rng: &mut DetRng) -> (BitString, BitString) {
        (BitString::zeros(scheme.msg_len()), BitString::ones(scheme.msg_len()))
    }

    /// Sees the first ciphertext of the recycled-key game.
    fn observe(&mut self, _scheme: &S, _ct: &S::Ciphertext, _oracles: &mut Oracles<'_, S>) -> Result<()> {
        Ok(())
    }

    /// Returns `true` for `msg₁`.
    fn guess(
        &mut self,
        scheme: &S,
        ct: &S::Ciphertext,
        cv: Option<bool>,
        oracles: &mut Oracles<'_, S>,
        rng: &mut DetRng,
    ) -> Result<bool>;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub kind: &'static str,
    pub game: GameId,
    pub scheme: String,
    pub adversary: String,
    pub trial: usize,
    pub seed: u64,
    pub steps: Vec<&'static str>,
    pub tamper: String,
    pub b: bool,
    pub guess: Option<bool>,
    /// The challenge ciphertext is ⊥ (key rejected during encryption).
    pub bottom: bool,
    pub cv: Option<bool>,
    pub queries: Vec<QueryRecord>,
    pub win: bool,
    pub aborted: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub kind: &'static str,
    pub game: GameId,
    pub scheme: String,
    pub adversary: String,
    pub seed: u64,
    pub copies: usize,
    pub wins: Rate,
    pub bottoms: usize,
    pub aborted: usize,
    pub queries: usize,
    pub oracle_bottoms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameReport {
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
}

impl GameReport {
    fn from_trials(spec: &GameSpec, scheme: String, adversary: String, trials: Vec<TrialRecord>) -> Self {
        let wins = trials.iter().filter(|t| t.win).count();
        let queries = trials.iter().map(|t| t.queries.len()).sum();
        let oracle_bottoms = trials
            .iter()
            .flat_map(|t| &t.queries)
            .filter(|q| q.oracle == "dec" && q.answer.is_none())
            .count();
        let summary = Summary {
            kind: "summary",
            game: spec.game,
            scheme,
            adversary,
            seed: spec.seed,
            copies: spec.copies,
            wins: Rate::new(wins, trials.len()),
            bottoms: trials.iter().filter(|t| t.bottom).count(),
            aborted: trials.iter().filter(|t| t.aborted.is_some()).count(),
            queries,
            oracle_bottoms,
        };
        GameReport { trials, summary }
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for t in &self.trials {
            serde_json::to_writer(&mut out, t)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut out, &self.summary)?;
        out.write_all(b"\n")
    }
}

/// State of one trial while it runs.
struct Trial {
    steps: Vec<&'static str>,
    tamper: String,
    b: bool,
    guess: Option<bool>,
    bottom: bool,
    cv: Option<bool>,
}

impl Trial {
    fn new() -> Self {
        Trial {
            steps: Vec::new(),
            tamper: String::new(),
            b: false,
            guess: None,
            bottom: false,
            cv: None,
        }
    }
}

fn check_messages(scheme: &impl Qpke, m0: &BitString, m1: &BitString) -> Result<()> {
    if m0.len() != scheme.msg_len() || m1.len() != scheme.msg_len() {
        return Err(Error::Protocol("challenge messages have the wrong length".into()));
    }
    Ok(())
}

/// Runs `cpa`, `cva`, `cca` or `1cca`.
pub fn run_game<S: Qpke, A: Adversary<S> + ?Sized>(scheme: &S, spec: &GameSpec, adv: &mut A) -> Result<GameReport> {
    if spec.game.is_hybrid() || spec.game.is_recyclable() {
        return Err(Error::Params(format!("{} needs its own runner", spec.game)));
    }
    let mut records = Vec::with_capacity(spec.trials);
    for t in 0..spec.trials {
        let mut rng = spec.trial_rng(t);
        let mut st = Trial::new();
        st.steps.push("skgen");
        let (sk, vk) = scheme.skgen(&mut rng);
        st.steps.push("pkgen");
        let copies = (0..spec.copies).map(|_| scheme.pkgen(&sk, &mut rng)).collect();
        let mut oracles = Oracles::new(spec.game.dec_budget().map(|budget| DecOracle::new(scheme, &sk, budget)));
        let outcome = (|| -> Result<bool> {
            st.steps.push("tamper");
            let tampered = adv.tamper(scheme, &vk, copies, &mut oracles, &mut rng)?;
            st.tamper = tampered.note;
            st.steps.push("choose");
            let (m0, m1) = adv.choose_messages(scheme, &mut rng);
            check_messages(scheme, &m0, &m1)?;
            st.b = rng.gen();
            st.steps.push("enc");
            let ct = scheme.enc(&vk, tampered.pk, if st.b { &m1 } else { &m0 }, &mut rng)?;
            st.bottom = scheme.is_bottom(&ct);
            if spec.game.gives_cv() {
                st.steps.push("cv");
                st.cv = Some(scheme.dec(&sk, &ct).is_some());
            }
            oracles.set_challenge(ct.to_wire());
            st.steps.push("guess");
            let g = adv.guess(scheme, &ct, st.cv, &mut oracles, &mut rng)?;
            st.guess = Some(g);
            Ok(g == st.b)
        })();
        records.push(finish(spec, scheme.name(), adv.name(), t, st, oracles.into_log(), outcome));
    }
    Ok(GameReport::from_trials(spec, scheme.name(), adv.name(), records))
}

/// Runs the recyclable games. In `recyclable-qpk` the challenge comes from
/// `Enc`; in `recyclable-rk` the adversary first sees `Enc(vk, pk', msg₀)`
/// and the challenge is `rEnc(rk, msg_b)`. Both expose `rEnc(rk, ·)`.
pub fn run_recyclable_game<S: Qpke, A: Adversary<Recyclable<S>> + ?Sized>(
    rec: &Recyclable<S>,
    spec: &GameSpec,
    adv: &mut A,
) -> Result<GameReport> {
    if !spec.game.is_recyclable() {
        return Err(Error::Params(format!("{} is not a recyclable game", spec.game)));
    }
    let mut records = Vec::with_capacity(spec.trials);
    for t in 0..spec.trials {
        let mut rng = spec.trial_rng(t);
        let mut st = Trial::new();
        st.steps.push("skgen");
        let (sk, vk) = rec.skgen(&mut rng);
        st.steps.push("pkgen");
        let copies = (0..spec.copies).map(|_| rec.pkgen(&sk, &mut rng)).collect();
        let mut log = Vec::new();
        let outcome = (|| -> Result<bool> {
            let mut none = Oracles::new(None);
            st.steps.push("tamper");
            let tampered = adv.tamper(rec, &vk, copies, &mut none, &mut rng)?;
            st.tamper = tampered.note;
            st.steps.push("choose");
            let (m0, m1) = adv.choose_messages(rec, &mut rng);
            check_messages(rec, &m0, &m1)?;
            st.b = rng.gen();
            let mb = if st.b { &m1 } else { &m0 };
            let (ct, mut rk) = if spec.game == GameId::RecyclableQpk {
                st.steps.push("enc");
                rec.rec_enc(&vk, tampered.pk, mb, &mut rng)?
            } else {
                st.steps.push("enc");
                let (first, mut rk) = rec.rec_enc(&vk, tampered.pk, &m0, &mut rng)?;
                {
                    let mut oracles = Oracles::with_renc(Box::new(|m: &BitString| rec.rec_renc(&mut rk, m)));
                    st.steps.push("observe");
                    adv.observe(rec, &first, &mut oracles)?;
                }
                st.steps.push("renc");
                let ct = rec.rec_renc(&mut rk, mb)?;
                (ct, rk)
            };
            st.bottom = rec.is_bottom(&ct);
            let mut oracles = Oracles::with_renc(Box::new(|m: &BitString| rec.rec_renc(&mut rk, m)));
            st.steps.push("guess");
            let g = adv.guess(rec, &ct, None, &mut oracles, &mut rng)?;
            log = oracles.into_log();
            st.guess = Some(g);
            Ok(g == st.b)
        })();
        records.push(finish(spec, rec.name(), adv.name(), t, st, log, outcome));
    }
    Ok(GameReport::from_trials(spec, rec.name(), adv.name(), records))
}

fn finish(spec: &GameSpec, scheme: String, adversary: String, trial: usize, st: Trial, queries: Vec<QueryRecord>, outcome: Result<bool>) -> TrialRecord {
    let (win, aborted) = match outcome {
        Ok(w) => (w, None),
        // aborts and malformed output count as losses
        Err(e) => (false, Some(e.to_string())),
    };
    TrialRecord {
        kind: "trial",
        game: spec.game,
        scheme,
        adversary,
        trial,
        seed: spec.seed,
        steps: st.steps,
        tamper: st.tamper,
        b: st.b,
        guess: st.guess,
        bottom: st.bottom,
        cv: st.cv,
        queries,
        win,
        aborted,
    }
}

#[cfg(test)]
mod tests;
