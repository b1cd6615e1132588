//! `qpke game`.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use super::keys::{base_scheme, pure_scheme};
use super::{CmdResult, Failure, Layer, RunConfig, EXIT_OK};
use crate::base::{BaseCiphertext, BaseParams, BaseScheme, QuantumPublicKey};
use crate::detect::DetectWrap;
use crate::error::{Error, Result};
use crate::games::hybrid::{run_hybrid, HonestHybrid, MeasureAndCopy, SecretHolder};
use crate::games::strawman::NoSigStrawman;
use crate::games::{
    run_game, run_recyclable_game, GameId, GameReport, GameSpec, GarbageBranch, HonestForwarder, KeySwap, KnownBranch,
    PhaseTamper, Replay,
};
use crate::primitives::SkeMode;
use crate::scheme::Qpke;
use crate::transforms::{cca_stack, cva_stack, onecca_stack, Cca, Recyclable};

#[derive(Debug, Args)]
pub struct GameArgs {
    /// cpa, cva, cca, 1cca, hybrid0..2, recyclable-qpk, recyclable-rk;
    /// the `ind-pkt-` prefix is optional.
    #[arg(long, default_value = "cpa")]
    pub game: String,
    /// base, nosig, cva, 1cca, cca, pure, detect, recyclable.
    #[arg(long, default_value = "base")]
    pub scheme: String,
    /// Adversary name, or `list`.
    #[arg(long, default_value = "honest")]
    pub adversary: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print only the summary line.
    #[arg(long = "summary-only")]
    pub summary_only: bool,
}

const ADVERSARIES: &[(&str, &str, &str)] = &[
    ("honest", "forwards copy 0 untouched, guesses at random", "every scheme and game"),
    ("keyswap", "substitutes a key from its own secret key and decrypts with it", "cpa/cva/cca/1cca, recyclable"),
    ("known-branch", "replaces each slot key by a branch it knows the signature for", "base, nosig"),
    ("phase-tamper", "applies Z to register A of every slot key", "base, nosig, detect"),
    ("garbage-branch", "pairs one measured branch with a garbage branch in one slot", "base, nosig, detect"),
    ("replay", "re-signs the challenge's inner ciphertext with a second token", "cca scheme, cca/1cca games"),
    ("measure-and-copy", "measures spare copies and reuses their signatures", "hybrid0..2 on base"),
    ("secret-holder", "is handed the secret key and signs both messages", "hybrid0..2 on base"),
];

pub(super) fn list_adversaries(out: &mut dyn Write) -> std::io::Result<()> {
    for (name, what, applies) in ADVERSARIES {
        writeln!(out, "{name:<18} {what} [{applies}]")?;
    }
    Ok(())
}

fn mismatch(adv: &str, scheme: &str) -> Error {
    Error::Params(format!("adversary {adv:?} does not apply to scheme {scheme:?}"))
}

fn generic<S: Qpke>(s: &S, spec: &GameSpec, adv: &str) -> Option<Result<GameReport>> {
    match adv {
        "honest" => Some(run_game(s, spec, &mut HonestForwarder)),
        "keyswap" => Some(run_game(s, spec, &mut KeySwap::<S::SecretKey>::new())),
        _ => None,
    }
}

fn keyed<S: Qpke<PublicKey = Vec<QuantumPublicKey>>>(s: &S, spec: &GameSpec, adv: &str) -> Option<Result<GameReport>> {
    match adv {
        "phase-tamper" => Some(run_game(s, spec, &mut PhaseTamper)),
        "garbage-branch" => Some(run_game(s, spec, &mut GarbageBranch { slots: 1 })),
        _ => generic(s, spec, adv),
    }
}

fn base_like<S>(s: &S, spec: &GameSpec, adv: &str) -> Option<Result<GameReport>>
where
    S: Qpke<PublicKey = Vec<QuantumPublicKey>, Ciphertext = Vec<BaseCiphertext>>,
{
    match adv {
        "known-branch" => Some(run_game(s, spec, &mut KnownBranch::new())),
        _ => keyed(s, spec, adv),
    }
}

fn cca<T: Qpke>(s: &Cca<T>, spec: &GameSpec, adv: &str) -> Option<Result<GameReport>> {
    match adv {
        "replay" => Some(run_game(s, spec, &mut Replay::new())),
        _ => generic(s, spec, adv),
    }
}

fn report(cfg: &RunConfig, args: &GameArgs) -> Result<GameReport> {
    let game: GameId = args.game.parse()?;
    let layer = match args.scheme.as_str() {
        "pure" => Layer::Pure,
        _ => Layer::Base,
    };
    let p = cfg.profile_for(layer)?;
    let spec = GameSpec::new(game, p.copies, args.trials, cfg.seed);
    let (scheme, adv) = (args.scheme.as_str(), args.adversary.as_str());
    let params = BaseParams { sig: p.sig, u: p.u };

    if game.is_hybrid() {
        if scheme != "base" {
            return Err(Error::Params(format!("{game} runs on the base scheme, not {scheme:?}")));
        }
        return match adv {
            "honest" => run_hybrid(params, &spec, &mut HonestHybrid),
            "measure-and-copy" => run_hybrid(params, &spec, &mut MeasureAndCopy::default()),
            "secret-holder" => run_hybrid(params, &spec, &mut SecretHolder::default()),
            _ => Err(mismatch(adv, scheme)),
        };
    }
    if game.is_recyclable() != (scheme == "recyclable") {
        return Err(Error::Params(format!("game {game} and scheme {scheme:?} do not go together")));
    }
    let ell = cfg.ell;
    let found = match scheme {
        "base" => base_like(&base_scheme(&p, ell), &spec, adv),
        "nosig" => base_like(&NoSigStrawman::new(params, ell), &spec, adv),
        "cva" => generic(&cva_stack(&p, ell), &spec, adv),
        "1cca" => generic(&onecca_stack(&p, ell), &spec, adv),
        "cca" => cca(&cca_stack(&p, ell), &spec, adv),
        "pure" => generic(&pure_scheme(&p, ell)?, &spec, adv),
        "detect" => {
            let inner = BaseScheme::new(params, ell + p.binding.sig_len());
            keyed(&DetectWrap::new(inner, p.binding)?, &spec, adv)
        }
        "recyclable" => {
            let rec = Recyclable::new(BaseScheme::new(params, p.lambda), SkeMode::Cca, ell);
            match adv {
                "honest" => Some(run_recyclable_game(&rec, &spec, &mut HonestForwarder)),
                "keyswap" => Some(run_recyclable_game(&rec, &spec, &mut KeySwap::new())),
                _ => None,
            }
        }
        other => return Err(Error::Params(format!("unknown scheme {other:?}"))),
    };
    found.unwrap_or_else(|| Err(mismatch(adv, scheme)))
}

pub(super) fn run(cfg: &RunConfig, args: &GameArgs, out: &mut dyn Write) -> CmdResult {
    let rep = report(cfg, args)?;
    let mut buf = Vec::new();
    if args.summary_only {
        serde_json::to_writer(&mut buf, &rep.summary)?;
        buf.push(b'\n');
    } else {
        rep.write_jsonl(&mut buf)?;
    }
    match &args.out {
        Some(path) => {
            std::fs::write(path, &buf).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            serde_json::to_writer(&mut *out, &rep.summary)?;
            writeln!(out)?;
        }
        None => out.write_all(&buf)?,
    }
    Ok(EXIT_OK)
}
