//! `qpke demo`.

use std::io::Write;

use clap::{Subcommand, ValueEnum};
use serde::Serialize;

use super::{CmdResult, Failure, Layer, RunConfig, EXIT_OK};
use crate::base::BaseParams;
use crate::games::demos::{bz_factor_check, bz_key_circuit, extractor_demo, hadamard_stats};
use crate::games::tmac_forge::{double_sign_trials, ForgeStrategy};
use crate::pure::{cannot_find_both_trial, FindBothStrategy};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FindBoth {
    MeasureAll,
    BasisSplit,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Forge {
    MeasureOneBasis,
    ReuseOutcomes,
    SplitBlock,
    Breidbart,
    All,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// Extract both signatures from a distinguisher of advantage Δ.
    Extractor {
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Compare output probabilities with and without a k-outcome measurement.
    Bz {
        /// 2 or 4.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Parity law and distribution of Hadamard-basis outcomes.
    HadamardStats {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Try to learn both tags of one `r` from m copies of the pure key.
    CannotFindBoth {
        #[arg(long, value_enum, default_value = "basis-split")]
        strategy: FindBoth,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Double-sign attempts against one tokenized-MAC token.
    TmacForge {
        #[arg(long, value_enum, default_value = "all")]
        strategy: Forge,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

#[derive(Serialize)]
struct FindBothLine {
    strategy: &'static str,
    copies: usize,
    u: usize,
    v: usize,
    trials: usize,
    successes: usize,
    rate: f64,
    bound: f64,
    bound_is_vacuous: bool,
}

fn line<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

pub(super) fn run(cfg: &RunConfig, cmd: DemoCommand, out: &mut dyn Write) -> CmdResult {
    let p = cfg.profile_for(Layer::Base)?;
    let params = BaseParams { sig: p.sig, u: p.u };
    match cmd {
        DemoCommand::Extractor { delta, trials } => line(out, &extractor_demo(params, delta, trials, cfg.seed)?)?,
        DemoCommand::Bz { k, trials } => {
            let k_bits = match k {
                2 => 1,
                4 => 2,
                _ => return Err(Failure::usage("--k must be 2 or 4")),
            };
            let circuit = bz_key_circuit(params, k_bits, cfg.seed)?;
            line(out, &bz_factor_check(&circuit, trials, cfg.seed)?)?
        }
        DemoCommand::HadamardStats { samples } => line(out, &hadamard_stats(params, samples, cfg.seed)?)?,
        DemoCommand::CannotFindBoth { strategy, trials } => {
            let m = cfg.overrides.m.unwrap_or(2);
            let u = cfg.overrides.u.unwrap_or(p.pure_u);
            let v = cfg.overrides.v.unwrap_or(8);
            let s = match strategy {
                FindBoth::MeasureAll => FindBothStrategy::MeasureAll,
                FindBoth::BasisSplit => FindBothStrategy::BasisSplit,
            };
            let rep = cannot_find_both_trial(m, s, u, v, trials, &mut cfg.rng("cannot-find-both"))?;
            line(
                out,
                &FindBothLine {
                    strategy: match strategy {
                        FindBoth::MeasureAll => "measure-all",
                        FindBoth::BasisSplit => "basis-split",
                    },
                    copies: rep.copies,
                    u: rep.u,
                    v: rep.v,
                    trials: rep.trials,
                    successes: rep.successes,
                    rate: rep.rate(),
                    bound: rep.bound,
                    bound_is_vacuous: rep.bound_is_vacuous(),
                },
            )?
        }
        DemoCommand::TmacForge { strategy, trials } => {
            let chosen: Vec<ForgeStrategy> = match strategy {
                Forge::MeasureOneBasis => vec![ForgeStrategy::MeasureOneBasis],
                Forge::ReuseOutcomes => vec![ForgeStrategy::ReuseOutcomes],
                Forge::SplitBlock => vec![ForgeStrategy::SplitBlock],
                Forge::Breidbart => vec![ForgeStrategy::Breidbart],
                Forge::All => ForgeStrategy::ALL.to_vec(),
            };
            for s in chosen {
                line(out, &double_sign_trials(p.tmac, s, trials, cfg.seed)?)?;
            }
        }
    }
    Ok(EXIT_OK)
}
