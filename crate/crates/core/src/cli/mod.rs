//! The `qpke` command line: key lifecycle through files, games, and demos.
//!
//! Exit codes: 0 on success, 2 when decryption yields ⊥, 1 on usage errors
//! and missing or corrupt files.

mod demo;
pub mod files;
mod game;
mod keys;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsim::DetRng;

use crate::error::{Error, Result};
use crate::params::{Profile, ProfileName, PROFILE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BOTTOM: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[repr(u8)]
pub enum Layer {
    Base = 0,
    Cva = 1,
    #[value(name = "1cca")]
    OneCca = 2,
    Cca = 3,
    Pure = 4,
}

impl Layer {
    fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0 => Layer::Base,
            1 => Layer::Cva,
            2 => Layer::OneCca,
            3 => Layer::Cca,
            4 => Layer::Pure,
            _ => return Err(Error::Wire(format!("unknown layer byte {b}"))),
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "qpke", version, about = "Tamper-resilient quantum public-key encryption, simulated")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Parameter preset.
    #[arg(long, global = true, env = PROFILE_ENV, default_value = "toy", value_parser = parse_profile)]
    pub profile: ProfileName,
    /// Seed for all randomness; drawn from system entropy and printed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Hash output length of the key signature scheme.
    #[arg(long = "lambda-h", global = true)]
    pub lambda_h: Option<usize>,
    /// Randomizer length (pure variant: `u` of the appendix construction).
    #[arg(long, global = true)]
    pub u: Option<usize>,
    /// Pure-variant tag length.
    #[arg(long, global = true)]
    pub v: Option<usize>,
    /// Message length in bits.
    #[arg(long, global = true)]
    pub ell: Option<usize>,
    /// Cut-and-choose repetition.
    #[arg(long = "lambda-r", global = true)]
    pub lambda_r: Option<usize>,
    /// Public-key copies given to the adversary.
    #[arg(long, global = true)]
    pub m: Option<usize>,
}

fn parse_profile(s: &str) -> std::result::Result<ProfileName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a secret key file.
    Keygen {
        #[arg(long, value_enum, default_value = "base")]
        layer: Layer,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a public key file from a secret key file.
    Pkgen {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Must match the layer recorded in the secret key.
        #[arg(long, value_enum)]
        layer: Option<Layer>,
        /// Also write the key states as text.
        #[arg(long = "dump-state")]
        dump_state: Option<PathBuf>,
    },
    /// Encrypt a bit string under a public key file.
    Enc {
        #[arg(long)]
        pk: PathBuf,
        /// Message bits, e.g. `01101001`.
        #[arg(long)]
        msg: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file; exit code 2 on ⊥.
    Dec {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
    },
    /// Run a security game and print one JSON line per trial plus a summary.
    Game(game::GameArgs),
    /// Reproduce a finite-scale identity.
    #[command(subcommand)]
    Demo(demo::DemoCommand),
}

/// Message and exit code of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("json: {e}"))
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Resolved flags shared by every command.
pub struct RunConfig {
    pub profile: Profile,
    pub ell: usize,
    pub seed: u64,
    pub overrides: GlobalArgs,
}

impl RunConfig {
    fn resolve(global: GlobalArgs, err: &mut dyn Write) -> std::result::Result<Self, Failure> {
        let mut profile = Profile::named(global.profile);
        if let Some(h) = global.lambda_h {
            profile.sig.hash_bits = h;
        }
        if let Some(r) = global.lambda_r {
            profile.lambda_r = r;
        }
        if let Some(v) = global.v {
            profile.pure_v = v;
        }
        if let Some(m) = global.m {
            profile.copies = m;
        }
        let ell = global.ell.unwrap_or(8);
        if ell == 0 {
            return Err(Failure::usage("--ell must be positive"));
        }
        let seed = match global.seed {
            Some(s) => s,
            None => {
                let s: u64 = rand::random();
                writeln!(err, "seed: {s}")?;
                s
            }
        };
        Ok(RunConfig {
            profile,
            ell,
            seed,
            overrides: global,
        })
    }

    /// The profile with `--u` applied to the randomizer `layer` uses.
    fn profile_for(&self, layer: Layer) -> Result<Profile> {
        let mut p = self.profile;
        if let Some(u) = self.overrides.u {
            if layer == Layer::Pure {
                p.pure_u = u;
            } else {
                p.u = u;
            }
        }
        p.validate()?;
        Ok(p)
    }

    fn rng(&self, label: &str) -> DetRng {
        DetRng::from_seed(self.seed).split(label)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    // `--adversary list` needs no seed.
    if let Command::Game(g) = &cli.command {
        if g.adversary == "list" {
            game::list_adversaries(out)?;
            return Ok(EXIT_OK);
        }
    }
    let cfg = RunConfig::resolve(cli.global, err)?;
    match cli.command {
        Command::Keygen { layer, out: path } => keys::keygen(&cfg, layer, &path, out),
        Command::Pkgen {
            sk,
            out: path,
            layer,
            dump_state,
        } => keys::pkgen(&cfg, &sk, &path, layer, dump_state.as_deref(), out),
        Command::Enc { pk, msg, out: path } => keys::enc(&cfg, &pk, &msg, &path, out, err),
        Command::Dec { sk, ct } => keys::dec(&sk, &ct, out),
        Command::Game(g) => game::run(&cfg, &g, out),
        Command::Demo(d) => demo::run(&cfg, d, out),
    }
}
