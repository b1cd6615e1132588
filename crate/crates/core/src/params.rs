//! Named parameter presets.
//!
//! `toy` keeps every suite fast; `demo` uses the larger hash and tree sizes.
//! Any field can be overridden after construction.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primitives::{SigParams, TmacParams};

/// Environment variable selecting the default preset.
pub const PROFILE_ENV: &str = "QPKE_PROFILE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileName {
    Toy,
    Demo,
}

impl FromStr for ProfileName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toy" => Ok(ProfileName::Toy),
            "demo" => Ok(ProfileName::Demo),
            other => Err(Error::Params(format!("unknown profile {other:?}"))),
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileName::Toy => "toy",
            ProfileName::Demo => "demo",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    pub name: ProfileName,
    /// Signature scheme behind the quantum public keys.
    pub sig: SigParams,
    /// Randomizer length `u`.
    pub u: usize,
    /// Symmetric security parameter `λ` (PRF and SKE keys).
    pub lambda: usize,
    /// Cut-and-choose repetition `λ_r`; a CVA key has `4λ_r` components.
    pub lambda_r: usize,
    /// One-time signatures used for binding (1CCA, CCA) and detection.
    pub binding: SigParams,
    pub tmac: TmacParams,
    /// Pure-variant randomizer and tag lengths.
    pub pure_u: usize,
    pub pure_v: usize,
    /// Public-key copies handed to adversaries.
    pub copies: usize,
}

impl Profile {
    pub fn toy() -> Self {
        Profile {
            name: ProfileName::Toy,
            sig: SigParams::new(16, 16).expect("static"),
            u: 16,
            lambda: 128,
            lambda_r: 8,
            binding: SigParams::new(32, 0).expect("static"),
            tmac: TmacParams::new(8, 16).expect("static"),
            pure_u: 4,
            pure_v: 32,
            copies: 4,
        }
    }

    pub fn demo() -> Self {
        Profile {
            name: ProfileName::Demo,
            sig: SigParams::new(128, 24).expect("static"),
            u: 64,
            lambda: 128,
            lambda_r: 8,
            binding: SigParams::new(128, 0).expect("static"),
            tmac: TmacParams::new(16, 16).expect("static"),
            pure_u: 4,
            pure_v: 32,
            copies: 4,
        }
    }

    pub fn named(name: ProfileName) -> Self {
        match name {
            ProfileName::Toy => Self::toy(),
            ProfileName::Demo => Self::demo(),
        }
    }

    /// Preset named by `QPKE_PROFILE`, `toy` when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PROFILE_ENV) {
            Ok(v) => Ok(Self::named(v.parse()?)),
            Err(_) => Ok(Self::toy()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Params(m));
        if self.u == 0 || self.u % 8 != 0 {
            return bad(format!("u = {} must be a positive multiple of 8", self.u));
        }
        if self.lambda == 0 || self.lambda_r == 0 {
            return bad("λ and λ_r must be positive".into());
        }
        if self.pure_u == 0 || self.pure_u > 8 {
            return bad(format!("pure-variant u = {} outside 1..=8", self.pure_u));
        }
        if self.pure_v == 0 {
            return bad("pure-variant v must be positive".into());
        }
        SigParams::new(self.sig.hash_bits, self.sig.depth)?;
        SigParams::new(self.binding.hash_bits, self.binding.depth)?;
        Ok(())
    }
}
