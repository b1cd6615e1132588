//! Key and ciphertext files.
//!
//! Every file starts with a four-byte magic, then the layer byte and the
//! parameter block, all in the length-prefixed little-endian encoding of
//! [`wire`](crate::wire):
//!
//! ```text
//! .qsk  "QSK1" layer config  bytes(seed[32])
//! .qpk  "QPK1" layer config  bytes(vk) kind
//!         kind 0: u32 n, n × (bits(r), bytes(state dump))
//!         kind 1: bytes(seed[32]) u64(pkgen seed)
//! .qct  "QCT1" layer config  bytes(ciphertext)
//! ```
//!
//! The base and pure layers store their key states as text dumps. The
//! composed layers hold tokens and nested keys that have no flat dump; their
//! `.qpk` is a regeneration recipe and so carries the key seed.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{Profile, ProfileName};
use crate::primitives::{SigParams, TmacParams};
use crate::wire::{Reader, Writer};

use super::Layer;

pub const MAGIC_SK: &[u8; 4] = b"QSK1";
pub const MAGIC_PK: &[u8; 4] = b"QPK1";
pub const MAGIC_CT: &[u8; 4] = b"QCT1";

/// Layer and parameters shared by every file of one key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FileConfig {
    pub layer: Layer,
    pub profile: Profile,
    pub ell: usize,
}

impl FileConfig {
    fn write(&self, w: &mut Writer) {
        w.u8(self.layer as u8);
        let p = &self.profile;
        w.u8(match p.name {
            ProfileName::Toy => 0,
            ProfileName::Demo => 1,
        });
        for v in [
            p.sig.hash_bits,
            p.sig.depth,
            p.u,
            p.lambda,
            p.lambda_r,
            p.binding.hash_bits,
            p.binding.depth,
            p.tmac.hash_bits,
            p.tmac.block_qubits,
            p.pure_u,
            p.pure_v,
            p.copies,
            self.ell,
        ] {
            w.u32(v as u32);
        }
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let layer = Layer::from_byte(r.u8()?)?;
        let name = match r.u8()? {
            0 => ProfileName::Toy,
            1 => ProfileName::Demo,
            b => return Err(Error::Wire(format!("unknown profile byte {b}"))),
        };
        let mut next = || r.u32().map(|v| v as usize);
        let sig = SigParams::new(next()?, next()?)?;
        let (u, lambda, lambda_r) = (next()?, next()?, next()?);
        let binding = SigParams::new(next()?, next()?)?;
        let tmac = TmacParams::new(next()?, next()?)?;
        let profile = Profile {
            name,
            sig,
            u,
            lambda,
            lambda_r,
            binding,
            tmac,
            pure_u: next()?,
            pure_v: next()?,
            copies: next()?,
        };
        let ell = next()?;
        profile.validate()?;
        Ok(FileConfig { layer, profile, ell })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKeyFile {
    pub config: FileConfig,
    pub seed: [u8; 32],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSlot {
    /// Classical tag `r`; empty for the pure layer, whose `r` is a register.
    pub r: qsim::BitString,
    pub dump: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PkBody {
    States(Vec<StateSlot>),
    Recipe { seed: [u8; 32], pk_seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKeyFile {
    pub config: FileConfig,
    pub vk: Vec<u8>,
    pub body: PkBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiphertextFile {
    pub config: FileConfig,
    pub ct: Vec<u8>,
}

fn header(magic: &[u8; 4], config: &FileConfig) -> Writer {
    let mut w = Writer::new();
    for &b in magic {
        w.u8(b);
    }
    config.write(&mut w);
    w
}

fn open<'a>(buf: &'a [u8], magic: &[u8; 4]) -> Result<(Reader<'a>, FileConfig)> {
    let mut r = Reader::new(buf);
    let mut got = [0u8; 4];
    for b in &mut got {
        *b = r.u8()?;
    }
    if &got != magic {
        return Err(Error::Wire(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&got),
            String::from_utf8_lossy(magic)
        )));
    }
    let config = FileConfig::read(&mut r)?;
    Ok((r, config))
}

fn done(r: &Reader<'_>) -> Result<()> {
    if r.is_done() {
        Ok(())
    } else {
        Err(Error::Wire("trailing bytes".into()))
    }
}

fn seed32(bytes: Vec<u8>) -> Result<[u8; 32]> {
    bytes
        .try_into()
        .map_err(|b: Vec<u8>| Error::Wire(format!("seed has {} bytes, expected 32", b.len())))
}

impl SecretKeyFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = header(MAGIC_SK, &self.config);
        w.bytes(&self.seed);
        w.finish()
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let (mut r, config) = open(buf, MAGIC_SK)?;
        let seed = seed32(r.bytes()?)?;
        done(&r)?;
        Ok(SecretKeyFile { config, seed })
    }
}

impl PublicKeyFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = header(MAGIC_PK, &self.config);
        w.bytes(&self.vk);
        match &self.body {
            PkBody::States(slots) => {
                w.u8(0).u32(slots.len() as u32);
                for s in slots {
                    w.bits(&s.r).bytes(s.dump.as_bytes());
                }
            }
            PkBody::Recipe { seed, pk_seed } => {
                w.u8(1).bytes(seed).u64(*pk_seed);
            }
        }
        w.finish()
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let (mut r, config) = open(buf, MAGIC_PK)?;
        let vk = r.bytes()?;
        let body = match r.u8()? {
            0 => {
                let n = r.u32()? as usize;
                let slots = (0..n)
                    .map(|_| {
                        let bits = r.bits()?;
                        let dump = String::from_utf8(r.bytes()?).map_err(|e| Error::Wire(e.to_string()))?;
                        Ok(StateSlot { r: bits, dump })
                    })
                    .collect::<Result<_>>()?;
                PkBody::States(slots)
            }
            1 => PkBody::Recipe {
                seed: seed32(r.bytes()?)?,
                pk_seed: r.u64()?,
            },
            k => return Err(Error::Wire(format!("unknown public-key body kind {k}"))),
        };
        done(&r)?;
        Ok(PublicKeyFile { config, vk, body })
    }
}

impl CiphertextFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = header(MAGIC_CT, &self.config);
        w.bytes(&self.ct);
        w.finish()
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self> {
        let (mut r, config) = open(buf, MAGIC_CT)?;
        let ct = r.bytes()?;
        done(&r)?;
        Ok(CiphertextFile { config, ct })
    }
}

pub(super) fn read_file(path: &Path) -> std::result::Result<Vec<u8>, super::Failure> {
    std::fs::read(path).map_err(|e| super::Failure::usage(format!("cannot read {}: {e}", path.display())))
}

pub(super) fn write_file(path: &Path, bytes: &[u8]) -> std::result::Result<(), super::Failure> {
    std::fs::write(path, bytes).map_err(|e| super::Failure::usage(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use qsim::BitString;

    fn config(layer: Layer) -> FileConfig {
        FileConfig {
            layer,
            profile: Profile::toy(),
            ell: 3,
        }
    }

    #[test]
    fn public_key_bodies_round_trip() {
        let states = PublicKeyFile {
            config: config(Layer::Base),
            vk: vec![1, 2, 3],
            body: PkBody::States(vec![StateSlot {
                r: BitString::from_index(5, 16),
                dump: "3fe6a09e667f3bcd 0000000000000000 0101\n".into(),
            }]),
        };
        assert_eq!(PublicKeyFile::from_bytes(&states.to_bytes()).unwrap(), states);
        let recipe = PublicKeyFile {
            config: config(Layer::Cca),
            vk: vec![],
            body: PkBody::Recipe { seed: [7; 32], pk_seed: 99 },
        };
        assert_eq!(PublicKeyFile::from_bytes(&recipe.to_bytes()).unwrap(), recipe);
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let sk = SecretKeyFile {
            config: config(Layer::Pure),
            seed: [1; 32],
        };
        let bytes = sk.to_bytes();
        assert!(CiphertextFile::from_bytes(&bytes).is_err());
        assert!(SecretKeyFile::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    proptest! {
        #[test]
        fn secret_and_ciphertext_files_round_trip(seed in any::<[u8; 32]>(), ct in proptest::collection::vec(any::<u8>(), 0..64), ell in 1usize..40) {
            let mut c = config(Layer::OneCca);
            c.ell = ell;
            let sk = SecretKeyFile { config: c, seed };
            prop_assert_eq!(SecretKeyFile::from_bytes(&sk.to_bytes()).unwrap(), sk);
            let f = CiphertextFile { config: c, ct };
            prop_assert_eq!(CiphertextFile::from_bytes(&f.to_bytes()).unwrap(), f);
        }
    }
}
