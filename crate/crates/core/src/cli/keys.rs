//! keygen, pkgen, enc, dec.

use std::io::Write;
use std::path::Path;

use qsim::{BitString, DetRng, SparseState};
use rand::RngCore;

use super::files::{read_file, write_file, CiphertextFile, FileConfig, PkBody, PublicKeyFile, SecretKeyFile, StateSlot};
use super::{CmdResult, Failure, Layer, RunConfig, EXIT_BOTTOM, EXIT_OK};
use crate::base::{BaseParams, BaseScheme, QuantumPublicKey};
use crate::error::{Error, Result};
use crate::params::Profile;
use crate::pure::{PureParams, PureScheme};
use crate::scheme::{draw_seed, Qpke};
use crate::transforms::{cca_stack, cva_stack, onecca_stack};
use crate::wire::Wire;

pub(super) fn base_scheme(p: &Profile, ell: usize) -> BaseScheme {
    BaseScheme::new(BaseParams { sig: p.sig, u: p.u }, ell)
}

pub(super) fn pure_scheme(p: &Profile, ell: usize) -> Result<PureScheme> {
    Ok(PureScheme {
        params: PureParams::new(p.sig, p.pure_u, p.pure_v, p.lambda)?,
        ell,
    })
}

/// Binds `$s` to the scheme for a file config and evaluates `$body`.
macro_rules! with_scheme {
    ($config:expr, |$s:ident| $body:expr) => {{
        let c: &FileConfig = $config;
        match c.layer {
            Layer::Base => {
                let $s = base_scheme(&c.profile, c.ell);
                $body
            }
            Layer::Cva => {
                let $s = cva_stack(&c.profile, c.ell);
                $body
            }
            Layer::OneCca => {
                let $s = onecca_stack(&c.profile, c.ell);
                $body
            }
            Layer::Cca => {
                let $s = cca_stack(&c.profile, c.ell);
                $body
            }
            Layer::Pure => {
                let $s = pure_scheme(&c.profile, c.ell)?;
                $body
            }
        }
    }};
}

fn keys_of<S: Qpke>(scheme: &S, seed: [u8; 32]) -> (S::SecretKey, S::VerKey) {
    scheme.skgen(&mut DetRng::from_key(seed))
}

pub(super) fn keygen(cfg: &RunConfig, layer: Layer, path: &Path, out: &mut dyn Write) -> CmdResult {
    let config = FileConfig {
        layer,
        profile: cfg.profile_for(layer)?,
        ell: cfg.ell,
    };
    // Build the scheme once so bad parameters fail here, not at pkgen.
    with_scheme!(&config, |s| {
        let _ = s.msg_len();
    });
    let file = SecretKeyFile {
        config,
        seed: draw_seed(&mut cfg.rng("keygen")),
    };
    write_file(path, &file.to_bytes())?;
    writeln!(out, "wrote {} ({:?}, ℓ = {})", path.display(), layer, config.ell)?;
    Ok(EXIT_OK)
}

fn dump_slots(slots: &[StateSlot]) -> String {
    let mut s = String::new();
    for (i, slot) in slots.iter().enumerate() {
        s.push_str(&format!("# slot {i} r={}\n", slot.r));
        s.push_str(&slot.dump);
    }
    s
}

pub(super) fn pkgen(
    cfg: &RunConfig,
    sk_path: &Path,
    path: &Path,
    layer: Option<Layer>,
    dump: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let sk = SecretKeyFile::from_bytes(&read_file(sk_path)?)?;
    let config = sk.config;
    if let Some(l) = layer {
        if l != config.layer {
            return Err(Failure::usage(format!("--layer {l:?} does not match the key's layer {:?}", config.layer)));
        }
    }
    let mut rng = cfg.rng("pkgen");
    let (vk, body) = match config.layer {
        Layer::Base => {
            let s = base_scheme(&config.profile, config.ell);
            let (k, vk) = keys_of(&s, sk.seed);
            let slots = s
                .pkgen(&k, &mut rng)
                .into_iter()
                .map(|pk| StateSlot {
                    r: pk.r,
                    dump: pk.state.dump_text(),
                })
                .collect();
            (vk.to_wire(), PkBody::States(slots))
        }
        Layer::Pure => {
            let s = pure_scheme(&config.profile, config.ell)?;
            let (k, vk) = keys_of(&s, sk.seed);
            let slots = s
                .pkgen(&k, &mut rng)
                .into_iter()
                .map(|st| StateSlot {
                    r: BitString::empty(),
                    dump: st.dump_text(),
                })
                .collect();
            (vk.to_wire(), PkBody::States(slots))
        }
        _ => {
            let vk = with_scheme!(&config, |s| keys_of(&s, sk.seed).1.to_wire());
            (
                vk,
                PkBody::Recipe {
                    seed: sk.seed,
                    pk_seed: rng.next_u64(),
                },
            )
        }
    };
    if let Some(d) = dump {
        match &body {
            PkBody::States(slots) => write_file(d, dump_slots(slots).as_bytes())?,
            PkBody::Recipe { .. } => {
                return Err(Failure::usage(format!(
                    "{:?} public keys are stored as a regeneration recipe and have no state dump",
                    config.layer
                )))
            }
        }
    }
    let file = PublicKeyFile { config, vk, body };
    write_file(path, &file.to_bytes())?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(EXIT_OK)
}

fn parse_states(layout: qsim::RegisterLayout, slots: &[StateSlot]) -> Result<Vec<SparseState>> {
    slots
        .iter()
        .map(|s| Ok(SparseState::parse_text(layout.clone(), &s.dump)?))
        .collect()
}

fn enc_with<S: Qpke>(scheme: &S, vk: &[u8], pk: S::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<(Vec<u8>, bool)> {
    let vk = S::VerKey::from_wire(vk)?;
    let ct = scheme.enc(&vk, pk, msg, rng)?;
    Ok((ct.to_wire(), scheme.is_bottom(&ct)))
}

fn enc_recipe<S: Qpke>(scheme: &S, vk: &[u8], seed: [u8; 32], pk_seed: u64, msg: &BitString, rng: &mut DetRng) -> Result<(Vec<u8>, bool)> {
    let (k, _) = keys_of(scheme, seed);
    let pk = scheme.pkgen(&k, &mut DetRng::from_seed(pk_seed));
    enc_with(scheme, vk, pk, msg, rng)
}

pub(super) fn enc(cfg: &RunConfig, pk_path: &Path, msg: &str, path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let pk = PublicKeyFile::from_bytes(&read_file(pk_path)?)?;
    let config = pk.config;
    let msg: BitString = msg
        .parse()
        .map_err(|e: qsim::QsimError| Failure::usage(format!("--msg: {e}")))?;
    let mut rng = cfg.rng("enc");
    let (ct, bottom) = match (&pk.body, config.layer) {
        (PkBody::States(slots), Layer::Base) => {
            let s = base_scheme(&config.profile, config.ell);
            let states = parse_states(s.params.key_layout(), slots)?;
            let keys = slots
                .iter()
                .zip(states)
                .map(|(slot, state)| QuantumPublicKey { r: slot.r.clone(), state })
                .collect();
            enc_with(&s, &pk.vk, keys, &msg, &mut rng)?
        }
        (PkBody::States(slots), Layer::Pure) => {
            let s = pure_scheme(&config.profile, config.ell)?;
            let states = parse_states(s.params.layout(), slots)?;
            enc_with(&s, &pk.vk, states, &msg, &mut rng)?
        }
        (PkBody::Recipe { seed, pk_seed }, l) if l != Layer::Base && l != Layer::Pure => {
            with_scheme!(&config, |s| enc_recipe(&s, &pk.vk, *seed, *pk_seed, &msg, &mut rng)?)
        }
        _ => return Err(Error::Wire(format!("public-key body does not fit layer {:?}", config.layer)).into()),
    };
    if bottom {
        writeln!(err, "public key rejected; ciphertext is ⊥")?;
    }
    write_file(path, &CiphertextFile { config, ct }.to_bytes())?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(EXIT_OK)
}

fn dec_with<S: Qpke>(scheme: &S, seed: [u8; 32], ct: &[u8]) -> Result<Option<BitString>> {
    let ct = S::Ciphertext::from_wire(ct)?;
    let (k, _) = keys_of(scheme, seed);
    if scheme.is_bottom(&ct) {
        return Ok(None);
    }
    Ok(scheme.dec(&k, &ct))
}

pub(super) fn dec(sk_path: &Path, ct_path: &Path, out: &mut dyn Write) -> CmdResult {
    let sk = SecretKeyFile::from_bytes(&read_file(sk_path)?)?;
    let ct = CiphertextFile::from_bytes(&read_file(ct_path)?)?;
    if sk.config != ct.config {
        return Err(Failure::usage("ciphertext and secret key were made with different parameters"));
    }
    let msg = with_scheme!(&sk.config, |s| dec_with(&s, sk.seed, &ct.ct)?);
    match msg {
        Some(m) => {
            writeln!(out, "{m}")?;
            Ok(EXIT_OK)
        }
        None => {
            writeln!(out, "⊥")?;
            Ok(EXIT_BOTTOM)
        }
    }
}
