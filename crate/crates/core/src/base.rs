//! The base construction: one signature key, public keys
//! `(r, (|0, Sign(k, 0‖r)⟩ + |1, Sign(k, 1‖r)⟩)/√2)` over registers `(A, B)`,
//! and classical ciphertexts `(r, d)`.
//!
//! Register D holds the coherent verification result, `⊤ = 1`, `⊥ = 0`.

use qsim::{BitString, Complex64, DetRng, RegisterLayout, SparseState};

use crate::error::{Error, Result};
use crate::primitives::{sig_gen, SigParams, SigningKey, VerifyingKey};
use crate::scheme::{check_arity, check_msg_len, draw_seed, Qpke};
use crate::wire::{Reader, Wire, Writer};

pub const REG_A: &str = "A";
pub const REG_B: &str = "B";
pub const REG_D: &str = "D";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseParams {
    pub sig: SigParams,
    pub u: usize,
}

impl BaseParams {
    pub fn sig_len(&self) -> usize {
        self.sig.sig_len()
    }

    /// Width of `d`, i.e. of registers `(A, B)`.
    pub fn d_len(&self) -> usize {
        1 + self.sig_len()
    }

    pub fn key_layout(&self) -> RegisterLayout {
        RegisterLayout::new(&[(REG_A, 1), (REG_B, self.sig_len())]).expect("static layout")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseSecretKey {
    params: BaseParams,
    k: SigningKey,
}

impl BaseSecretKey {
    pub fn params(&self) -> &BaseParams {
        &self.params
    }

    /// `Sign(k, b‖r)`.
    pub fn signature(&self, b: bool, r: &BitString) -> BitString {
        self.k.sign(&signed_message(b, r))
    }

    /// Signature on an arbitrary message under the same key.
    pub fn signature_of(&self, msg: &BitString) -> BitString {
        self.k.sign(msg)
    }

    /// Branch string `b ‖ Sign(k, b‖r)`.
    pub fn branch(&self, b: bool, r: &BitString) -> BitString {
        BitString::from_bits([b]).concat(&self.signature(b, r))
    }
}

pub fn signed_message(b: bool, r: &BitString) -> BitString {
    BitString::from_bits([b]).concat(r)
}

pub fn base_skgen(params: BaseParams, seed: &[u8]) -> (BaseSecretKey, VerifyingKey) {
    let kp = sig_gen(seed, params.sig);
    (BaseSecretKey { params, k: kp.sk }, kp.vk)
}

/// Classical tag `r` and the key state over `(A, B)`, possibly with further
/// registers an adversary keeps entangled with it.
#[derive(Debug)]
pub struct QuantumPublicKey {
    pub r: BitString,
    pub state: SparseState,
}

/// The honest key state for a given `r`.
pub fn honest_key_state(sk: &BaseSecretKey, r: &BitString) -> SparseState {
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    SparseState::superpose(
        sk.params.key_layout(),
        [(sk.branch(false, r), amp), (sk.branch(true, r), amp)],
    )
    .expect("two distinct branches")
}

pub fn base_pkgen(sk: &BaseSecretKey, rng: &mut DetRng) -> QuantumPublicKey {
    let r = BitString::random(sk.params.u, rng);
    let state = honest_key_state(sk, &r);
    QuantumPublicKey { r, state }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseCiphertext {
    Bottom,
    Present { r: BitString, d: BitString },
}

impl BaseCiphertext {
    pub fn is_bottom(&self) -> bool {
        matches!(self, BaseCiphertext::Bottom)
    }

    /// Fixed-width layout: tag byte, then `u/8` bytes of `r` and
    /// `⌈(1 + sig_len)/8⌉` bytes of `d`; ⊥ is the lone byte `0x00`.
    pub fn pack(&self) -> Vec<u8> {
        match self {
            BaseCiphertext::Bottom => vec![0],
            BaseCiphertext::Present { r, d } => {
                let mut out = vec![1];
                out.extend(r.to_bytes());
                out.extend(d.to_bytes());
                out
            }
        }
    }

    pub fn unpack(params: &BaseParams, bytes: &[u8]) -> Result<Self> {
        match bytes.first() {
            Some(0) if bytes.len() == 1 => Ok(BaseCiphertext::Bottom),
            Some(1) => {
                let rb = params.u.div_ceil(8);
                let db = params.d_len().div_ceil(8);
                if bytes.len() != 1 + rb + db {
                    return Err(Error::Wire(format!(
                        "ciphertext has {} bytes, expected {}",
                        bytes.len(),
                        1 + rb + db
                    )));
                }
                let wire = |e: qsim::QsimError| Error::Wire(e.to_string());
                Ok(BaseCiphertext::Present {
                    r: BitString::from_bytes(&bytes[1..1 + rb], params.u).map_err(wire)?,
                    d: BitString::from_bytes(&bytes[1 + rb..], params.d_len()).map_err(wire)?,
                })
            }
            _ => Err(Error::Wire("bad ciphertext tag".into())),
        }
    }
}

impl Wire for BaseCiphertext {
    fn write(&self, w: &mut Writer) {
        match self {
            BaseCiphertext::Bottom => {
                w.u8(0);
            }
            BaseCiphertext::Present { r, d } => {
                w.u8(1).bits(r).bits(d);
            }
        }
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.tag()? {
            Ok(BaseCiphertext::Present {
                r: r.bits()?,
                d: r.bits()?,
            })
        } else {
            Ok(BaseCiphertext::Bottom)
        }
    }
}

/// Result of the coherent signature check (step 1 of encryption).
#[derive(Debug)]
pub enum Checked {
    /// D measured ⊥, or the key was malformed.
    Rejected,
    /// D measured ⊤; `state` is the post-measurement key (D removed).
    Accepted { r: BitString, state: SparseState },
}

/// Coherently evaluates `Ver(vk, A‖r, B)` into D and measures D.
pub fn enc_check(params: &BaseParams, vk: &VerifyingKey, pk: QuantumPublicKey, rng: &mut DetRng) -> Result<Checked> {
    let layout = pk.state.layout();
    let shape_ok = pk.r.len() == params.u
        && layout.register_width(REG_A).ok() == Some(1)
        && layout.register_width(REG_B).ok() == Some(params.sig_len());
    if !shape_ok {
        return Ok(Checked::Rejected);
    }
    let r = pk.r;
    let with_d = pk.state.add_register(REG_D, 1)?;
    let checked = with_d.coherent_eval(&[REG_A, REG_B], REG_D, |x| {
        let sig = x.slice(1, x.len() - 1);
        BitString::from_bits([vk.verify(&signed_message(x.get(0), &r), &sig)])
    })?;
    let (outcome, post) = checked.measure_computational(REG_D, rng)?;
    if !outcome.get(0) {
        return Ok(Checked::Rejected);
    }
    let (_, state) = post.drop_register(REG_D)?;
    Ok(Checked::Accepted { r, state })
}

/// Applies `Z^b` to A and measures `(A, B)` in the Hadamard basis. Returns
/// the ciphertext and whatever registers remain (the adversary's).
pub fn enc_finish(r: BitString, state: SparseState, b: bool, rng: &mut DetRng) -> Result<(BaseCiphertext, SparseState)> {
    let phased = state.apply_z_power(REG_A, b)?;
    let (d, rest) = phased.measure_hadamard(&[REG_A, REG_B], rng)?;
    Ok((BaseCiphertext::Present { r, d }, rest))
}

pub fn base_enc(params: &BaseParams, vk: &VerifyingKey, pk: QuantumPublicKey, b: bool, rng: &mut DetRng) -> Result<BaseCiphertext> {
    match enc_check(params, vk, pk, rng)? {
        Checked::Rejected => Ok(BaseCiphertext::Bottom),
        Checked::Accepted { r, state } => Ok(enc_finish(r, state, b, rng)?.0),
    }
}

/// `b' = d · (0‖Sign(k,0‖r) ⊕ 1‖Sign(k,1‖r))`.
pub fn base_dec(sk: &BaseSecretKey, ct: &BaseCiphertext) -> Option<bool> {
    match ct {
        BaseCiphertext::Bottom => None,
        BaseCiphertext::Present { r, d } => {
            if r.len() != sk.params.u || d.len() != sk.params.d_len() {
                return None;
            }
            let diff = sk.branch(false, r).xor(&sk.branch(true, r)).ok()?;
            d.dot(&diff).ok()
        }
    }
}

/// Per-slot keys for `ℓ`-bit messages: slot `i` uses seed `seed ‖ i`.
pub fn base_skgen_multi(params: BaseParams, seed: &[u8], ell: usize) -> (Vec<BaseSecretKey>, Vec<VerifyingKey>) {
    (0..ell as u64)
        .map(|i| {
            let mut s = seed.to_vec();
            s.extend_from_slice(b"slot");
            s.extend_from_slice(&i.to_le_bytes());
            base_skgen(params, &s)
        })
        .unzip()
}

pub fn base_enc_multi(
    params: &BaseParams,
    vks: &[VerifyingKey],
    pks: Vec<QuantumPublicKey>,
    msg: &BitString,
    rng: &mut DetRng,
) -> Result<Vec<BaseCiphertext>> {
    check_arity(vks.len(), pks.len())?;
    check_msg_len(vks.len(), msg)?;
    vks.iter()
        .zip(pks)
        .enumerate()
        .map(|(i, (vk, pk))| base_enc(params, vk, pk, msg.get(i), rng))
        .collect()
}

/// ⊥ in any slot makes the whole message ⊥.
pub fn base_dec_multi(sks: &[BaseSecretKey], cts: &[BaseCiphertext]) -> Option<BitString> {
    if sks.len() != cts.len() {
        return None;
    }
    let bits: Option<Vec<bool>> = sks.iter().zip(cts).map(|(sk, ct)| base_dec(sk, ct)).collect();
    bits.map(BitString::from_bits)
}

/// The base construction with `ℓ` parallel slots.
#[derive(Clone, Copy, Debug)]
pub struct BaseScheme {
    pub params: BaseParams,
    pub ell: usize,
}

impl BaseScheme {
    pub fn new(params: BaseParams, ell: usize) -> Self {
        BaseScheme { params, ell }
    }
}

impl Qpke for BaseScheme {
    type SecretKey = Vec<BaseSecretKey>;
    type VerKey = Vec<VerifyingKey>;
    type PublicKey = Vec<QuantumPublicKey>;
    type Ciphertext = Vec<BaseCiphertext>;

    fn name(&self) -> String {
        format!("base[ℓ={}]", self.ell)
    }

    fn msg_len(&self) -> usize {
        self.ell
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        base_skgen_multi(self.params, &draw_seed(rng), self.ell)
    }

    fn pkgen(&self, sk: &Self::SecretKey, rng: &mut DetRng) -> Self::PublicKey {
        sk.iter().map(|k| base_pkgen(k, rng)).collect()
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_arity(self.ell, vk.len())?;
        base_enc_multi(&self.params, vk, pk, msg, rng)
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        base_dec_multi(sk, ct)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        ct.iter().any(BaseCiphertext::is_bottom)
    }
}
