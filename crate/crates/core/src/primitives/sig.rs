//! Stateless hash-tree signatures: a Goldreich certification tree of depth
//! `μ` over Lamport one-time keys, every key derived from one secret.
//!
//! With `h` the hash length in bits (a multiple of 8), a one-time key at tree
//! node `(level, prefix)` is the `2h` strings `x[j][c]` (`h` bits each) read
//! from `H("sig.node", key ‖ level ‖ prefix)`; its public key is
//! `H("sig.pk", y[0][0] ‖ y[0][1] ‖ … ‖ y[h-1][1])` with `y = H("sig.chain", x)`.
//! A one-time signature on an `h`-bit digest `g` lists, for each `j`,
//! `x[j][g_j] ‖ y[j][1-g_j]`, so a verifier recomputes the public key.
//!
//! A message is hashed once into a leaf index (`μ` bits) and a digest
//! (`h` bits). The signature is
//!
//! ```text
//! index ‖ (pk_left ‖ pk_right ‖ ots(level node, H("sig.cert", pk_left ‖ pk_right)))_{level < μ}
//!       ‖ ots(leaf, digest)
//! ```
//!
//! and the verification key is the root public key (`h` bits). Signing is
//! deterministic, which coherent evaluation relies on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use qsim::BitString;

use super::hash::Sponge;
use crate::error::{Error, Result};
use crate::wire::{Reader, Wire, Writer};

/// Tree levels whose certificates are always memoized, per signing key and
/// per verification key. Deeper levels are memoized until a cache holds
/// `CACHE_ENTRIES` blocks.
const CACHE_LEVELS: usize = 12;
const CACHE_ENTRIES: usize = 1 << 16;

fn cacheable<V>(level: usize, map: &HashMap<(usize, u64), V>) -> bool {
    level < CACHE_LEVELS || map.len() < CACHE_ENTRIES
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SigParams {
    pub hash_bits: usize,
    pub depth: usize,
}

impl SigParams {
    pub fn new(hash_bits: usize, depth: usize) -> Result<Self> {
        if hash_bits == 0 || hash_bits % 8 != 0 {
            return Err(Error::Params(format!(
                "hash length {hash_bits} must be a positive multiple of 8"
            )));
        }
        if depth > 63 {
            return Err(Error::Params(format!("tree depth {depth} exceeds 63")));
        }
        Ok(SigParams { hash_bits, depth })
    }

    fn hb(&self) -> usize {
        self.hash_bits / 8
    }

    pub fn ots_len(&self) -> usize {
        2 * self.hash_bits * self.hash_bits
    }

    fn level_len(&self) -> usize {
        2 * self.hash_bits + self.ots_len()
    }

    /// Total signature length in bits.
    pub fn sig_len(&self) -> usize {
        self.depth + self.depth * self.level_len() + self.ots_len()
    }
}

fn node_secret(key: &[u8; 32], level: usize, prefix: u64, p: &SigParams) -> Vec<u8> {
    let mut s = Sponge::new(b"sig.node");
    s.absorb(key);
    s.absorb_u64(level as u64);
    s.absorb_u64(prefix);
    s.squeeze_bytes(2 * p.hash_bits * p.hb())
}

fn chain_into(x: &[u8], out: &mut [u8]) {
    let mut s = Sponge::new(b"sig.chain");
    s.absorb(x);
    s.squeeze_into(out);
}

fn chain(x: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; x.len()];
    chain_into(x, &mut out);
    out
}

fn compress(ys: &[u8], hb: usize) -> Vec<u8> {
    let mut s = Sponge::new(b"sig.pk");
    s.absorb(ys);
    s.squeeze_bytes(hb)
}

fn cert_digest(pk_left: &[u8], pk_right: &[u8]) -> Vec<u8> {
    let mut s = Sponge::new(b"sig.cert");
    s.absorb(pk_left);
    s.absorb(pk_right);
    s.squeeze_bytes(pk_left.len())
}

fn digest_bit(g: &[u8], j: usize) -> usize {
    ((g[j / 8] >> (j % 8)) & 1) as usize
}

fn ots_public(secret: &[u8], hb: usize) -> Vec<u8> {
    let mut ys = vec![0u8; secret.len()];
    for (x, y) in secret.chunks_exact(hb).zip(ys.chunks_exact_mut(hb)) {
        chain_into(x, y);
    }
    compress(&ys, hb)
}

fn ots_sign(secret: &[u8], g: &[u8], hb: usize) -> Vec<u8> {
    let h = hb * 8;
    let mut out = Vec::with_capacity(2 * h * hb);
    for j in 0..h {
        let b = digest_bit(g, j);
        let elem = |c: usize| &secret[(2 * j + c) * hb..(2 * j + c + 1) * hb];
        out.extend_from_slice(elem(b));
        out.extend(chain(elem(1 - b)));
    }
    out
}

/// Public key a one-time signature would verify under.
fn ots_recover(sig: &[u8], g: &[u8], hb: usize) -> Vec<u8> {
    let h = hb * 8;
    let mut ys = vec![0u8; 2 * h * hb];
    for j in 0..h {
        let b = digest_bit(g, j);
        let x = &sig[2 * j * hb..(2 * j + 1) * hb];
        let other = &sig[(2 * j + 1) * hb..(2 * j + 2) * hb];
        chain_into(x, &mut ys[(2 * j + b) * hb..(2 * j + b + 1) * hb]);
        ys[(2 * j + 1 - b) * hb..(2 * j + 2 - b) * hb].copy_from_slice(other);
    }
    compress(&ys, hb)
}

/// Leaf index and digest of a message.
fn message_digest(msg: &BitString, p: &SigParams) -> (u64, Vec<u8>) {
    let mut s = Sponge::new(b"sig.msg");
    s.absorb_bits(msg);
    let out = s.squeeze_bytes(8 + p.hb());
    let head = u64::from_le_bytes(out[..8].try_into().expect("8 bytes"));
    let index = if p.depth == 0 {
        0
    } else {
        head >> (64 - p.depth)
    };
    (index, out[8..].to_vec())
}

fn prefix_at(index: u64, level: usize, depth: usize) -> u64 {
    if level == 0 {
        0
    } else {
        index >> (depth - level)
    }
}

type BlockCache = Arc<Mutex<HashMap<(usize, u64), Arc<Vec<u8>>>>>;

#[derive(Clone)]
pub struct SigningKey {
    params: SigParams,
    key: [u8; 32],
    blocks: BlockCache,
}

impl fmt::Debug for SigningKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigningKey")
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

impl PartialEq for SigningKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.key == other.key
    }
}

impl SigningKey {
    pub fn params(&self) -> &SigParams {
        &self.params
    }

    fn node_pk(&self, level: usize, prefix: u64) -> Vec<u8> {
        ots_public(
            &node_secret(&self.key, level, prefix, &self.params),
            self.params.hb(),
        )
    }

    /// `pk_left ‖ pk_right ‖ certificate` for an internal node.
    fn level_block(&self, level: usize, prefix: u64) -> Arc<Vec<u8>> {
        if let Some(b) = self.blocks.lock().expect("cache lock").get(&(level, prefix)) {
            return b.clone();
        }
        let hb = self.params.hb();
        let left = self.node_pk(level + 1, 2 * prefix);
        let right = self.node_pk(level + 1, 2 * prefix + 1);
        let secret = node_secret(&self.key, level, prefix, &self.params);
        let cert = ots_sign(&secret, &cert_digest(&left, &right), hb);
        let mut block = left;
        block.extend(right);
        block.extend(cert);
        let block = Arc::new(block);
        let mut blocks = self.blocks.lock().expect("cache lock");
        if cacheable(level, &blocks) {
            blocks.insert((level, prefix), block.clone());
        }
        block
    }

    pub fn sign(&self, msg: &BitString) -> BitString {
        let p = &self.params;
        let (index, g) = message_digest(msg, p);
        let mut body = Vec::with_capacity((p.sig_len() - p.depth) / 8);
        for level in 0..p.depth {
            body.extend_from_slice(&self.level_block(level, prefix_at(index, level, p.depth)));
        }
        let leaf = node_secret(&self.key, p.depth, index, p);
        body.extend(ots_sign(&leaf, &g, p.hb()));
        let body_bits = body.len() * 8;
        BitString::from_index(index, p.depth)
            .concat(&BitString::from_bytes(&body, body_bits).expect("byte-aligned body"))
    }
}

type VerifyCache = Arc<Mutex<HashMap<(usize, u64), Arc<(Vec<u8>, Vec<u8>)>>>>;

#[derive(Clone)]
pub struct VerifyingKey {
    params: SigParams,
    root: Vec<u8>,
    verified: VerifyCache,
}

impl fmt::Debug for VerifyingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VerifyingKey({})", hex::encode(&self.root))
    }
}

impl PartialEq for VerifyingKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.root == other.root
    }
}

impl Eq for VerifyingKey {}

impl VerifyingKey {
    fn from_root(params: SigParams, root: Vec<u8>) -> Self {
        VerifyingKey {
            params,
            root,
            verified: Arc::default(),
        }
    }

    pub fn params(&self) -> &SigParams {
        &self.params
    }

    /// The root commitment as a `λ_h`-bit string.
    pub fn bits(&self) -> BitString {
        BitString::from_bytes(&self.root, self.params.hash_bits).expect("root length")
    }

    pub fn from_bits(params: SigParams, bits: &BitString) -> Result<Self> {
        if bits.len() != params.hash_bits {
            return Err(Error::Wire(format!(
                "verification key has {} bits, expected {}",
                bits.len(),
                params.hash_bits
            )));
        }
        Ok(Self::from_root(params, bits.to_bytes()))
    }

    pub fn verify(&self, msg: &BitString, sig: &BitString) -> bool {
        let p = &self.params;
        if sig.len() != p.sig_len() {
            return false;
        }
        let (index, g) = message_digest(msg, p);
        if sig.slice(0, p.depth).to_index() != index {
            return false;
        }
        let hb = p.hb();
        let body = sig.slice(p.depth, sig.len() - p.depth).to_bytes();
        let level_bytes = p.level_len() / 8;
        let mut current: Vec<u8> = self.root.clone();
        for level in 0..p.depth {
            let block = &body[level * level_bytes..(level + 1) * level_bytes];
            let (left, rest) = block.split_at(hb);
            let (right, cert) = rest.split_at(hb);
            let key = (level, prefix_at(index, level, p.depth));
            let hit = self
                    .verified
                    .lock()
                    .expect("cache lock")
                    .get(&key)
                    .is_some_and(|e| e.0 == current && e.1 == block);
            if !hit {
                if ots_recover(cert, &cert_digest(left, right), hb) != current {
                    return false;
                }
                let mut verified = self.verified.lock().expect("cache lock");
                if cacheable(level, &verified) {
                    verified.insert(key, Arc::new((current.clone(), block.to_vec())));
                }
            }
            let bit = (index >> (p.depth - 1 - level)) & 1;
            current = if bit == 0 { left.to_vec() } else { right.to_vec() };
        }
        let leaf = &body[p.depth * level_bytes..];
        ots_recover(leaf, &g, hb) == current
    }
}

impl Wire for VerifyingKey {
    fn write(&self, w: &mut Writer) {
        w.u32(self.params.hash_bits as u32)
            .u32(self.params.depth as u32)
            .bits(&self.bits());
    }

    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let params = SigParams::new(r.u32()? as usize, r.u32()? as usize)?;
        Self::from_bits(params, &r.bits()?)
    }
}

#[derive(Clone, Debug)]
pub struct SigKeyPair {
    pub sk: SigningKey,
    pub vk: VerifyingKey,
}

/// Deterministic key generation from an arbitrary seed.
pub fn sig_gen(seed: &[u8], params: SigParams) -> SigKeyPair {
    let mut s = Sponge::new(b"sig.seed");
    s.absorb(seed);
    let key: [u8; 32] = s.squeeze_bytes(32).try_into().expect("32 bytes");
    let sk = SigningKey {
        params,
        key,
        blocks: Arc::default(),
    };
    let vk = VerifyingKey::from_root(params, sk.node_pk(0, 0));
    SigKeyPair { sk, vk }
}

pub fn sig_sign(sk: &SigningKey, msg: &BitString) -> BitString {
    sk.sign(msg)
}

pub fn sig_verify(vk: &VerifyingKey, msg: &BitString, sig: &BitString) -> bool {
    vk.verify(msg, sig)
}
