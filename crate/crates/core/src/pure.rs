//! Pure-state public keys: one superposition over every randomizer `r`,
//!
//! ```text
//! Σ_r |r⟩_R (|0⟩_A |y(0,r)⟩_B |σ(0,r)⟩_C + |1⟩_A |y(1,r)⟩_B |σ(1,r)⟩_C)
//! ```
//!
//! with tags `y(b,r) = PRF_K(b‖r)` and `σ(b,r) = Sign(k, b‖r‖y(b,r))`.
//! Encryption checks signatures coherently into E, applies `Z^b` on A,
//! measures R (collapsing to two branches) and then `(A, B, C)` in the
//! Hadamard basis. With `v = 0` register B is absent and the tags vanish.

use qsim::{BitString, Complex64, DetRng, RegisterLayout, SparseState, DEFAULT_SUPPORT_CAP};

use crate::base::BaseCiphertext;
use crate::error::{Error, Result};
use crate::primitives::{prf_eval, sig_gen, PrfKey, SigParams, SigningKey, VerifyingKey};
use crate::scheme::{check_arity, check_msg_len, draw_seed, Qpke};

pub const REG_R: &str = "R";
pub const REG_A: &str = "A";
pub const REG_B: &str = "B";
pub const REG_C: &str = "C";
pub const REG_E: &str = "E";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PureParams {
    pub sig: SigParams,
    /// Randomizer length.
    pub u: usize,
    /// Tag length.
    pub v: usize,
    /// PRF key length.
    pub lambda: usize,
}

impl PureParams {
    pub fn new(sig: SigParams, u: usize, v: usize, lambda: usize) -> Result<Self> {
        if u == 0 || (2usize << u) > DEFAULT_SUPPORT_CAP {
            return Err(Error::Params(format!("u = {u} gives more branches than the simulator holds")));
        }
        Ok(PureParams { sig, u, v, lambda })
    }

    pub fn layout(&self) -> RegisterLayout {
        let mut regs = vec![(REG_R, self.u), (REG_A, 1)];
        if self.v > 0 {
            regs.push((REG_B, self.v));
        }
        regs.push((REG_C, self.sig.sig_len()));
        RegisterLayout::new(&regs).expect("static layout")
    }

    /// Registers measured in the Hadamard basis.
    pub fn hadamard_regs(&self) -> Vec<&'static str> {
        if self.v > 0 {
            vec![REG_A, REG_B, REG_C]
        } else {
            vec![REG_A, REG_C]
        }
    }

    /// Width of `d`.
    pub fn d_len(&self) -> usize {
        1 + self.v + self.sig.sig_len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureSecretKey {
    params: PureParams,
    k: SigningKey,
    prf: PrfKey,
}

impl PureSecretKey {
    pub fn params(&self) -> &PureParams {
        &self.params
    }

    /// `y(b, r)`.
    pub fn tag(&self, b: bool, r: &BitString) -> BitString {
        prf_eval(&self.prf, &BitString::from_bits([b]).concat(r), self.params.v)
    }

    /// `b ‖ y(b,r) ‖ σ(b,r)`, the content of `(A, B, C)` on branch `(b, r)`.
    pub fn branch(&self, b: bool, r: &BitString) -> BitString {
        let y = self.tag(b, r);
        let sig = self.k.sign(&signed_message(b, r, &y));
        BitString::from_bits([b]).concat(&y).concat(&sig)
    }
}

pub fn signed_message(b: bool, r: &BitString, y: &BitString) -> BitString {
    BitString::from_bits([b]).concat(r).concat(y)
}

pub fn pure_skgen(params: PureParams, rng: &mut DetRng) -> (PureSecretKey, VerifyingKey) {
    let kp = sig_gen(&draw_seed(rng), params.sig);
    let prf = PrfKey::random(params.lambda, rng);
    (PureSecretKey { params, k: kp.sk, prf }, kp.vk)
}

/// The honest key: uniform over all `2^{u+1}` branches.
pub fn pure_pkgen(sk: &PureSecretKey) -> Result<SparseState> {
    let p = &sk.params;
    let amp = Complex64::new(1.0, 0.0);
    let mut terms = Vec::with_capacity(2 << p.u);
    for i in 0..(1u64 << p.u) {
        let r = BitString::from_index(i, p.u);
        for b in [false, true] {
            terms.push((r.concat(&sk.branch(b, &r)), amp));
        }
    }
    Ok(SparseState::superpose(p.layout(), terms)?)
}

/// Splits a full basis string over `(R, A, B, C)` into `r` and the rest.
fn split(p: &PureParams, x: &BitString) -> (BitString, BitString) {
    (x.slice(0, p.u), x.slice(p.u, x.len() - p.u))
}

fn verifies(p: &PureParams, vk: &VerifyingKey, r: &BitString, abc: &BitString) -> bool {
    let b = abc.get(0);
    let y = abc.slice(1, p.v);
    let sig = abc.slice(1 + p.v, abc.len() - 1 - p.v);
    vk.verify(&signed_message(b, r, &y), &sig)
}

/// Coherent check into E, `Z^b` on A, R measured, then `(A, B, C)` in the
/// Hadamard basis. Other registers in `state` stay with the caller.
pub fn pure_enc(params: &PureParams, vk: &VerifyingKey, state: SparseState, b: bool, rng: &mut DetRng) -> Result<BaseCiphertext> {
    let layout = state.layout();
    let shape_ok = params.layout().registers().all(|(name, w)| layout.register_width(name).ok() == Some(w));
    if !shape_ok {
        return Ok(BaseCiphertext::Bottom);
    }
    let mut in_regs = vec![REG_R];
    in_regs.extend(params.hadamard_regs());
    let with_e = state.add_register(REG_E, 1)?;
    let checked = with_e.coherent_eval(&in_regs, REG_E, |x| {
        let (r, abc) = split(params, x);
        BitString::from_bits([verifies(params, vk, &r, &abc)])
    })?;
    let (outcome, post) = checked.measure_computational(REG_E, rng)?;
    if !outcome.get(0) {
        return Ok(BaseCiphertext::Bottom);
    }
    let (_, post) = post.drop_register(REG_E)?;
    let phased = post.apply_z_power(REG_A, b)?;
    let (r, collapsed) = phased.measure_computational(REG_R, rng)?;
    let (_, collapsed) = collapsed.drop_register(REG_R)?;
    let (d, _) = collapsed.measure_hadamard(&params.hadamard_regs(), rng)?;
    Ok(BaseCiphertext::Present { r, d })
}

/// `d · (0‖y(0,r)‖σ(0,r) ⊕ 1‖y(1,r)‖σ(1,r))`.
pub fn pure_dec(sk: &PureSecretKey, ct: &BaseCiphertext) -> Option<bool> {
    match ct {
        BaseCiphertext::Bottom => None,
        BaseCiphertext::Present { r, d } => {
            if r.len() != sk.params.u || d.len() != sk.params.d_len() {
                return None;
            }
            d.dot(&sk.branch(false, r).xor(&sk.branch(true, r)).ok()?).ok()
        }
    }
}

/// The pure variant with `ℓ` parallel slots.
#[derive(Clone, Copy, Debug)]
pub struct PureScheme {
    pub params: PureParams,
    pub ell: usize,
}

impl Qpke for PureScheme {
    type SecretKey = Vec<PureSecretKey>;
    type VerKey = Vec<VerifyingKey>;
    type PublicKey = Vec<SparseState>;
    type Ciphertext = Vec<BaseCiphertext>;

    fn name(&self) -> String {
        format!("pure[u={},v={},ℓ={}]", self.params.u, self.params.v, self.ell)
    }

    fn msg_len(&self) -> usize {
        self.ell
    }

    fn skgen(&self, rng: &mut DetRng) -> (Self::SecretKey, Self::VerKey) {
        (0..self.ell).map(|_| pure_skgen(self.params, rng)).unzip()
    }

    /// Pure keys need no randomness.
    fn pkgen(&self, sk: &Self::SecretKey, _rng: &mut DetRng) -> Self::PublicKey {
        sk.iter().map(|k| pure_pkgen(k).expect("size checked at construction")).collect()
    }

    fn enc(&self, vk: &Self::VerKey, pk: Self::PublicKey, msg: &BitString, rng: &mut DetRng) -> Result<Self::Ciphertext> {
        check_arity(self.ell, vk.len())?;
        check_arity(self.ell, pk.len())?;
        check_msg_len(self.ell, msg)?;
        vk.iter()
            .zip(pk)
            .enumerate()
            .map(|(i, (v, s))| pure_enc(&self.params, v, s, msg.get(i), rng))
            .collect()
    }

    fn dec(&self, sk: &Self::SecretKey, ct: &Self::Ciphertext) -> Option<BitString> {
        if sk.len() != ct.len() {
            return None;
        }
        let bits: Option<Vec<bool>> = sk.iter().zip(ct).map(|(k, c)| pure_dec(k, c)).collect();
        bits.map(BitString::from_bits)
    }

    fn is_bottom(&self, ct: &Self::Ciphertext) -> bool {
        ct.iter().any(BaseCiphertext::is_bottom)
    }
}

/// Strategy for extracting `(r, y(0,r), y(1,r))` from copies of
/// `Σ_{b,r} |b⟩_A |r⟩_R |H(b‖r)⟩_Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FindBothStrategy {
    /// Measure every copy in the computational basis; win outright when two
    /// copies land on `(0, r)` and `(1, r)`, else guess the missing tag.
    MeasureAll,
    /// Measure R on every copy, group copies by `r`; within the largest group
    /// measure one copy computationally and the rest of `(A, Y)` in the
    /// Hadamard basis, learning parities of `y(0,r) ⊕ y(1,r)`; then guess
    /// consistently.
    BasisSplit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FindBothReport {
    pub strategy: FindBothStrategy,
    pub copies: usize,
    pub u: usize,
    pub v: usize,
    pub trials: usize,
    pub successes: usize,
    /// `(2m+1)^4 (2^{-u} + 2^{-v})`.
    pub bound: f64,
}

impl FindBothReport {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials.max(1) as f64
    }

    pub fn bound_is_vacuous(&self) -> bool {
        self.bound >= 1.0
    }
}

pub fn find_both_bound(m: usize, u: usize, v: usize) -> f64 {
    (2.0 * m as f64 + 1.0).powi(4) * (2f64.powi(-(u as i32)) + 2f64.powi(-(v as i32)))
}

fn tag_state(h: &PrfKey, u: usize, v: usize) -> Result<SparseState> {
    let layout = RegisterLayout::new(&[("A", 1), ("R", u), ("Y", v)])?;
    let amp = Complex64::new(1.0, 0.0);
    let terms = (0..(2u64 << u)).map(|i| {
        let ar = BitString::from_index(i, u + 1);
        (ar.concat(&prf_eval(h, &ar, v)), amp)
    });
    Ok(SparseState::superpose(layout, terms)?)
}

/// Empirical success rate of a strategy against a fresh random `H` per trial.
pub fn cannot_find_both_trial(
    m: usize,
    strategy: FindBothStrategy,
    u: usize,
    v: usize,
    trials: usize,
    rng: &mut DetRng,
) -> Result<FindBothReport> {
    if u == 0 || u > 8 || v == 0 || v > 16 {
        return Err(Error::Params("cannot-find-both trials need 1 ≤ u ≤ 8, 1 ≤ v ≤ 16".into()));
    }
    let mut successes = 0;
    for _ in 0..trials {
        let h = PrfKey::random(128, rng);
        let truth = |b: bool, r: &BitString| prf_eval(&h, &BitString::from_bits([b]).concat(r), v);
        let guess = match strategy {
            FindBothStrategy::MeasureAll => measure_all(&h, m, u, v, rng)?,
            FindBothStrategy::BasisSplit => basis_split(&h, m, u, v, rng)?,
        };
        if let Some((r, y0, y1)) = guess {
            if y0 == truth(false, &r) && y1 == truth(true, &r) {
                successes += 1;
            }
        }
    }
    Ok(FindBothReport {
        strategy,
        copies: m,
        u,
        v,
        trials,
        successes,
        bound: find_both_bound(m, u, v),
    })
}

/// Computational measurement of every register, in layout order.
fn measure_everything(state: &SparseState, rng: &mut DetRng) -> Result<BitString> {
    let names = state.layout().names();
    let mut cur = state.clone();
    let mut out = BitString::empty();
    for n in &names {
        let (x, post) = cur.measure_computational(n, rng)?;
        out = out.concat(&x);
        cur = post;
    }
    Ok(out)
}

type Guess = Option<(BitString, BitString, BitString)>;

fn measure_all(h: &PrfKey, m: usize, u: usize, v: usize, rng: &mut DetRng) -> Result<Guess> {
    if m == 0 {
        return Ok(None);
    }
    let psi = tag_state(h, u, v)?;
    let mut seen: Vec<(bool, BitString, BitString)> = Vec::with_capacity(m);
    for _ in 0..m {
        let x = measure_everything(&psi, rng)?;
        seen.push((x.get(0), x.slice(1, u), x.slice(1 + u, v)));
    }
    for (b, r, y) in &seen {
        if let Some((_, _, y_other)) = seen.iter().find(|(b2, r2, _)| b2 != b && r2 == r) {
            return Ok(Some(order(*b, r.clone(), y.clone(), y_other.clone())));
        }
    }
    let (b, r, y) = seen.swap_remove(0);
    Ok(Some(order(b, r, y, BitString::random(v, rng))))
}

fn order(b: bool, r: BitString, y_b: BitString, y_other: BitString) -> (BitString, BitString, BitString) {
    if b {
        (r, y_other, y_b)
    } else {
        (r, y_b, y_other)
    }
}

fn basis_split(h: &PrfKey, m: usize, u: usize, v: usize, rng: &mut DetRng) -> Result<Guess> {
    use qsim::gf2::EchelonBasis;
    if m == 0 {
        return Ok(None);
    }
    let psi = tag_state(h, u, v)?;
    let mut groups: Vec<(BitString, Vec<SparseState>)> = Vec::new();
    for _ in 0..m {
        let (r, post) = psi.measure_computational("R", rng)?;
        let (_, post) = post.drop_register("R")?;
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, states)) => states.push(post),
            None => groups.push((r, vec![post])),
        }
    }
    groups.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
    let (r, mut states) = groups.swap_remove(0);
    let first = states.swap_remove(0);
    let ay = measure_everything(&first, rng)?;
    let (b, y_b) = (ay.get(0), ay.slice(1, v));
    // Each Hadamard outcome d on (A, Y) satisfies d_A ⊕ d_Y·(y0 ⊕ y1) = 0.
    // Solve for x = 1‖δ: x·e_A = 1 and x·d = 0 for every outcome d.
    let mut constraints = EchelonBasis::new(v + 1);
    constraints.insert(&BitString::from_bits([true]).concat(&BitString::zeros(v)));
    for s in states {
        let (d, _) = s.measure_hadamard(&["A", "Y"], rng)?;
        constraints.insert(&d);
    }
    let x = constraints.sample_solution(1, rng);
    let y_other = y_b.xor(&x.slice(1, v))?;
    Ok(Some(order(b, r, y_b, y_other)))
}
