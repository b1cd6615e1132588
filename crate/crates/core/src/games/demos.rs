//! Runnable versions of the proof gadgets: the distinguish-to-swap
//! extractor, the partial-measurement factor, and the Hadamard parity law.

use qsim::{BitString, Complex64, DMatrix, DetRng, Measurement, OutcomeDistribution, RegisterLayout, SparseState, SubspaceUnitary};
use rand::Rng;
use serde::Serialize;

use super::stats::Rate;
use crate::base::{base_enc, base_pkgen, base_skgen, BaseCiphertext, BaseParams, BaseSecretKey, REG_A, REG_B};
use crate::error::{Error, Result};
use crate::scheme::draw_seed;

pub const REG_C: &str = "C";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractorReport {
    /// Advantage the distinguisher was built for.
    pub delta_target: f64,
    /// `|Pr[V outputs 1 | b=0] − Pr[V outputs 1 | b=1]|`, computed exactly.
    pub delta: f64,
    pub success: Rate,
    /// `Δ²/4`.
    pub analytic_floor: f64,
    /// `|c₀|² Δ²`, the exact success probability of this construction.
    pub closed_form: f64,
}

/// Real rotation by `θ` on the span of `(e₀, e₁)`; advantage `|sin 2θ|`.
pub fn rotation_distinguisher(e0: BitString, e1: BitString, delta: f64) -> Result<SubspaceUnitary> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Params(format!("Δ = {delta} is outside [0, 1]")));
    }
    let theta = delta.asin() / 2.0;
    let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0));
    Ok(SubspaceUnitary::new(vec![e0, e1], DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))?)
}

/// `W = V†(Z ⊗ I)V`, with the distinguisher's output on register A.
fn apply_w(state: &SparseState, v: &SubspaceUnitary) -> Result<SparseState> {
    let s = state.apply_subspace_unitary(v)?;
    let s = s.apply_z_power(REG_A, true)?;
    Ok(s.apply_subspace_unitary(&v.adjoint())?)
}

fn key_layout(params: &BaseParams) -> RegisterLayout {
    RegisterLayout::new(&[(REG_A, 1), (REG_B, params.sig_len()), (REG_C, 1)]).expect("static layout")
}

/// `e_b = |b⟩_A |Sign(k, b‖r)⟩_B |b⟩_C`: the key entangled with one
/// adversary qubit.
fn branches(sk: &BaseSecretKey, r: &BitString) -> (BitString, BitString) {
    let e = |b: bool| sk.branch(b, r).concat(&BitString::from_bits([b]));
    (e(false), e(true))
}

fn pair_state(layout: &RegisterLayout, e0: &BitString, e1: &BitString, sign: f64) -> Result<SparseState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(SparseState::superpose(
        layout.clone(),
        [(e0.clone(), Complex64::new(h, 0.0)), (e1.clone(), Complex64::new(sign * h, 0.0))],
    )?)
}

/// Runs the extractor: after `Z^b`, measure A (abort on 1), read `μ₀` from
/// B, apply `W`, read `μ₁` from B. Success means both signatures.
pub fn extractor_demo(params: BaseParams, delta: f64, trials: usize, seed: u64) -> Result<ExtractorReport> {
    let root = DetRng::from_seed(seed);
    let layout = key_layout(&params);
    let mut measured_delta = None;
    let mut wins = 0;
    for t in 0..trials {
        let mut rng = root.split_index(t as u64);
        let (sk, _) = base_skgen(params, &draw_seed(&mut rng));
        let r = BitString::random(params.u, &mut rng);
        let (e0, e1) = branches(&sk, &r);
        let v = rotation_distinguisher(e0.clone(), e1.clone(), delta)?;
        if measured_delta.is_none() {
            let p1 = |sign: f64| -> Result<f64> {
                let out = pair_state(&layout, &e0, &e1, sign)?.apply_subspace_unitary(&v)?;
                let dist = out.exact_distribution(Measurement::Computational, &[REG_A])?;
                Ok(dist.prob(&BitString::from_bits([true])))
            };
            measured_delta = Some((p1(1.0)? - p1(-1.0)?).abs());
        }
        let b: bool = rng.gen();
        let state = pair_state(&layout, &e0, &e1, 1.0)?.apply_z_power(REG_A, b)?;
        let (a, st) = state.measure_computational(REG_A, &mut rng)?;
        if a.get(0) {
            continue;
        }
        let (mu0, st) = st.measure_computational(REG_B, &mut rng)?;
        let st = apply_w(&st, &v)?;
        let (mu1, _) = st.measure_computational(REG_B, &mut rng)?;
        if mu0 == sk.signature(false, &r) && mu1 == sk.signature(true, &r) {
            wins += 1;
        }
    }
    let d = measured_delta.unwrap_or(delta);
    Ok(ExtractorReport {
        delta_target: delta,
        delta: d,
        success: Rate::new(wins, trials),
        analytic_floor: d * d / 4.0,
        closed_form: 0.5 * d * d,
    })
}

/// A state, an optional mid-circuit measurement, a unitary on a small span,
/// and the outcome whose probability is compared.
#[derive(Clone, Debug)]
pub struct BzCircuit {
    pub state: SparseState,
    /// Register measured in the inserted partial measurement.
    pub measured: String,
    pub unitary: SubspaceUnitary,
    pub output: Vec<String>,
    pub target: BitString,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BzReport {
    /// Number of outcomes of the inserted measurement.
    pub k: usize,
    pub pr: Rate,
    pub pr_measured: Rate,
    pub ratio: f64,
    pub exact_pr: f64,
    pub exact_pr_measured: f64,
}

impl BzCircuit {
    fn run(&self, insert: bool, rng: &mut DetRng) -> Result<bool> {
        let mut st = self.state.clone();
        if insert {
            st = st.measure_computational(&self.measured, rng)?.1;
        }
        let mut st = st.apply_subspace_unitary(&self.unitary)?;
        let mut out = BitString::empty();
        for reg in &self.output {
            let (x, post) = st.measure_computational(reg, rng)?;
            out = out.concat(&x);
            st = post;
        }
        Ok(out == self.target)
    }

    fn exact(&self, insert: bool) -> Result<f64> {
        let regs: Vec<&str> = self.output.iter().map(String::as_str).collect();
        let p = |s: &SparseState| -> Result<f64> {
            let d = s.apply_subspace_unitary(&self.unitary)?.exact_distribution(Measurement::Computational, &regs)?;
            Ok(d.prob(&self.target))
        };
        if !insert {
            return p(&self.state);
        }
        let mut total = 0.0;
        for (_, prob, branch) in self.state.branches(&self.measured)? {
            total += prob * p(&branch)?;
        }
        Ok(total)
    }
}

/// Runs the circuit with and without the inserted measurement.
pub fn bz_factor_check(circuit: &BzCircuit, trials: usize, seed: u64) -> Result<BzReport> {
    let root = DetRng::from_seed(seed);
    let (mut plain, mut measured) = (0, 0);
    for t in 0..trials {
        let mut rng = root.split_index(t as u64);
        plain += circuit.run(false, &mut rng)? as usize;
        measured += circuit.run(true, &mut rng)? as usize;
    }
    let pr = Rate::new(plain, trials);
    let pr_measured = Rate::new(measured, trials);
    Ok(BzReport {
        k: circuit.state.branches(&circuit.measured)?.len(),
        ratio: if plain == 0 { 0.0 } else { pr_measured.rate / pr.rate },
        pr,
        pr_measured,
        exact_pr: circuit.exact(false)?,
        exact_pr_measured: circuit.exact(true)?,
    })
}

/// Normalized Walsh–Hadamard matrix on `2^n` basis strings.
fn hadamard_matrix(n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * scale, 0.0)
    })
}

/// The extractor-side check: the key `|0,σ₀⟩ + |1,σ₁⟩` (or, for `k = 4`,
/// `Σ_j |j⟩|Sign(k, j‖r)⟩` over a two-qubit A) followed by the perfect
/// distinguisher, which maps the key to its first branch. Measuring A first
/// cuts the probability of that outcome to `1/k`.
pub fn bz_key_circuit(params: BaseParams, k_bits: usize, seed: u64) -> Result<BzCircuit> {
    if !(1..=3).contains(&k_bits) {
        return Err(Error::Params("the measured register has 1 to 3 qubits".into()));
    }
    let mut rng = DetRng::from_seed(seed);
    let (sk, _) = base_skgen(params, &draw_seed(&mut rng));
    let r = BitString::random(params.u, &mut rng);
    let layout = RegisterLayout::new(&[(REG_A, k_bits), (REG_B, params.sig_len())])?;
    let basis: Vec<BitString> = (0..1u64 << k_bits)
        .map(|j| {
            let a = BitString::from_index(j, k_bits);
            // the signed message is a ‖ r
            let sig = sk.signature_of(&a.concat(&r));
            a.concat(&sig)
        })
        .collect();
    let amp = Complex64::new(1.0, 0.0);
    let state = SparseState::superpose(layout, basis.iter().map(|x| (x.clone(), amp)))?;
    let unitary = SubspaceUnitary::new(basis.clone(), hadamard_matrix(k_bits))?;
    Ok(BzCircuit {
        state,
        measured: REG_A.into(),
        unitary,
        output: vec![REG_A.into()],
        target: BitString::zeros(k_bits),
    })
}

/// A basis-state input: the inserted measurement changes nothing.
pub fn bz_classical_circuit(x: BitString) -> Result<BzCircuit> {
    let layout = RegisterLayout::new(&[(REG_A, 1), (REG_B, x.len() - 1)])?;
    let state = SparseState::basis(layout, x.clone())?;
    Ok(BzCircuit {
        state,
        measured: REG_A.into(),
        unitary: SubspaceUnitary::identity(vec![x.clone()])?,
        output: vec![REG_A.into(), REG_B.into()],
        target: x,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardStats {
    pub samples: usize,
    /// Samples with `d · (x₀ ⊕ x₁) = b` on honest keys.
    pub parity_ok: usize,
    /// Largest TV distance, over `b`, between empirical and exact
    /// distributions on a six-qubit two-branch state.
    pub tv: f64,
}

/// Parity law on honest base keys, plus a distribution check small enough
/// for the empirical histogram to converge.
pub fn hadamard_stats(params: BaseParams, samples: usize, seed: u64) -> Result<HadamardStats> {
    let mut rng = DetRng::from_seed(seed);
    let (sk, vk) = base_skgen(params, &draw_seed(&mut rng));
    let mut parity_ok = 0;
    for _ in 0..samples {
        let pk = base_pkgen(&sk, &mut rng);
        let r = pk.r.clone();
        let b: bool = rng.gen();
        if let BaseCiphertext::Present { d, .. } = base_enc(&params, &vk, pk, b, &mut rng)? {
            let diff = sk.branch(false, &r).xor(&sk.branch(true, &r))?;
            parity_ok += (d.dot(&diff)? == b) as usize;
        }
    }

    let n = 6;
    let layout = RegisterLayout::new(&[(REG_A, 1), (REG_B, n - 1)])?;
    let x0 = BitString::from_bits([false]).concat(&BitString::random(n - 1, &mut rng));
    let x1 = BitString::from_bits([true]).concat(&BitString::random(n - 1, &mut rng));
    let mut tv: f64 = 0.0;
    for b in [false, true] {
        let st = pair_state(&layout, &x0, &x1, 1.0)?.apply_z_power(REG_A, b)?;
        let exact = st.exact_distribution(Measurement::Hadamard, &[REG_A, REG_B])?;
        let draws: Vec<BitString> = (0..samples / 2)
            .map(|_| st.measure_hadamard(&[REG_A, REG_B], &mut rng).map(|x| x.0))
            .collect::<std::result::Result<_, _>>()?;
        tv = tv.max(OutcomeDistribution::empirical(&draws).tv_distance(&exact));
    }
    Ok(HadamardStats { samples, parity_ok, tv })
}
