//! Tokenized MAC from conjugate coding.
//!
//! The message is hashed to `μ_t` bits. Block `j` holds `λ_t` qubits; qubit
//! `(j, i)` is `|v⟩` when `θ = 0` and `H|v⟩` when `θ = 1`. Signing measures
//! block `j` in basis `hash_j(msg)`; verification checks only the positions
//! whose preparation basis matches. The token is consumed by signing.

use qsim::{BitString, Complex64, DMatrix, RegisterLayout, SparseState};
use rand::Rng;

use super::hash::Sponge;
use crate::error::{Error, Result};
use crate::wire::{Reader, Wire, Writer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TmacParams {
    /// `μ_t`: message-hash bits, one block each.
    pub hash_bits: usize,
    /// `λ_t`: qubits per block.
    pub block_qubits: usize,
}

impl TmacParams {
    pub fn new(hash_bits: usize, block_qubits: usize) -> Result<Self> {
        if hash_bits == 0 || block_qubits == 0 {
            return Err(Error::Params("tokenized MAC sizes must be positive".into()));
        }
        Ok(TmacParams {
            hash_bits,
            block_qubits,
        })
    }

    pub fn qubits(&self) -> usize {
        self.hash_bits * self.block_qubits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmacKey {
    params: TmacParams,
    theta: BitString,
    values: BitString,
}

impl TmacKey {
    pub fn from_parts(params: TmacParams, theta: BitString, values: BitString) -> Result<Self> {
        if theta.len() != params.qubits() || values.len() != params.qubits() {
            return Err(Error::Params("basis/value strings have the wrong length".into()));
        }
        Ok(TmacKey {
            params,
            theta,
            values,
        })
    }

    pub fn params(&self) -> &TmacParams {
        &self.params
    }

    pub fn theta(&self) -> &BitString {
        &self.theta
    }

    pub fn values(&self) -> &BitString {
        &self.values
    }
}

pub fn tmac_keygen(seed: &[u8], params: TmacParams) -> TmacKey {
    let n = params.qubits();
    let mut s = Sponge::new(b"tmac.key");
    s.absorb(seed);
    let out = s.squeeze(2 * n);
    TmacKey {
        params,
        theta: out.slice(0, n),
        values: out.slice(n, n),
    }
}

pub fn message_hash(msg: &BitString, params: &TmacParams) -> BitString {
    let mut s = Sponge::new(b"tmac.msg");
    s.absorb_bits(msg);
    s.squeeze(params.hash_bits)
}

fn qubit_layout() -> RegisterLayout {
    RegisterLayout::new(&[("q", 1)]).expect("static layout")
}

/// `|v⟩` or `H|v⟩` on a one-qubit register `q`.
pub fn prepare_qubit(theta: bool, v: bool) -> SparseState {
    let one = Complex64::new(1.0, 0.0);
    let terms = if theta {
        let sign = if v { -one } else { one };
        vec![(BitString::from_bits([false]), one), (BitString::from_bits([true]), sign)]
    } else {
        vec![(BitString::from_bits([v]), one)]
    };
    SparseState::superpose(qubit_layout(), terms).expect("valid qubit")
}

/// Measures a one-qubit register `q` in the basis rotated by `angle`
/// (`0` computational, `π/4` Hadamard). Outcome `0` is `cos a|0⟩ + sin a|1⟩`.
pub fn measure_qubit_at_angle<R: Rng + ?Sized>(q: &SparseState, angle: f64, rng: &mut R) -> Result<bool> {
    let (c, s) = (angle.cos(), angle.sin());
    let r = |x: f64| Complex64::new(x, 0.0);
    let rot = DMatrix::from_row_slice(2, 2, &[r(c), r(s), r(-s), r(c)]);
    let rotated = q.apply_register_unitary("q", &rot)?;
    Ok(rotated.measure_computational("q", rng)?.0.get(0))
}

pub fn measure_qubit<R: Rng + ?Sized>(q: &SparseState, hadamard: bool, rng: &mut R) -> Result<bool> {
    if hadamard {
        Ok(q.measure_hadamard(&["q"], rng)?.0.get(0))
    } else {
        Ok(q.measure_computational("q", rng)?.0.get(0))
    }
}

/// Quantum signing token. Qubits are kept as independent one-qubit states,
/// since the token is a product state; `to_sparse` builds the joint state.
#[derive(Debug)]
pub struct TmacToken {
    params: TmacParams,
    qubits: Option<Vec<SparseState>>,
}

pub fn tmac_token(mk: &TmacKey) -> TmacToken {
    let qubits = mk
        .theta
        .iter()
        .zip(mk.values.iter())
        .map(|(t, v)| prepare_qubit(t, v))
        .collect();
    TmacToken {
        params: mk.params,
        qubits: Some(qubits),
    }
}

impl TmacToken {
    pub fn from_qubits(params: TmacParams, qubits: Vec<SparseState>) -> Result<Self> {
        if qubits.len() != params.qubits() {
            return Err(Error::Arity {
                expected: params.qubits(),
                got: qubits.len(),
            });
        }
        Ok(TmacToken {
            params,
            qubits: Some(qubits),
        })
    }

    pub fn params(&self) -> &TmacParams {
        &self.params
    }

    pub fn is_consumed(&self) -> bool {
        self.qubits.is_none()
    }

    /// Hands the qubits to the caller, leaving the token consumed.
    pub fn take_qubits(&mut self) -> Result<Vec<SparseState>> {
        self.qubits.take().ok_or(Error::TokenConsumed)
    }

    /// Joint state over registers `t0, t1, …` (qubit `(j, i)` is `t{j·λ_t+i}`).
    pub fn to_sparse(&self) -> Result<SparseState> {
        let qubits = self.qubits.as_ref().ok_or(Error::TokenConsumed)?;
        let mut joint = SparseState::trivial();
        for (k, q) in qubits.iter().enumerate() {
            joint = joint.tensor(&q.rename_register("q", &format!("t{k}"))?)?;
        }
        Ok(joint)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmacSignature(pub BitString);

impl Wire for TmacSignature {
    fn write(&self, w: &mut Writer) {
        w.bits(&self.0);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(TmacSignature(r.bits()?))
    }
}

pub fn tmac_sign<R: Rng + ?Sized>(token: &mut TmacToken, msg: &BitString, rng: &mut R) -> Result<TmacSignature> {
    let params = token.params;
    let qubits = token.take_qubits()?;
    let h = message_hash(msg, &params);
    let mut out = Vec::with_capacity(qubits.len());
    for (k, q) in qubits.iter().enumerate() {
        out.push(measure_qubit(q, h.get(k / params.block_qubits), rng)?);
    }
    Ok(TmacSignature(BitString::from_bits(out)))
}

pub fn tmac_verify(mk: &TmacKey, msg: &BitString, sig: &TmacSignature) -> bool {
    let p = &mk.params;
    if sig.0.len() != p.qubits() {
        return false;
    }
    let h = message_hash(msg, p);
    (0..p.qubits()).all(|k| mk.theta.get(k) != h.get(k / p.block_qubits) || sig.0.get(k) == mk.values.get(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::dense::dense_reference;
    use qsim::DetRng;

    fn small() -> TmacParams {
        TmacParams::new(2, 3).unwrap()
    }

    #[test]
    fn token_matches_dense_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for seed in 0u8..20 {
            let mk = tmac_keygen(&[seed], small());
            let dense = dense_reference(&tmac_token(&mk).to_sparse().unwrap()).unwrap();
            let n = mk.params.qubits();
            for (idx, amp) in dense.iter().enumerate() {
                let x = BitString::from_index(idx as u64, n);
                let mut expect = Complex64::new(1.0, 0.0);
                for k in 0..n {
                    let (t, v, b) = (mk.theta.get(k), mk.values.get(k), x.get(k));
                    expect *= match (t, v, b) {
                        (false, v, b) => Complex64::new((v == b) as u8 as f64, 0.0),
                        (true, true, true) => Complex64::new(-h, 0.0),
                        (true, _, _) => Complex64::new(h, 0.0),
                    };
                }
                assert!((amp - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn all_zero_basis_gives_a_basis_state() {
        let p = small();
        let mk = TmacKey::from_parts(p, BitString::zeros(6), BitString::from_index(0b101101, 6)).unwrap();
        let s = tmac_token(&mk).to_sparse().unwrap();
        assert_eq!(s.support_size(), 1);
        let mk = TmacKey::from_parts(p, BitString::ones(6), BitString::zeros(6)).unwrap();
        assert_eq!(tmac_token(&mk).to_sparse().unwrap().support_size(), 64);
    }

    #[test]
    fn honest_sign_verifies_and_consumes() {
        let p = TmacParams::new(8, 16).unwrap();
        let mut rng = DetRng::from_seed(8);
        for t in 0u32..50 {
            let mk = tmac_keygen(&t.to_le_bytes(), p);
            let mut tok = tmac_token(&mk);
            let m = BitString::from_index(t as u64, 12);
            let sig = tmac_sign(&mut tok, &m, &mut rng).unwrap();
            assert!(tmac_verify(&mk, &m, &sig));
            assert!(tok.is_consumed());
            assert_eq!(tmac_sign(&mut tok, &m, &mut rng), Err(Error::TokenConsumed));
            // positions measured in their preparation basis reproduce v
            let h = message_hash(&m, &p);
            for k in 0..p.qubits() {
                if mk.theta.get(k) == h.get(k / 16) {
                    assert_eq!(sig.0.get(k), mk.values.get(k));
                }
            }
        }
    }

    #[test]
    fn random_signatures_rejected() {
        let p = TmacParams::new(8, 16).unwrap();
        let mut rng = DetRng::from_seed(9);
        let mk = tmac_keygen(b"r", p);
        let m = BitString::from_index(1, 8);
        let accepted = (0..1000)
            .filter(|_| tmac_verify(&mk, &m, &TmacSignature(BitString::random(p.qubits(), &mut rng))))
            .count();
        assert_eq!(accepted, 0);
        assert!(!tmac_verify(&mk, &m, &TmacSignature(BitString::zeros(3))));
    }

    #[test]
    fn rotated_measurement_statistics() {
        let mut rng = DetRng::from_seed(10);
        let a = std::f64::consts::PI / 8.0;
        let zero = prepare_qubit(false, false);
        let plus = prepare_qubit(true, false);
        let n = 20_000;
        let z = (0..n).filter(|_| !measure_qubit_at_angle(&zero, a, &mut rng).unwrap()).count();
        let x = (0..n).filter(|_| !measure_qubit_at_angle(&plus, a, &mut rng).unwrap()).count();
        let expect = a.cos().powi(2);
        assert!((z as f64 / n as f64 - expect).abs() < 0.01);
        assert!((x as f64 / n as f64 - expect).abs() < 0.01);
    }
}
