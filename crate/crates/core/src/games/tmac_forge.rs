//! Scripted attempts to sign two messages with one tokenized-MAC token.
//!
//! The pair `(m₁, m₂)` is chosen so the message hashes differ in exactly one
//! block, the forger's best case. Qubits outside that block are measured in
//! the common basis and serve both signatures.

use std::f64::consts::FRAC_PI_8;

use qsim::{BitString, DetRng};
use rand::Rng;
use serde::Serialize;

use super::stats::Rate;
use crate::error::Result;
use crate::primitives::tmac::{measure_qubit, measure_qubit_at_angle, message_hash};
use crate::primitives::{tmac_keygen, tmac_token, tmac_verify, TmacParams, TmacSignature};
use crate::scheme::draw_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForgeStrategy {
    /// Measure in `m₁`'s basis; guess the differing block for `m₂` at random.
    MeasureOneBasis,
    /// As above but reuse the `m₁` outcomes for `m₂`.
    ReuseOutcomes,
    /// Measure half the differing block in each message's basis; guess the
    /// rest.
    SplitBlock,
    /// Measure the differing block at `π/8`, halfway between the bases, and
    /// use the outcomes for both messages.
    Breidbart,
}

impl ForgeStrategy {
    pub const ALL: [ForgeStrategy; 4] = [
        ForgeStrategy::MeasureOneBasis,
        ForgeStrategy::ReuseOutcomes,
        ForgeStrategy::SplitBlock,
        ForgeStrategy::Breidbart,
    ];

    /// Exact double-verification probability for one differing block of
    /// `λ_t` qubits. Basis-aligned strategies get each qubit right for both
    /// messages with probability 3/4, the Breidbart measurement with
    /// `cos²(π/8)`.
    pub fn analytic_rate(self, block_qubits: usize) -> f64 {
        let per_qubit = match self {
            ForgeStrategy::Breidbart => FRAC_PI_8.cos().powi(2),
            _ => 0.75,
        };
        per_qubit.powi(block_qubits as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForgeReport {
    pub strategy: ForgeStrategy,
    pub block_qubits: usize,
    pub rate: Rate,
    pub analytic: f64,
}

/// Two messages whose hashes differ in exactly one block.
pub fn one_block_pair(params: &TmacParams) -> (BitString, BitString, usize) {
    let width = 32;
    let m1 = BitString::zeros(width);
    let h1 = message_hash(&m1, params);
    for i in 1u64.. {
        let m2 = BitString::from_index(i, width);
        let diff = message_hash(&m2, params).xor(&h1).expect("same width");
        if diff.count_ones() == 1 {
            return (m1, m2, diff.first_one().expect("one bit set"));
        }
    }
    unreachable!()
}

pub fn double_sign_trials(params: TmacParams, strategy: ForgeStrategy, trials: usize, seed: u64) -> Result<ForgeReport> {
    let (m1, m2, block) = one_block_pair(&params);
    let h1 = message_hash(&m1, &params);
    let h2 = message_hash(&m2, &params);
    let lt = params.block_qubits;
    let root = DetRng::from_seed(seed);
    let mut wins = 0;
    for t in 0..trials {
        let mut rng = root.split_index(t as u64);
        let mk = tmac_keygen(&draw_seed(&mut rng), params);
        let mut token = tmac_token(&mk);
        let qubits = token.take_qubits()?;
        let mut s1 = Vec::with_capacity(qubits.len());
        let mut s2 = Vec::with_capacity(qubits.len());
        for (k, q) in qubits.iter().enumerate() {
            let j = k / lt;
            if j != block {
                let x = measure_qubit(q, h1.get(j), &mut rng)?;
                s1.push(x);
                s2.push(x);
                continue;
            }
            let (x1, x2) = match strategy {
                ForgeStrategy::MeasureOneBasis => (measure_qubit(q, h1.get(j), &mut rng)?, rng.gen()),
                ForgeStrategy::ReuseOutcomes => {
                    let x = measure_qubit(q, h1.get(j), &mut rng)?;
                    (x, x)
                }
                ForgeStrategy::SplitBlock => {
                    if k % lt < lt / 2 {
                        (measure_qubit(q, h1.get(j), &mut rng)?, rng.gen())
                    } else {
                        (rng.gen(), measure_qubit(q, h2.get(j), &mut rng)?)
                    }
                }
                ForgeStrategy::Breidbart => {
                    // outcome 0 at π/8 leans towards both |0⟩ and |+⟩
                    let x = measure_qubit_at_angle(q, FRAC_PI_8, &mut rng)?;
                    (x, x)
                }
            };
            s1.push(x1);
            s2.push(x2);
        }
        let ok1 = tmac_verify(&mk, &m1, &TmacSignature(BitString::from_bits(s1)));
        let ok2 = tmac_verify(&mk, &m2, &TmacSignature(BitString::from_bits(s2)));
        if ok1 && ok2 {
            wins += 1;
        }
    }
    Ok(ForgeReport {
        strategy,
        block_qubits: lt,
        rate: Rate::new(wins, trials),
        analytic: strategy.analytic_rate(lt),
    })
}
