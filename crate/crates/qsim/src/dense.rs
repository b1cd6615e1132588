//! Dense brute-force reference used to cross-check the sparse routines.
//! Index convention: basis string read as a binary number, bit 0 most
//! significant.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::bits::BitString;
use crate::dist::OutcomeDistribution;
use crate::error::QsimError;
use crate::hadamard::Measurement;
use crate::state::{SparseState, PRUNE_THRESHOLD};

pub const DENSE_MAX_QUBITS: usize = 14;

/// Full `2^n` amplitude vector of `state`.
pub fn dense_reference(state: &SparseState) -> Result<Vec<Complex64>, QsimError> {
    let n = state.width();
    if n > DENSE_MAX_QUBITS {
        return Err(QsimError::TooLarge(n));
    }
    let mut v = vec![Complex64::default(); 1 << n];
    for (s, a) in state.terms() {
        v[s.to_index() as usize] = a;
    }
    Ok(v)
}

/// Applies `H` to each listed qubit position of an `n`-qubit dense vector.
pub fn walsh_hadamard(v: &mut [Complex64], n: usize, qubits: &[usize]) {
    let norm = std::f64::consts::FRAC_1_SQRT_2;
    for &q in qubits {
        let stride = 1usize << (n - 1 - q);
        for base in 0..v.len() {
            if base & stride == 0 {
                let a = v[base];
                let b = v[base | stride];
                v[base] = (a + b) * norm;
                v[base | stride] = (a - b) * norm;
            }
        }
    }
}

/// Outcome distribution of measuring `regs` computed from the dense vector:
/// optional Hadamard layer on those qubits, then marginalize.
pub fn dense_distribution(
    state: &SparseState,
    measurement: Measurement,
    regs: &[&str],
) -> Result<OutcomeDistribution, QsimError> {
    let n = state.width();
    let mut v = dense_reference(state)?;
    let ranges: Vec<std::ops::Range<usize>> = regs
        .iter()
        .map(|r| state.layout().range(r))
        .collect::<Result<_, _>>()?;
    if measurement == Measurement::Hadamard {
        let qubits: Vec<usize> = ranges.iter().flat_map(|r| r.clone()).collect();
        walsh_hadamard(&mut v, n, &qubits);
    }
    let mut probs: BTreeMap<BitString, f64> = BTreeMap::new();
    for (idx, a) in v.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let full = BitString::from_index(idx as u64, n);
        let key = BitString::concat_all(
            ranges
                .iter()
                .map(|r| full.slice(r.start, r.len()))
                .collect::<Vec<_>>()
                .iter(),
        );
        *probs.entry(key).or_default() += p;
    }
    probs.retain(|_, p| *p > PRUNE_THRESHOLD);
    Ok(OutcomeDistribution::from_map(probs))
}
