//! Hadamard-basis measurement of few-branch states over wide registers.
//!
//! For a state `Σ_j a_j |x_j⟩|y_j⟩` (x on the measured registers), outcome `d`
//! occurs with probability `2^-n Σ_y |Σ_{j: y_j = y} a_j (-1)^{d·x_j}|²`. The
//! probability depends on `d` only through the parities `d·(x_j ⊕ x_0)`, so
//! we pick a basis of the span of those differences (dimension `m < k`),
//! enumerate the `2^m` parity patterns, sample one by its aggregate weight,
//! then draw `d` uniformly from the affine set realising it.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::dist::OutcomeDistribution;
use crate::error::QsimError;
use crate::gf2::EchelonBasis;
use crate::state::{sample_weighted, SparseState, PRUNE_THRESHOLD};

/// Largest support (counted in distinct measured strings) the pattern
/// enumeration accepts.
pub const HADAMARD_SUPPORT_CAP: usize = 20;
/// Largest number of free outcome bits `exact_distribution` will enumerate.
pub const EXACT_ENUMERATION_BITS: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurement {
    Computational,
    Hadamard,
}

/// Parity structure of the measured part of a state.
struct PatternSpace {
    basis: EchelonBasis,
    /// Per term: combination mask, residual bits, amplitude.
    terms: Vec<(u64, BitString, Complex64)>,
}

impl PatternSpace {
    fn build(state: &SparseState, regs: &[&str]) -> Result<Self, QsimError> {
        let measured = state.ranges(regs)?;
        let width: usize = measured.iter().map(|r| r.1).sum();
        let rest = rest_ranges(state, regs);
        let mut distinct: Vec<BitString> = Vec::new();
        let mut raw = Vec::new();
        for (s, a) in state.terms() {
            let x = BitString::concat_all(
                measured
                    .iter()
                    .map(|&(st, l)| s.slice(st, l))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            let y = BitString::concat_all(
                rest.iter()
                    .map(|&(st, l)| s.slice(st, l))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            if !distinct.contains(&x) {
                distinct.push(x.clone());
                if distinct.len() > HADAMARD_SUPPORT_CAP {
                    return Err(QsimError::SupportCap {
                        size: distinct.len(),
                        cap: HADAMARD_SUPPORT_CAP,
                    });
                }
            }
            raw.push((x, y, a));
        }
        let reference = distinct[0].clone();
        let mut basis = EchelonBasis::new(width);
        let mut terms = Vec::with_capacity(raw.len());
        for (x, y, a) in raw {
            let diff = x.xor(&reference)?;
            let mask = basis.insert(&diff);
            terms.push((mask, y, a));
        }
        Ok(PatternSpace { basis, terms })
    }

    /// Unnormalized residual state (keyed by unmeasured bits) for a pattern.
    fn residual(&self, pattern: u64) -> BTreeMap<BitString, Complex64> {
        let mut out: BTreeMap<BitString, Complex64> = BTreeMap::new();
        for (mask, y, a) in &self.terms {
            let sign = if (mask & pattern).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            *out.entry(y.clone()).or_default() += a * sign;
        }
        out
    }

    /// Probability of each parity pattern (sums to 1).
    fn pattern_probabilities(&self) -> Vec<f64> {
        let m = self.basis.dim();
        let count = 1u64 << m;
        let scale = 1.0 / count as f64;
        (0..count)
            .map(|p| {
                self.residual(p)
                    .values()
                    .map(|a| a.norm_sqr())
                    .sum::<f64>()
                    * scale
            })
            .collect()
    }
}

fn rest_ranges(state: &SparseState, measured: &[&str]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut at = 0;
    for (name, w) in state.layout().registers() {
        if !measured.contains(&name) {
            out.push((at, w));
        }
        at += w;
    }
    out
}

impl SparseState {
    /// Joint Hadamard-basis measurement of `regs`. Returns the outcome
    /// (registers concatenated in the order given) and the normalized state
    /// of the remaining registers; measured registers leave the layout.
    pub fn measure_hadamard<R: Rng + ?Sized>(
        &self,
        regs: &[&str],
        rng: &mut R,
    ) -> Result<(BitString, SparseState), QsimError> {
        let space = PatternSpace::build(self, regs)?;
        let probs = space.pattern_probabilities();
        let pattern = sample_weighted(&probs, rng) as u64;
        let d = space.basis.sample_solution(pattern, rng);
        let residual_layout = self.layout().without(regs);
        let residual = if residual_layout.width() == 0 && residual_layout.registers().count() == 0 {
            SparseState::trivial()
        } else {
            SparseState::superpose(residual_layout, space.residual(pattern))?
        };
        Ok((d, residual.with_cap(self.cap())?))
    }

    /// Number of parity patterns a Hadamard measurement of `regs` ranges
    /// over, i.e. `2^m` with `m` the dimension of the difference span.
    pub fn hadamard_pattern_dimension(&self, regs: &[&str]) -> Result<usize, QsimError> {
        Ok(PatternSpace::build(self, regs)?.basis.dim())
    }

    /// Exact outcome distribution of measuring `regs` jointly in the given
    /// basis. Outcomes with probability at most 1e-12 are omitted.
    pub fn exact_distribution(
        &self,
        measurement: Measurement,
        regs: &[&str],
    ) -> Result<OutcomeDistribution, QsimError> {
        match measurement {
            Measurement::Computational => {
                let ranges = self.ranges(regs)?;
                let mut probs: BTreeMap<BitString, f64> = BTreeMap::new();
                let total = self.norm_sqr();
                for (s, a) in self.terms() {
                    let x = BitString::concat_all(
                        ranges
                            .iter()
                            .map(|&(st, l)| s.slice(st, l))
                            .collect::<Vec<_>>()
                            .iter(),
                    );
                    *probs.entry(x).or_default() += a.norm_sqr() / total;
                }
                Ok(OutcomeDistribution::from_map(probs))
            }
            Measurement::Hadamard => {
                let space = PatternSpace::build(self, regs)?;
                let free = space.basis.width() - space.basis.dim();
                if free > EXACT_ENUMERATION_BITS {
                    return Err(QsimError::TooLarge(space.basis.width()));
                }
                let per = 1.0 / (1u64 << free) as f64;
                let mut probs = BTreeMap::new();
                for (p, w) in space.pattern_probabilities().into_iter().enumerate() {
                    if w * per <= PRUNE_THRESHOLD {
                        continue;
                    }
                    for d in space.basis.all_solutions(p as u64) {
                        probs.insert(d, w * per);
                    }
                }
                Ok(OutcomeDistribution::from_map(probs))
            }
        }
    }
}
