use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::bits::BitString;
use crate::error::QsimError;
use crate::layout::RegisterLayout;

/// Amplitudes smaller than this are dropped after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-12;
/// Allowed deviation of the squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SUPPORT_CAP: usize = 4096;

/// A pure state stored as a map from full-width basis strings to amplitudes.
///
/// Every public operation takes `&self` and returns a fresh, normalized state.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    layout: RegisterLayout,
    terms: BTreeMap<BitString, Complex64>,
    cap: usize,
}

pub(crate) fn sample_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // rounding left us past the end; take the last nonzero weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

impl SparseState {
    fn from_map(
        layout: RegisterLayout,
        terms: BTreeMap<BitString, Complex64>,
        cap: usize,
    ) -> Result<Self, QsimError> {
        let mut terms = terms;
        terms.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        let norm: f64 = terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if terms.is_empty() || norm < PRUNE_THRESHOLD {
            return Err(QsimError::ZeroNorm);
        }
        if terms.len() > cap {
            return Err(QsimError::SupportCap {
                size: terms.len(),
                cap,
            });
        }
        for a in terms.values_mut() {
            *a /= norm;
        }
        Ok(SparseState { layout, terms, cap })
    }

    /// `|value⟩` with amplitude 1.
    pub fn basis(layout: RegisterLayout, value: BitString) -> Result<Self, QsimError> {
        if value.len() != layout.width() {
            return Err(QsimError::WidthMismatch {
                expected: layout.width(),
                got: value.len(),
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(value, Complex64::new(1.0, 0.0));
        Ok(SparseState {
            layout,
            terms,
            cap: DEFAULT_SUPPORT_CAP,
        })
    }

    /// The zero-qubit state, used as the residue once every register has
    /// been measured away.
    pub fn trivial() -> Self {
        Self::basis(RegisterLayout::default(), BitString::empty()).expect("empty layout")
    }

    /// Normalized superposition of the given terms. Repeated strings add.
    pub fn superpose<I>(layout: RegisterLayout, terms: I) -> Result<Self, QsimError>
    where
        I: IntoIterator<Item = (BitString, Complex64)>,
    {
        let mut map: BTreeMap<BitString, Complex64> = BTreeMap::new();
        let mut any = false;
        for (s, a) in terms {
            any = true;
            if s.len() != layout.width() {
                return Err(QsimError::WidthMismatch {
                    expected: layout.width(),
                    got: s.len(),
                });
            }
            *map.entry(s).or_default() += a;
        }
        if !any {
            return Err(QsimError::EmptySuperposition);
        }
        Self::from_map(layout, map, DEFAULT_SUPPORT_CAP)
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self, QsimError> {
        if self.terms.len() > cap {
            return Err(QsimError::SupportCap {
                size: self.terms.len(),
                cap,
            });
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BitString, Complex64)> {
        self.terms.iter().map(|(s, a)| (s, *a))
    }

    pub fn amplitude(&self, s: &BitString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`; layouts must have the same width.
    pub fn inner(&self, other: &SparseState) -> Result<Complex64, QsimError> {
        if self.width() != other.width() {
            return Err(QsimError::WidthMismatch {
                expected: self.width(),
                got: other.width(),
            });
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(s, a)| other.terms.get(s).map(|b| a.conj() * b))
            .sum())
    }

    /// Same layout and amplitudes agreeing within `tol` on the union of
    /// supports.
    pub fn approx_eq(&self, other: &SparseState, tol: f64) -> bool {
        self.layout == other.layout
            && self
                .terms
                .keys()
                .chain(other.terms.keys())
                .all(|k| (self.amplitude(k) - other.amplitude(k)).norm() <= tol)
    }

    /// Slice of `term` belonging to register `name`.
    pub fn register_value(&self, term: &BitString, name: &str) -> Result<BitString, QsimError> {
        let r = self.layout.range(name)?;
        Ok(term.slice(r.start, r.len()))
    }

    fn gather(&self, term: &BitString, regs: &[(usize, usize)]) -> BitString {
        BitString::concat_all(
            regs.iter()
                .map(|&(s, l)| term.slice(s, l))
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    pub(crate) fn ranges(&self, names: &[&str]) -> Result<Vec<(usize, usize)>, QsimError> {
        let mut seen: Vec<&str> = Vec::new();
        names
            .iter()
            .map(|n| {
                if seen.contains(n) {
                    return Err(QsimError::DuplicateRegister(n.to_string()));
                }
                seen.push(n);
                self.layout.range(n).map(|r| (r.start, r.len()))
            })
            .collect()
    }

    /// Bits of `term` over `names`, concatenated in the order given.
    pub fn project_bits(&self, term: &BitString, names: &[&str]) -> Result<BitString, QsimError> {
        let r = self.ranges(names)?;
        Ok(self.gather(term, &r))
    }

    /// Appends a fresh register initialised to all zeros.
    pub fn add_register(&self, name: &str, width: usize) -> Result<SparseState, QsimError> {
        let mut layout = self.layout.clone();
        layout.push(name, width)?;
        let zeros = BitString::zeros(width);
        let terms = self
            .terms
            .iter()
            .map(|(s, a)| (s.concat(&zeros), *a))
            .collect();
        Ok(SparseState {
            layout,
            terms,
            cap: self.cap,
        })
    }

    /// Removes a register that holds the same value on every branch,
    /// returning that value.
    pub fn drop_register(&self, name: &str) -> Result<(BitString, SparseState), QsimError> {
        let r = self.layout.range(name)?;
        let mut value: Option<BitString> = None;
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            let v = s.slice(r.start, r.len());
            match &value {
                None => value = Some(v),
                Some(prev) if *prev != v => return Err(QsimError::Entangled(name.to_string())),
                _ => {}
            }
            let rest = s.slice(0, r.start).concat(&s.slice(r.end, s.len() - r.end));
            terms.insert(rest, *a);
        }
        let state = SparseState {
            layout: self.layout.without(&[name]),
            terms,
            cap: self.cap,
        };
        Ok((value.expect("nonempty support"), state))
    }

    pub fn rename_register(&self, from: &str, to: &str) -> Result<SparseState, QsimError> {
        Ok(SparseState {
            layout: self.layout.rename(from, to)?,
            terms: self.terms.clone(),
            cap: self.cap,
        })
    }

    /// `self ⊗ other`, registers of `other` placed after those of `self`.
    pub fn tensor(&self, other: &SparseState) -> Result<SparseState, QsimError> {
        let layout = self.layout.join(&other.layout)?;
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                terms.insert(s.concat(t), a * b);
            }
        }
        Self::from_map(layout, terms, self.cap.max(other.cap))
    }

    /// Reversible evaluation of a classical function: every branch
    /// `|x⟩|y⟩_out` becomes `|x⟩|y ⊕ f(x)⟩_out`, where `x` is the
    /// concatenation of `in_regs` in the order given.
    pub fn coherent_eval<F>(
        &self,
        in_regs: &[&str],
        out_reg: &str,
        f: F,
    ) -> Result<SparseState, QsimError>
    where
        F: Fn(&BitString) -> BitString,
    {
        let inputs = self.ranges(in_regs)?;
        let out = self.layout.range(out_reg)?;
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            let x = self.gather(s, &inputs);
            let fx = f(&x);
            if fx.len() != out.len() {
                return Err(QsimError::WidthMismatch {
                    expected: out.len(),
                    got: fx.len(),
                });
            }
            let mut y = s.slice(out.start, out.len());
            y.xor_assign(&fx)?;
            let mut t = s.clone();
            t.write_at(out.start, &y);
            *terms.entry(t).or_default() += *a;
        }
        Self::from_map(self.layout.clone(), terms, self.cap)
    }

    /// Applies `Z^b` to a one-qubit register.
    pub fn apply_z_power(&self, reg: &str, b: bool) -> Result<SparseState, QsimError> {
        let r = self.layout.range(reg)?;
        if r.len() != 1 {
            return Err(QsimError::RegisterWidth {
                name: reg.to_string(),
                width: r.len(),
                needed: 1,
            });
        }
        if !b {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(s, a)| (s.clone(), if s.get(r.start) { -*a } else { *a }))
            .collect();
        Ok(SparseState {
            layout: self.layout.clone(),
            terms,
            cap: self.cap,
        })
    }

    /// Multiplies each branch by `phase(branch)`; `phase` must return unit
    /// modulus values.
    pub fn apply_diagonal<F>(&self, phase: F) -> Result<SparseState, QsimError>
    where
        F: Fn(&BitString) -> Complex64,
    {
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            let p = phase(s);
            if (p.norm() - 1.0).abs() > NORM_TOLERANCE {
                return Err(QsimError::NotUnitary((p.norm() - 1.0).abs()));
            }
            terms.insert(s.clone(), a * p);
        }
        Self::from_map(self.layout.clone(), terms, self.cap)
    }

    /// Applies a dense `2^w × 2^w` unitary to register `reg` (row/column
    /// index = register value read with bit 0 most significant).
    pub fn apply_register_unitary(
        &self,
        reg: &str,
        u: &DMatrix<Complex64>,
    ) -> Result<SparseState, QsimError> {
        let r = self.layout.range(reg)?;
        let dim = 1usize << r.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(QsimError::WidthMismatch {
                expected: dim,
                got: u.nrows(),
            });
        }
        check_unitary(u)?;
        let mut terms: BTreeMap<BitString, Complex64> = BTreeMap::new();
        for (s, a) in &self.terms {
            let col = s.slice(r.start, r.len()).to_index() as usize;
            for row in 0..dim {
                let c = u[(row, col)];
                if c.norm() < PRUNE_THRESHOLD {
                    continue;
                }
                let mut t = s.clone();
                t.write_at(r.start, &BitString::from_index(row as u64, r.len()));
                *terms.entry(t).or_default() += a * c;
            }
        }
        Self::from_map(self.layout.clone(), terms, self.cap)
    }

    /// Every computational-basis outcome of `reg` with its probability and
    /// the renormalized post-measurement state, in increasing outcome order.
    pub fn branches(&self, reg: &str) -> Result<Vec<(BitString, f64, SparseState)>, QsimError> {
        let r = self.layout.range(reg)?;
        let mut groups: BTreeMap<BitString, BTreeMap<BitString, Complex64>> = BTreeMap::new();
        for (s, a) in &self.terms {
            groups
                .entry(s.slice(r.start, r.len()))
                .or_default()
                .insert(s.clone(), *a);
        }
        let total = self.norm_sqr();
        groups
            .into_iter()
            .map(|(v, terms)| {
                let p = terms.values().map(|a| a.norm_sqr()).sum::<f64>() / total;
                Self::from_map(self.layout.clone(), terms, self.cap).map(|st| (v, p, st))
            })
            .collect()
    }

    /// Computational-basis measurement of one register (Born rule).
    pub fn measure_computational<R: Rng + ?Sized>(
        &self,
        reg: &str,
        rng: &mut R,
    ) -> Result<(BitString, SparseState), QsimError> {
        let mut branches = self.branches(reg)?;
        let weights: Vec<f64> = branches.iter().map(|b| b.1).collect();
        let i = sample_weighted(&weights, rng);
        let (v, _, st) = branches.swap_remove(i);
        Ok((v, st))
    }

    /// Renormalized restriction to branches where `reg` equals `value`,
    /// together with the probability of that outcome.
    pub fn postselect(&self, reg: &str, value: &BitString) -> Result<(f64, SparseState), QsimError> {
        let r = self.layout.range(reg)?;
        if value.len() != r.len() {
            return Err(QsimError::WidthMismatch {
                expected: r.len(),
                got: value.len(),
            });
        }
        let terms: BTreeMap<BitString, Complex64> = self
            .terms
            .iter()
            .filter(|(s, _)| s.slice(r.start, r.len()) == *value)
            .map(|(s, a)| (s.clone(), *a))
            .collect();
        let p = terms.values().map(|a| a.norm_sqr()).sum::<f64>() / self.norm_sqr();
        Ok((p, Self::from_map(self.layout.clone(), terms, self.cap)?))
    }

    /// Debug text dump: one line per term,
    /// `<re as f64 bits in hex> <im as f64 bits in hex> <bitstring>`.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        for (s, a) in &self.terms {
            let _ = writeln!(out, "{:016x} {:016x} {}", a.re.to_bits(), a.im.to_bits(), s);
        }
        out
    }

    /// Inverse of [`dump_text`](Self::dump_text). Amplitudes are taken
    /// verbatim and then renormalized.
    pub fn parse_text(layout: RegisterLayout, text: &str) -> Result<SparseState, QsimError> {
        let mut terms = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split_whitespace();
            let mut word = |what: &str| {
                parts
                    .next()
                    .ok_or_else(|| QsimError::Parse(format!("missing {what} in {line:?}")))
            };
            let re = u64::from_str_radix(word("real part")?, 16)
                .map_err(|e| QsimError::Parse(e.to_string()))?;
            let im = u64::from_str_radix(word("imaginary part")?, 16)
                .map_err(|e| QsimError::Parse(e.to_string()))?;
            let s: BitString = word("bitstring")?.parse()?;
            terms.push((s, Complex64::new(f64::from_bits(re), f64::from_bits(im))));
        }
        Self::superpose(layout, terms)
    }
}

pub(crate) fn check_unitary(u: &DMatrix<Complex64>) -> Result<(), QsimError> {
    if u.nrows() != u.ncols() {
        return Err(QsimError::NotUnitary(f64::INFINITY));
    }
    let prod = u.adjoint() * u;
    let dev = (prod - DMatrix::<Complex64>::identity(u.nrows(), u.ncols()))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if dev > NORM_TOLERANCE {
        return Err(QsimError::NotUnitary(dev));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::rng::DetRng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn layout(regs: &[(&str, usize)]) -> RegisterLayout {
        RegisterLayout::new(regs).unwrap()
    }

    #[test]
    fn basis_state_has_single_unit_term() {
        let s = SparseState::basis(layout(&[("A", 1), ("B", 2)]), bits("011")).unwrap();
        assert_eq!(s.support_size(), 1);
        assert_eq!(s.amplitude(&bits("011")), c(1.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(SparseState::basis(layout(&[("A", 1)]), bits("01")).is_err());
    }

    #[test]
    fn superpose_normalizes_and_merges() {
        let l = layout(&[("A", 1)]);
        let s = SparseState::superpose(l.clone(), [(bits("0"), c(1.0)), (bits("1"), c(-1.0))]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(&bits("0")) - c(h)).norm() < 1e-12);
        assert!((s.amplitude(&bits("1")) + c(h)).norm() < 1e-12);
        let m = SparseState::superpose(l.clone(), [(bits("0"), c(1.0)), (bits("0"), c(1.0))]).unwrap();
        assert_eq!(m.support_size(), 1);
        assert!((m.amplitude(&bits("0")) - c(1.0)).norm() < 1e-12);
        assert_eq!(
            SparseState::superpose(l.clone(), []).unwrap_err(),
            QsimError::EmptySuperposition
        );
        assert_eq!(
            SparseState::superpose(l, [(bits("0"), c(0.0))]).unwrap_err(),
            QsimError::ZeroNorm
        );
    }

    #[test]
    fn coherent_eval_xor_writes_and_is_reversible() {
        let s = SparseState::superpose(
            layout(&[("A", 1), ("B", 3)]),
            [(bits("0101"), c(1.0)), (bits("1110"), c(1.0))],
        )
        .unwrap()
        .add_register("D", 1)
        .unwrap();
        let f = |x: &BitString| BitString::from_bits([x.count_ones() % 2 == 0]);
        let once = s.coherent_eval(&["A", "B"], "D", f).unwrap();
        assert_eq!(once.support_size(), 2);
        assert!(once.amplitude(&bits("01011")).norm() > 0.7);
        assert!(once.amplitude(&bits("11100")).norm() > 0.7);
        let twice = once.coherent_eval(&["A", "B"], "D", f).unwrap();
        assert!(twice.approx_eq(&s, 1e-12));
        assert!(s.coherent_eval(&["A"], "E", f).is_err());
        assert!(s
            .coherent_eval(&["A"], "D", |_| BitString::zeros(2))
            .is_err());
    }

    #[test]
    fn z_power() {
        let s = SparseState::superpose(
            layout(&[("A", 1), ("B", 1)]),
            [(bits("00"), c(1.0)), (bits("11"), c(1.0))],
        )
        .unwrap();
        assert_eq!(s.apply_z_power("A", false).unwrap(), s);
        let z = s.apply_z_power("A", true).unwrap();
        assert!(z.amplitude(&bits("11")).re < 0.0);
        assert!(z.apply_z_power("A", true).unwrap().approx_eq(&s, 1e-12));
        let wide = SparseState::basis(layout(&[("B", 2)]), bits("00")).unwrap();
        assert!(wide.apply_z_power("B", true).is_err());
    }

    #[test]
    fn deterministic_collapse_and_born_rule() {
        let mut rng = DetRng::from_seed(3);
        let s = SparseState::basis(layout(&[("A", 2)]), bits("10")).unwrap();
        for _ in 0..10 {
            assert_eq!(s.measure_computational("A", &mut rng).unwrap().0, bits("10"));
        }
        let plus = SparseState::superpose(layout(&[("A", 1)]), [(bits("0"), c(1.0)), (bits("1"), c(1.0))])
            .unwrap();
        let n = 100_000;
        let zeros = (0..n)
            .filter(|_| !plus.measure_computational("A", &mut rng).unwrap().0.get(0))
            .count();
        assert!((zeros as f64 / n as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn drop_register_requires_product() {
        let s = SparseState::superpose(
            layout(&[("A", 1), ("D", 1)]),
            [(bits("01"), c(1.0)), (bits("11"), c(1.0))],
        )
        .unwrap();
        let (v, rest) = s.drop_register("D").unwrap();
        assert_eq!(v, bits("1"));
        assert_eq!(rest.width(), 1);
        assert!(matches!(s.drop_register("A"), Err(QsimError::Entangled(_))));
    }

    #[test]
    fn text_dump_round_trips() {
        let s = SparseState::superpose(
            layout(&[("A", 1), ("B", 2)]),
            [(bits("001"), Complex64::new(0.3, -0.1)), (bits("110"), c(0.7))],
        )
        .unwrap();
        let back = SparseState::parse_text(s.layout().clone(), &s.dump_text()).unwrap();
        assert_eq!(back.support_size(), 2);
        for (t, a) in s.terms() {
            assert!((back.amplitude(t) - a).norm() < 1e-15);
        }
    }

    #[test]
    fn support_cap_enforced() {
        let l = layout(&[("A", 4)]);
        let terms = (0..16).map(|i| (BitString::from_index(i, 4), c(1.0)));
        let s = SparseState::superpose(l, terms).unwrap();
        assert!(s.clone().with_cap(8).is_err());
        assert_eq!(s.with_cap(16).unwrap().cap(), 16);
    }
}
