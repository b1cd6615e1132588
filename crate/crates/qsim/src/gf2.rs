//! Incremental GF(2) elimination over wide bit strings.

use rand::Rng;

use crate::bits::BitString;

/// Echelon basis of a span, remembering how each reduced row was formed from
/// the vectors originally accepted as basis elements.
///
/// Invariant: row `i` is the XOR of the accepted vectors selected by
/// `masks[i]`, has bit `pivots[i]` set, and has every earlier row's pivot
/// clear.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<BitString>,
    masks: Vec<u64>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: Vec::new(),
            masks: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `v` against the rows. Returns the residue and the accepted
    /// vectors combined along the way.
    fn reduce(&self, v: &BitString) -> (BitString, u64) {
        let mut t = v.clone();
        let mut mask = 0u64;
        for (i, row) in self.rows.iter().enumerate() {
            if t.get(self.pivots[i]) {
                t.xor_assign(row).expect("row width");
                mask ^= self.masks[i];
            }
        }
        (t, mask)
    }

    /// Expresses `v` as a combination of the accepted vectors, or accepts it
    /// as a new basis element if independent. The returned mask always
    /// satisfies `v = XOR of accepted[j] for j in mask`.
    pub fn insert(&mut self, v: &BitString) -> u64 {
        assert!(self.dim() < 64, "basis dimension limited to 63");
        let (t, mask) = self.reduce(v);
        match t.first_one() {
            None => mask,
            Some(pivot) => {
                let m = self.dim();
                self.rows.push(t);
                self.masks.push(mask ^ (1 << m));
                self.pivots.push(pivot);
                1 << m
            }
        }
    }

    pub fn contains(&self, v: &BitString) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Uniform `d` with `d · accepted[j] = pattern bit j` for every accepted
    /// vector `j`.
    pub fn sample_solution<R: Rng + ?Sized>(&self, pattern: u64, rng: &mut R) -> BitString {
        let mut d = BitString::random(self.width, rng);
        for i in (0..self.dim()).rev() {
            let target = (self.masks[i] & pattern).count_ones() % 2 == 1;
            let current = d.dot(&self.rows[i]).expect("row width");
            if current != target {
                d.flip(self.pivots[i]);
            }
        }
        d
    }

    /// Every solution of the pattern system, in increasing order of the free
    /// bits. Only sensible for small `width - dim`.
    pub fn all_solutions(&self, pattern: u64) -> Vec<BitString> {
        let free: Vec<usize> = (0..self.width)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        let count = 1u64 << free.len();
        (0..count)
            .map(|assign| {
                let mut d = BitString::zeros(self.width);
                for (k, &c) in free.iter().enumerate() {
                    d.set(c, (assign >> k) & 1 == 1);
                }
                for i in (0..self.dim()).rev() {
                    let target = (self.masks[i] & pattern).count_ones() % 2 == 1;
                    if d.dot(&self.rows[i]).expect("row width") != target {
                        d.flip(self.pivots[i]);
                    }
                }
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn dependent_vectors_get_combination_masks() {
        let mut b = EchelonBasis::new(4);
        assert_eq!(b.insert(&bits("1100")), 0b1);
        assert_eq!(b.insert(&bits("0110")), 0b10);
        assert_eq!(b.insert(&bits("1010")), 0b11);
        assert_eq!(b.insert(&bits("0000")), 0);
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn solutions_satisfy_pattern() {
        let mut b = EchelonBasis::new(5);
        let vs = [bits("10011"), bits("01010"), bits("11110")];
        for v in &vs {
            b.insert(v);
        }
        assert_eq!(b.dim(), 3);
        let mut rng = rand::thread_rng();
        for pattern in 0..8u64 {
            let all = b.all_solutions(pattern);
            assert_eq!(all.len(), 4);
            for d in all.iter().chain(std::iter::once(&b.sample_solution(pattern, &mut rng))) {
                for (j, v) in vs.iter().enumerate() {
                    assert_eq!(d.dot(v).unwrap(), (pattern >> j) & 1 == 1);
                }
            }
        }
    }
}
