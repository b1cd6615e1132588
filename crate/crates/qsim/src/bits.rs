//! Fixed-length bit strings with GF(2) arithmetic.
//!
//! Bit `0` is the leftmost bit when displayed. Internally bit `j` lives in
//! word `j / 64` at position `j % 64`, so the byte serialization (bit `j` in
//! byte `j / 8` at position `j % 8`) is a plain little-endian dump of the
//! words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::QsimError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = BitString {
            len,
            words: vec![u64::MAX; word_count(len)],
        };
        s.clear_tail();
        s
    }

    pub fn empty() -> Self {
        Self::zeros(0)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = BitString {
            len,
            words: (0..word_count(len)).map(|_| rng.gen::<u64>()).collect(),
        };
        s.clear_tail();
        s
    }

    /// Builds a string from `bools`, first element becoming bit 0.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        BitString { len, words }
    }

    /// Reads `len` bits from LSB-first packed bytes. Extra bytes or stray
    /// high bits in the final byte are rejected.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self, QsimError> {
        if bytes.len() != len.div_ceil(8) {
            return Err(QsimError::WidthMismatch {
                expected: len.div_ceil(8) * 8,
                got: bytes.len() * 8,
            });
        }
        let mut words = vec![0u64; word_count(len)];
        for (i, &byte) in bytes.iter().enumerate() {
            words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        let s = BitString { len, words };
        let mut check = s.clone();
        check.clear_tail();
        if check != s {
            return Err(QsimError::Parse("nonzero padding bits".into()));
        }
        Ok(s)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push((self.words[i / 8] >> (8 * (i % 8))) as u8);
        }
        out
    }

    /// `index` read as a `len`-bit binary number, bit 0 most significant.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "index form limited to 64 bits");
        BitString::from_bits((0..len).map(|j| (index >> (len - 1 - j)) & 1 == 1))
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "index form limited to 64 bits");
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first set bit, scanning from bit 0.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString, QsimError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &BitString) -> Result<(), QsimError> {
        self.check_len(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn and(&self, other: &BitString) -> Result<BitString, QsimError> {
        self.check_len(other)?;
        Ok(BitString {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitString) -> Result<bool, QsimError> {
        self.check_len(other)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out.write_at(self.len, other);
        out
    }

    pub fn concat_all<'a, I: IntoIterator<Item = &'a BitString>>(parts: I) -> BitString {
        let parts: Vec<&BitString> = parts.into_iter().collect();
        let total = parts.iter().map(|p| p.len).sum();
        let mut out = BitString::zeros(total);
        let mut at = 0;
        for p in parts {
            out.write_at(at, p);
            at += p.len;
        }
        out
    }

    /// Bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitString {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitString::zeros(len);
        let (w0, o) = (start / 64, start % 64);
        for (k, word) in out.words.iter_mut().enumerate() {
            let w = w0 + k;
            let mut v = self.words[w] >> o;
            if o > 0 && w + 1 < self.words.len() {
                v |= self.words[w + 1] << (64 - o);
            }
            *word = v;
        }
        out.clear_tail();
        out
    }

    /// Writes the low `count` bits of `v` at bit position `at`.
    fn write_word(&mut self, at: usize, v: u64, count: usize) {
        let (w, o) = (at / 64, at % 64);
        let mask = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
        let v = v & mask;
        self.words[w] = (self.words[w] & !(mask << o)) | (v << o);
        if o + count > 64 {
            let hi = mask >> (64 - o);
            self.words[w + 1] = (self.words[w + 1] & !hi) | (v >> (64 - o));
        }
    }

    /// Overwrites bits `at..at + src.len()` with `src`.
    pub fn write_at(&mut self, at: usize, src: &BitString) {
        assert!(at + src.len <= self.len, "write out of range");
        for (k, &v) in src.words.iter().enumerate() {
            let count = (src.len - k * 64).min(64);
            self.write_word(at + k * 64, v, count);
        }
    }

    fn check_len(&self, other: &BitString) -> Result<(), QsimError> {
        if self.len != other.len {
            return Err(QsimError::WidthMismatch {
                expected: self.len,
                got: other.len,
            });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

/// Shorter strings sort first; equal lengths compare lexicographically in
/// display order.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                match a.reverse_bits().cmp(&b.reverse_bits()) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "BitString({self})")
        } else {
            write!(f, "BitString(len={}, {}…)", self.len, self.slice(0, 32))
        }
    }
}

impl FromStr for BitString {
    type Err = QsimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(QsimError::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bits)
    }
}

/// Parses a literal bit string; panics on bad input. Test and example helper.
pub fn bits(s: &str) -> BitString {
    s.parse().expect("valid bit string literal")
}
