//! Canonical binary encoding shared by keys and ciphertexts.
//!
//! Every variable-size field is a 32-bit little-endian length followed by its
//! payload. Bit strings use their bit length as the prefix, followed by
//! `⌈len/8⌉` packed bytes (bit `j` in byte `j / 8`, position `j % 8`).
//! Optional values and ⊥-able ciphertexts start with a tag byte:
//! `0x00` absent/⊥, `0x01` present.

use qsim::BitString;

use crate::error::{Error, Result};

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.u32(b.len() as u32);
        self.buf.extend_from_slice(b);
        self
    }

    pub fn bits(&mut self, b: &BitString) -> &mut Self {
        self.u32(b.len() as u32);
        self.buf.extend_from_slice(&b.to_bytes());
        self
    }

    pub fn put<T: Wire>(&mut self, v: &T) -> &mut Self {
        v.write(self);
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Wire(format!(
                "need {n} bytes at offset {}, have {}",
                self.pos,
                self.buf.len() - self.pos
            )));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub fn bytes(&mut self) -> Result<Vec<u8>> {
        let n = self.u32()? as usize;
        Ok(self.take(n)?.to_vec())
    }

    pub fn bits(&mut self) -> Result<BitString> {
        let n = self.u32()? as usize;
        let raw = self.take(n.div_ceil(8))?;
        BitString::from_bytes(raw, n).map_err(|e| Error::Wire(e.to_string()))
    }

    pub fn get<T: Wire>(&mut self) -> Result<T> {
        T::read(self)
    }

    pub fn tag(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            t => Err(Error::Wire(format!("bad tag byte {t:#04x}"))),
        }
    }

    pub fn is_done(&self) -> bool {
        self.pos == self.buf.len()
    }
}

pub trait Wire: Sized {
    fn write(&self, w: &mut Writer);
    fn read(r: &mut Reader<'_>) -> Result<Self>;

    fn to_wire(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.finish()
    }

    /// Parses a complete buffer; trailing bytes are an error.
    fn from_wire(buf: &[u8]) -> Result<Self> {
        let mut r = Reader::new(buf);
        let v = Self::read(&mut r)?;
        if !r.is_done() {
            return Err(Error::Wire("trailing bytes".into()));
        }
        Ok(v)
    }
}

impl Wire for BitString {
    fn write(&self, w: &mut Writer) {
        w.bits(self);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.bits()
    }
}

impl Wire for bool {
    fn write(&self, w: &mut Writer) {
        w.u8(*self as u8);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.tag()
    }
}

impl Wire for u64 {
    fn write(&self, w: &mut Writer) {
        w.u64(*self);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.u64()
    }
}

impl<T: Wire> Wire for Vec<T> {
    fn write(&self, w: &mut Writer) {
        w.u32(self.len() as u32);
        for v in self {
            v.write(w);
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.u32()? as usize;
        (0..n).map(|_| T::read(r)).collect()
    }
}

impl<T: Wire> Wire for Option<T> {
    fn write(&self, w: &mut Writer) {
        match self {
            None => {
                w.u8(0);
            }
            Some(v) => {
                w.u8(1);
                v.write(w);
            }
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        if r.tag()? {
            Ok(Some(T::read(r)?))
        } else {
            Ok(None)
        }
    }
}

impl<A: Wire, B: Wire> Wire for (A, B) {
    fn write(&self, w: &mut Writer) {
        self.0.write(w);
        self.1.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok((A::read(r)?, B::read(r)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsim::bits;

    #[test]
    fn round_trips() {
        let v: Vec<Option<BitString>> = vec![Some(bits("1011")), None, Some(BitString::empty())];
        assert_eq!(Vec::<Option<BitString>>::from_wire(&v.to_wire()).unwrap(), v);
        let b = bits("1");
        assert_eq!(b.to_wire(), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn rejects_truncation_and_trailing() {
        let enc = bits("10110011101").to_wire();
        assert!(BitString::from_wire(&enc[..enc.len() - 1]).is_err());
        let mut longer = enc.clone();
        longer.push(0);
        assert!(BitString::from_wire(&longer).is_err());
        assert!(Option::<BitString>::from_wire(&[7]).is_err());
    }
}
