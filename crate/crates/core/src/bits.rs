use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Fixed-length bit sequence, indexed from 0.
///
/// Integer conversions are big-endian: bit 0 is the most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let bits = (0..len)
            .map(|i| (value >> (len - 1 - i)) & 1 == 1)
            .collect();
        Self { bits }
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64, "bit string too long for u64");
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, b: bool) {
        self.bits[i] = b;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_vec(self) -> Vec<bool> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Substring `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    pub fn extend(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn resized(&self, len: usize) -> Self {
        let mut bits = self.bits.clone();
        bits.resize(len, false);
        Self { bits }
    }

    pub fn xor(&self, other: &BitString) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::shape(format!(
                "xor of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Parse a string of `0`/`1` characters.
    pub fn parse_binary(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    1,
                    format!("unexpected character {other:?} in bit string"),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    /// Truth-table text form `tt <len> <hex>`, most significant nibble first,
    /// trailing pad bits zero.
    pub fn to_tt(&self) -> String {
        let mut hex = String::with_capacity(self.len().div_ceil(4));
        for chunk in self.bits.chunks(4) {
            let mut nib = 0u32;
            for i in 0..4 {
                nib = (nib << 1) | chunk.get(i).copied().unwrap_or(false) as u32;
            }
            hex.push(char::from_digit(nib, 16).unwrap());
        }
        if hex.is_empty() {
            format!("tt {}", self.len())
        } else {
            format!("tt {} {}", self.len(), hex)
        }
    }

    pub fn from_tt(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        if tokens.next() != Some("tt") {
            return Err(Error::parse(1, "expected `tt <len> <hex>`"));
        }
        let len: usize = tokens
            .next()
            .ok_or_else(|| Error::parse(1, "missing length"))?
            .parse()
            .map_err(|_| Error::parse(1, "bad length"))?;
        let hex = tokens.next().unwrap_or("");
        if tokens.next().is_some() {
            return Err(Error::parse(1, "trailing tokens after hex payload"));
        }
        if hex.len() != len.div_ceil(4) {
            return Err(Error::parse(
                1,
                format!(
                    "expected {} hex digits, found {}",
                    len.div_ceil(4),
                    hex.len()
                ),
            ));
        }
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::parse(1, format!("bad hex digit {c:?}")))?;
            for i in (0..4).rev() {
                bits.push((nib >> i) & 1 == 1);
            }
        }
        if bits[len..].iter().any(|&b| b) {
            return Err(Error::parse(1, "nonzero pad bits"));
        }
        bits.truncate(len);
        Ok(Self { bits })
    }
}

impl Index<usize> for BitString {
    type Output = bool;

    fn index(&self, i: usize) -> &bool {
        &self.bits[i]
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_binary(s)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Read access to a long bit string that may never be materialized.
pub trait BitOracle {
    fn len(&self) -> u64;

    fn bit(&self, i: u64) -> Result<bool>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl BitOracle for BitString {
    fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    fn bit(&self, i: u64) -> Result<bool> {
        self.bits.get(i as usize).copied().ok_or_else(|| {
            Error::shape(format!(
                "bit index {i} out of range for length {}",
                self.bits.len()
            ))
        })
    }
}

/// Counts bit reads made through it.
pub struct CountingOracle<'a> {
    inner: &'a dyn BitOracle,
    reads: std::cell::Cell<u64>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn BitOracle) -> Self {
        Self {
            inner,
            reads: std::cell::Cell::new(0),
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads.get()
    }
}

impl BitOracle for CountingOracle<'_> {
    fn len(&self) -> u64 {
        self.inner.len()
    }

    fn bit(&self, i: u64) -> Result<bool> {
        self.reads.set(self.reads.get() + 1);
        self.inner.bit(i)
    }
}

/// Number of bits needed to write values `0..x`, i.e. ceil(log2 x), with
/// `ceil_log2(1) = 0`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x > 0);
    64 - (x - 1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tt_roundtrip_with_padding() {
        let b: BitString = "10110".parse().unwrap();
        assert_eq!(b.to_tt(), "tt 5 b0");
        assert_eq!(BitString::from_tt("tt 5 b0").unwrap(), b);
        assert!(BitString::from_tt("tt 5 b4").is_err());
        assert_eq!(BitString::from_tt("tt 0").unwrap(), BitString::new());
    }

    #[test]
    fn integer_conversion_is_big_endian() {
        let b = BitString::from_u64(6, 4);
        assert_eq!(b.to_string(), "0110");
        assert_eq!(b.to_u64(), 6);
    }

    #[test]
    fn ceil_log2_small_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }
}
