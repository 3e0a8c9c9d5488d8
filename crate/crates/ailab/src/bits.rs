//! Finite bit strings, the universal currency of the lab.
//!
//! Bits are stored MSB-first, one bit per byte, never byte-padded. Ordering is
//! lexicographic, which on fixed-length strings coincides with numeric order,
//! so canonical enumerations are just `0..2^n`.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits(Vec<u8>);

impl Bits {
    pub fn new() -> Self {
        Bits(Vec::new())
    }

    pub fn with_capacity(cap: usize) -> Self {
        Bits(Vec::with_capacity(cap))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn extend(&mut self, other: &Bits) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> Bits {
        Bits(self.0[start..end].to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// True iff `self` is a proper prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &Bits) -> bool {
        self.len() < other.len() && other.0[..self.len()] == self.0[..]
    }

    /// Minimal binary representation of `n`, MSB-first; `bin(0) = "0"`.
    pub fn bin(n: u64) -> Bits {
        if n == 0 {
            return Bits(vec![0]);
        }
        let width = 64 - n.leading_zeros() as usize;
        Bits::from_index(n, width)
    }

    /// Fixed-width MSB-first encoding of `value`; `value < 2^width`.
    pub fn from_index(value: u64, width: usize) -> Bits {
        debug_assert!(width == 64 || value < (1u64 << width));
        let mut v = Vec::with_capacity(width);
        for i in (0..width).rev() {
            v.push(((value >> i) & 1) as u8);
        }
        Bits(v)
    }

    /// Numeric value of the string read MSB-first. Requires `len() <= 64`.
    pub fn to_index(&self) -> u64 {
        assert!(self.len() <= 64, "bit string too long for an index");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all_of_len(n: usize) -> impl Iterator<Item = Bits> {
        assert!(n < 32, "enumeration of 2^{n} strings is not desk-scale");
        (0..1u64 << n).map(move |v| Bits::from_index(v, n))
    }

    /// Hex encoding of the bits packed MSB-first, final byte zero-padded.
    /// The bit length is not recoverable from the hex alone; callers store it.
    pub fn to_hex(&self) -> String {
        let mut s = String::new();
        for chunk in self.0.chunks(8) {
            let mut byte = 0u8;
            for (i, &b) in chunk.iter().enumerate() {
                byte |= b << (7 - i);
            }
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Option<Bits> {
        if hex.len() != len.div_ceil(8) * 2 {
            return None;
        }
        let mut v = Vec::with_capacity(len);
        for (i, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let byte = u8::from_str_radix(std::str::from_utf8(chunk).ok()?, 16).ok()?;
            for j in 0..8 {
                let pos = i * 8 + j;
                if pos < len {
                    v.push((byte >> (7 - j)) & 1);
                } else if (byte >> (7 - j)) & 1 != 0 {
                    return None; // padding bits must be zero
                }
            }
        }
        Some(Bits(v))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct ParseBitsError;

impl FromStr for Bits {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "ε" {
            return Ok(Bits::new());
        }
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => v.push(0),
                '1' => v.push(1),
                _ => return Err(ParseBitsError),
            }
        }
        Ok(Bits(v))
    }
}

/// Shorthand used throughout the tests.
pub fn bits(s: &str) -> Bits {
    s.parse().expect("literal must be a 0/1 string")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_is_minimal() {
        assert_eq!(Bits::bin(0), bits("0"));
        assert_eq!(Bits::bin(1), bits("1"));
        assert_eq!(Bits::bin(2), bits("10"));
        assert_eq!(Bits::bin(5), bits("101"));
        assert_eq!(Bits::bin(6), bits("110"));
    }

    #[test]
    fn index_round_trip() {
        for n in 0..6 {
            for (i, b) in Bits::all_of_len(n).enumerate() {
                assert_eq!(b.to_index(), i as u64);
                assert_eq!(Bits::from_index(i as u64, n), b);
            }
        }
    }

    #[test]
    fn lex_order_is_numeric_on_fixed_len() {
        let all: Vec<Bits> = Bits::all_of_len(4).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn hex_round_trip() {
        for s in ["", "0", "1", "0101", "111111111", "0000000010000000"] {
            let b = bits(s);
            assert_eq!(Bits::from_hex(b.len(), &b.to_hex()), Some(b));
        }
        // nonzero padding is rejected
        assert_eq!(Bits::from_hex(4, "01"), None);
    }

    #[test]
    fn prefix_check() {
        assert!(bits("01").is_proper_prefix_of(&bits("011")));
        assert!(!bits("01").is_proper_prefix_of(&bits("01")));
        assert!(!bits("11").is_proper_prefix_of(&bits("011")));
        assert!(Bits::new().is_proper_prefix_of(&bits("0")));
    }
}
