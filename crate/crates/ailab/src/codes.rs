//! Self-delimiting integer codes, condition packing, and the Λ record codec.
//!
//! The integer code doubles every bit of the minimal binary representation and
//! appends the terminator pair `01`. It satisfies `|SD(d)| = 2⌊log₂ d⌋ + 4`
//! for `d ≥ 1` and `|SD(0)| = 4`, and its image is prefix-free.

use thiserror::Error;

use crate::bits::Bits;

#[derive(Debug, Error, PartialEq, Eq, Clone, Copy)]
pub enum CodeError {
    /// A pair `10` was read where a digit or terminator pair was expected.
    #[error("malformed pair in self-delimiting code")]
    MalformedPair,
    /// The input ended before the code was complete, or the terminator came
    /// before any digit pair.
    #[error("unexpected end of self-delimiting code")]
    UnexpectedEnd,
    /// Bits remained after the last expected item.
    #[error("trailing bits after the last item")]
    TrailingBits,
}

/// Encoded length of `sd_encode(d)` without materializing it.
pub fn sd_len(d: u64) -> usize {
    2 * Bits::bin(d).len() + 2
}

pub fn sd_encode(d: u64) -> Bits {
    let bin = Bits::bin(d);
    let mut out = Bits::with_capacity(2 * bin.len() + 2);
    for b in bin.iter() {
        out.push(b);
        out.push(b);
    }
    out.push(0);
    out.push(1);
    out
}

/// Reads one self-delimited integer from the front of `bits`.
///
/// Returns the value and the number of bits consumed so callers can continue
/// reading. Digit strings with leading zeros are accepted (they decode to the
/// same value); the image of `sd_encode` always uses the minimal form.
pub fn sd_decode(bits: &Bits) -> Result<(u64, usize), CodeError> {
    let mut value: u64 = 0;
    let mut digits = 0usize;
    let mut pos = 0usize;
    loop {
        let (a, b) = match (bits.get(pos), bits.get(pos + 1)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(CodeError::UnexpectedEnd),
        };
        pos += 2;
        match (a, b) {
            (0, 0) => {
                value <<= 1;
                digits += 1;
            }
            (1, 1) => {
                value = (value << 1) | 1;
                digits += 1;
            }
            (0, 1) => {
                if digits == 0 {
                    return Err(CodeError::UnexpectedEnd);
                }
                return Ok((value, pos));
            }
            _ => return Err(CodeError::MalformedPair),
        }
        if digits > 63 {
            return Err(CodeError::MalformedPair);
        }
    }
}

/// Packs an ordered list of condition items into a single string.
///
/// A single item packs as itself, so small conditional complexities keep their
/// natural COPY witnesses. Two or more items pack as `SD(|item|)·item` each.
pub fn pack_condition(items: &[Bits]) -> Bits {
    match items {
        [] => Bits::new(),
        [only] => only.clone(),
        many => {
            let mut out = Bits::new();
            for item in many {
                out.extend(&sd_encode(item.len() as u64));
                out.extend(item);
            }
            out
        }
    }
}

/// Exact inverse of `pack_condition` given the item count.
pub fn unpack_condition(bits: &Bits, count: usize) -> Result<Vec<Bits>, CodeError> {
    match count {
        0 => {
            if bits.is_empty() {
                Ok(Vec::new())
            } else {
                Err(CodeError::TrailingBits)
            }
        }
        1 => Ok(vec![bits.clone()]),
        _ => {
            let mut items = Vec::with_capacity(count);
            let mut pos = 0usize;
            for _ in 0..count {
                let rest = bits.slice(pos, bits.len());
                let (len, used) = sd_decode(&rest)?;
                pos += used;
                let len = len as usize;
                if pos + len > bits.len() {
                    return Err(CodeError::UnexpectedEnd);
                }
                items.push(bits.slice(pos, pos + len));
                pos += len;
            }
            if pos != bits.len() {
                return Err(CodeError::TrailingBits);
            }
            Ok(items)
        }
    }
}

/// The §-style header tuple: length gap, the two complexity terms, the
/// deficiency, and the length-order bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaRecord {
    pub delta_n: u64,
    pub t_x: u64,
    pub t_y: u64,
    pub w: u64,
    /// 1 iff `n_x > n_y`.
    pub b: bool,
}

pub fn encode_lambda(r: &LambdaRecord) -> Bits {
    let mut out = sd_encode(r.delta_n);
    out.extend(&sd_encode(r.t_x));
    out.extend(&sd_encode(r.t_y));
    out.extend(&sd_encode(r.w));
    out.push(r.b as u8);
    out
}

pub fn decode_lambda(bits: &Bits) -> Result<(LambdaRecord, usize), CodeError> {
    let mut pos = 0usize;
    let field = |pos: &mut usize| -> Result<u64, CodeError> {
        let rest = bits.slice(*pos, bits.len());
        let (v, used) = sd_decode(&rest)?;
        *pos += used;
        Ok(v)
    };
    let delta_n = field(&mut pos)?;
    let t_x = field(&mut pos)?;
    let t_y = field(&mut pos)?;
    let w = field(&mut pos)?;
    let b = match bits.get(pos) {
        Some(b) => b == 1,
        None => return Err(CodeError::UnexpectedEnd),
    };
    pos += 1;
    Ok((LambdaRecord { delta_n, t_x, t_y, w, b }, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    #[test]
    fn sd_examples() {
        assert_eq!(sd_encode(0), bits("0001"));
        assert_eq!(sd_encode(2), bits("110001"));
        assert_eq!(sd_encode(5), bits("11001101"));
        assert_eq!(sd_encode(5).len(), 8);
    }

    #[test]
    fn sd_decode_examples() {
        assert_eq!(sd_decode(&bits("11001101")), Ok((5, 8)));
        assert_eq!(sd_decode(&bits("0001111")), Ok((0, 4)));
        assert_eq!(sd_decode(&bits("1011")), Err(CodeError::MalformedPair));
        assert_eq!(sd_decode(&bits("11")), Err(CodeError::UnexpectedEnd));
        // terminator before any digit
        assert_eq!(sd_decode(&bits("01")), Err(CodeError::UnexpectedEnd));
    }

    #[test]
    fn sd_round_trip_exhaustive_small() {
        for d in 0..=1u64 << 14 {
            let e = sd_encode(d);
            assert_eq!(sd_decode(&e), Ok((d, e.len())));
            assert_eq!(e.len(), sd_len(d));
        }
    }

    #[test]
    fn sd_length_bound() {
        for d in 1..=4096u64 {
            let log = 63 - d.leading_zeros() as usize;
            assert!(sd_encode(d).len() <= 2 * log + 4, "bound fails at d={d}");
        }
        assert_eq!(sd_encode(0).len(), 4);
    }

    #[test]
    fn sd_image_is_prefix_free() {
        // pairwise over d, d' <= 2^8 here; the acceptance suite pushes to 2^12
        let encs: Vec<Bits> = (0..=256u64).map(sd_encode).collect();
        for (i, a) in encs.iter().enumerate() {
            for (j, b) in encs.iter().enumerate() {
                if i != j {
                    assert!(!a.is_proper_prefix_of(b), "SD({i}) prefixes SD({j})");
                }
            }
        }
    }

    #[test]
    fn pack_examples() {
        assert_eq!(pack_condition(&[bits("01")]), bits("01"));
        assert_eq!(
            pack_condition(&[bits("01"), bits("1")]),
            bits("1100010111011")
        );
        assert_eq!(pack_condition(&[]), Bits::new());
    }

    #[test]
    fn unpack_examples() {
        assert_eq!(
            unpack_condition(&bits("1100010111011"), 2),
            Ok(vec![bits("01"), bits("1")])
        );
        assert_eq!(unpack_condition(&bits("01"), 1), Ok(vec![bits("01")]));
        assert_eq!(
            unpack_condition(&bits("01"), 2),
            Err(CodeError::UnexpectedEnd)
        );
        assert_eq!(
            unpack_condition(&bits("1"), 0),
            Err(CodeError::TrailingBits)
        );
    }

    #[test]
    fn lambda_examples() {
        let r = LambdaRecord { delta_n: 0, t_x: 6, t_y: 6, w: 2, b: false };
        let e = encode_lambda(&r);
        assert_eq!(e, bits("000111110001111100011100010"));
        assert_eq!(e.len(), 27); // 4 + 8 + 8 + 6 + 1
        assert_eq!(decode_lambda(&e), Ok((r, 27)));

        let small = LambdaRecord { delta_n: 0, t_x: 0, t_y: 0, w: 1, b: false };
        let e = encode_lambda(&small);
        assert_eq!(e.len(), 17);
        assert_eq!(e, bits("00010001000111010"));
    }

    #[test]
    fn lambda_truncated() {
        let r = LambdaRecord { delta_n: 3, t_x: 10, t_y: 9, w: 4, b: true };
        let e = encode_lambda(&r);
        let cut = e.slice(0, e.len() - 1);
        assert_eq!(decode_lambda(&cut), Err(CodeError::UnexpectedEnd));
        // trailing bits are left for the caller
        let with_tail = e.concat(&bits("0101"));
        assert_eq!(decode_lambda(&with_tail), Ok((r, e.len())));
    }

    #[test]
    fn lambda_length_bound() {
        // λ ≤ 2 log₂ w + 2 log₂ t_x + 2 log₂ t_y + 2 log₂ delta_n + 17,
        // with log 0 treated as 0
        let log = |v: u64| if v == 0 { 0 } else { 63 - v.leading_zeros() as usize };
        for &(d, tx, ty, w) in &[(0u64, 6u64, 6u64, 2u64), (3, 10, 9, 4), (0, 0, 0, 1), (7, 20, 18, 12)] {
            let r = LambdaRecord { delta_n: d, t_x: tx, t_y: ty, w, b: true };
            let lambda = encode_lambda(&r).len();
            assert!(lambda <= 2 * (log(w) + log(tx) + log(ty) + log(d)) + 17);
        }
    }

    proptest! {
        #[test]
        fn sd_round_trip(d in 0u64..=1 << 20) {
            let e = sd_encode(d);
            prop_assert_eq!(sd_decode(&e), Ok((d, e.len())));
        }

        #[test]
        fn pack_unpack_round_trip(items in prop::collection::vec(
            prop::collection::vec(0u8..=1, 0..8), 0..5)
        ) {
            let items: Vec<Bits> = items
                .into_iter()
                .map(|v| {
                    let mut b = Bits::new();
                    for bit in v { b.push(bit); }
                    b
                })
                .collect();
            let packed = pack_condition(&items);
            prop_assert_eq!(unpack_condition(&packed, items.len()), Ok(items));
        }

        #[test]
        fn lambda_round_trip(delta_n in 0u64..64, t_x in 0u64..64, t_y in 0u64..64,
                             w in 1u64..64, b in any::<bool>()) {
            let r = LambdaRecord { delta_n, t_x, t_y, w, b };
            let e = encode_lambda(&r);
            prop_assert_eq!(decode_lambda(&e), Ok((r, e.len())));
        }
    }
}
