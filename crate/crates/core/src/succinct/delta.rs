//! Elias δ-code over naturals.
//!
//! δ only encodes positive integers, so every value `x` is written as
//! `δ(x + 1)`. A codeword for `n` is the γ-code of `bitlen(n)` followed by
//! the `bitlen(n) - 1` low bits of `n`.

use crate::error::{Error, Result};
use crate::succinct::bits::{BitReader, BitVec};

/// Appends `δ(x + 1)`.
pub fn write_delta(out: &mut BitVec, x: u64) {
    assert!(x < u64::MAX, "delta code takes values below u64::MAX");
    let n = x + 1;
    let len = 64 - n.leading_zeros();
    let len_len = 32 - len.leading_zeros();
    out.write_bits(0, len_len - 1);
    out.write_bits(len as u64, len_len);
    out.write_bits(n, len - 1);
}

/// Number of bits `write_delta(x)` emits.
pub fn delta_len(x: u64) -> usize {
    let n = x + 1;
    let len = 64 - n.leading_zeros();
    let len_len = 32 - len.leading_zeros();
    (2 * len_len - 1 + len - 1) as usize
}

/// Anything codewords can be read from.
pub trait BitSource {
    fn read_bit(&mut self) -> Result<bool>;
    fn read_bits(&mut self, width: u32) -> Result<u64>;

    fn read_delta(&mut self) -> Result<u64> {
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 6 {
                return Err(Error::corrupt("delta code length prefix too long"));
            }
        }
        let len = ((1u64 << zeros) | self.read_bits(zeros)?) as u32;
        if len > 64 {
            return Err(Error::corrupt("delta code wider than 64 bits"));
        }
        let n = (1u64 << (len - 1)) | self.read_bits(len - 1)?;
        Ok(n - 1)
    }
}

impl BitSource for BitReader<'_> {
    fn read_bit(&mut self) -> Result<bool> {
        BitReader::read_bit(self)
    }

    fn read_bits(&mut self, width: u32) -> Result<u64> {
        BitReader::read_bits(self, width)
    }
}

/// Reads codewords from an in-memory bit vector.
pub struct BitCursor<'a> {
    bits: &'a BitVec,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    pub fn new(bits: &'a BitVec) -> Self {
        BitCursor { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn is_at_end(&self) -> bool {
        self.pos >= self.bits.len()
    }
}

impl BitSource for BitCursor<'_> {
    fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.bits.len() {
            return Err(Error::Truncated);
        }
        self.pos += 1;
        Ok(self.bits.get(self.pos - 1))
    }

    fn read_bits(&mut self, width: u32) -> Result<u64> {
        if self.pos + width as usize > self.bits.len() {
            return Err(Error::Truncated);
        }
        self.pos += width as usize;
        Ok(self.bits.get_bits(self.pos - width as usize, width))
    }
}

/// Concatenated δ codewords with an exact bit length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaStream {
    bits: BitVec,
}

impl DeltaStream {
    pub fn encode<I: IntoIterator<Item = u64>>(xs: I) -> Self {
        let mut bits = BitVec::new();
        for x in xs {
            write_delta(&mut bits, x);
        }
        DeltaStream { bits }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        DeltaStream { bits }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn len_bits(&self) -> usize {
        self.bits.len()
    }

    /// Decodes codewords until exactly the stream's bit length is consumed.
    pub fn decode(&self) -> Result<Vec<u64>> {
        let mut cur = BitCursor::new(&self.bits);
        let mut out = Vec::new();
        while !cur.is_at_end() {
            out.push(cur.read_delta()?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Textbook δ(n) built from binary strings.
    fn delta_oracle(n: u64) -> String {
        let bin = format!("{n:b}");
        let len_bin = format!("{:b}", bin.len());
        format!("{}{}{}", "0".repeat(len_bin.len() - 1), len_bin, &bin[1..])
    }

    fn bit_string(bv: &BitVec) -> String {
        bv.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    #[test]
    fn shifted_codewords() {
        assert_eq!(bit_string(DeltaStream::encode([0]).bits()), "1");
        assert_eq!(bit_string(DeltaStream::encode([2]).bits()), "0101");
        assert_eq!(bit_string(DeltaStream::encode([1]).bits()), "0100");
        for x in 0..5000u64 {
            let s = DeltaStream::encode([x]);
            assert_eq!(bit_string(s.bits()), delta_oracle(x + 1), "x = {x}");
            assert_eq!(s.len_bits(), delta_len(x));
        }
    }

    #[test]
    fn round_trip_small() {
        let s = DeltaStream::encode([0, 1, 2, 7]);
        assert_eq!(s.decode().unwrap(), vec![0, 1, 2, 7]);
    }

    #[test]
    fn truncated_stream() {
        let s = DeltaStream::encode([1000]);
        let mut bits = s.bits().clone();
        let mut cut = BitVec::new();
        for i in 0..bits.len() - 1 {
            cut.push(bits.get(i));
        }
        assert!(matches!(DeltaStream::from_bits(cut).decode(), Err(Error::Truncated)));
        bits.push(false);
        assert!(DeltaStream::from_bits(bits).decode().is_err());
    }

    #[test]
    fn extreme_values() {
        let xs = [u64::MAX - 1, 1 << 40, 0];
        let s = DeltaStream::encode(xs);
        assert_eq!(s.decode().unwrap(), xs);
        let bytes = s.bits().to_bytes();
        let mut r = BitReader::new(&bytes);
        for x in xs {
            assert_eq!(r.read_delta().unwrap(), x);
        }
    }

    proptest! {
        #[test]
        fn self_delimiting(xs in proptest::collection::vec(0u64..1 << 50, 0..200)) {
            let s = DeltaStream::encode(xs.iter().copied());
            prop_assert_eq!(s.decode().unwrap(), xs.clone());
            let expected: usize = xs.iter().map(|&x| delta_len(x)).sum();
            prop_assert_eq!(s.len_bits(), expected);
        }
    }
}
