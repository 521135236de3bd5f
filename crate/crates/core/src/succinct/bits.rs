//! Packed bit vectors, a rank/select directory on top of them, and bit-level
//! readers and writers.
//!
//! Bits are stored most-significant-bit first: bit `i` lives in word `i / 64`
//! at mask `1 << (63 - i % 64)`. Serialized byte streams use the same order,
//! so the first bit of a stream is the high bit of its first byte.

use crate::error::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = 64 * WORDS_PER_BLOCK;

#[inline]
fn mask(i: usize) -> u64 {
    1u64 << (63 - (i & 63))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] & mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        if bit {
            self.words[i >> 6] |= mask(i);
        } else {
            self.words[i >> 6] &= !mask(i);
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len & 63 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.words[(self.len - 1) >> 6] |= mask(self.len - 1);
        }
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        if width == 0 {
            return;
        }
        let value = if width == 64 {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        let off = (self.len & 63) as u32;
        if off == 0 {
            self.words.push(0);
        }
        let last = self.words.len() - 1;
        let free = 64 - off;
        if width <= free {
            self.words[last] |= value << (free - width);
        } else {
            let spill = width - free;
            self.words[last] |= value >> spill;
            self.words.push(value << (64 - spill));
        }
        self.len += width as usize;
    }

    /// Reads `width` bits starting at `pos`, most significant first.
    pub fn get_bits(&self, pos: usize, width: u32) -> u64 {
        debug_assert!(width <= 64 && pos + width as usize <= self.len);
        if width == 0 {
            return 0;
        }
        let w = pos >> 6;
        let off = (pos & 63) as u32;
        let hi = self.words[w] << off;
        let combined = if off + width > 64 {
            hi | (self.words[w + 1] >> (64 - off))
        } else {
            hi
        };
        combined >> (64 - width)
    }

    pub fn extend_from(&mut self, other: &BitVec) {
        let mut pos = 0;
        while pos < other.len {
            let width = (other.len - pos).min(64) as u32;
            self.write_bits(other.get_bits(pos, width), width);
            pos += width as usize;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bytes of the vector, zero-padded to a byte boundary.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_be_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut bv = BitVec::new();
        for b in iter {
            bv.push(b);
        }
        bv
    }
}

/// Immutable bit vector with constant-time rank and logarithmic select.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitSequence {
    bits: BitVec,
    // ones before each 512-bit block, plus the total at the end
    blocks: Vec<usize>,
}

impl BitSequence {
    pub fn new(bits: BitVec) -> Self {
        let words = bits.words();
        let mut blocks = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 2);
        let mut acc = 0usize;
        for chunk in words.chunks(WORDS_PER_BLOCK) {
            blocks.push(acc);
            acc += chunk.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        }
        blocks.push(acc);
        BitSequence { bits, blocks }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    pub fn count_ones(&self) -> usize {
        *self.blocks.last().unwrap()
    }

    /// Number of ones in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len());
        let words = self.bits.words();
        let block = i / BLOCK_BITS;
        let mut r = self.blocks[block];
        let last = i >> 6;
        for w in &words[block * WORDS_PER_BLOCK..last] {
            r += w.count_ones() as usize;
        }
        let off = i & 63;
        if off != 0 {
            r += (words[last] >> (64 - off)).count_ones() as usize;
        }
        r
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `j`-th one (0-based).
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j >= self.count_ones() {
            return None;
        }
        // last block whose prefix count is <= j
        let nblocks = self.blocks.len() - 1;
        let block = self.blocks[..nblocks].partition_point(|&c| c <= j) - 1;
        let words = self.bits.words();
        let mut seen = self.blocks[block];
        for (wi, &w) in words.iter().enumerate().skip(block * WORDS_PER_BLOCK) {
            let c = w.count_ones() as usize;
            if seen + c > j {
                let mut x = w;
                for _ in 0..(j - seen) {
                    x &= !(1u64 << (63 - x.leading_zeros()));
                }
                return Some(wi * 64 + x.leading_zeros() as usize);
            }
            seen += c;
        }
        unreachable!("rank directory out of sync")
    }

    /// Position of the `j`-th zero (0-based), by binary search over rank.
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j >= self.len() - self.count_ones() {
            return None;
        }
        // smallest i with rank0(i + 1) > j
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.rank0(mid + 1) > j {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }
}

/// Cursor over a byte-padded bit stream.
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let byte = *self.bytes.get(self.pos >> 3).ok_or(Error::Truncated)?;
        let bit = (byte >> (7 - (self.pos & 7))) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64> {
        debug_assert!(width <= 64);
        if self.remaining() < width as usize {
            return Err(Error::Truncated);
        }
        let mut value = 0u64;
        let mut left = width;
        while left > 0 {
            let byte = self.bytes[self.pos >> 3] as u64;
            let avail = 8 - (self.pos & 7) as u32;
            let take = avail.min(left);
            let chunk = (byte >> (avail - take)) & ((1u64 << take) - 1);
            value = (value << take) | chunk;
            left -= take;
            self.pos += take as usize;
        }
        Ok(value)
    }

    pub fn read_bitvec(&mut self, len: usize) -> Result<BitVec> {
        if self.remaining() < len {
            return Err(Error::Truncated);
        }
        let mut bv = BitVec::new();
        let mut left = len;
        while left > 0 {
            let width = left.min(64) as u32;
            bv.write_bits(self.read_bits(width)?, width);
            left -= width as usize;
        }
        Ok(bv)
    }

    pub fn read_bytes(&mut self, n: usize) -> Result<Vec<u8>> {
        (0..n).map(|_| self.read_bits(8).map(|b| b as u8)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn write_and_read_back() {
        let mut bv = BitVec::new();
        bv.write_bits(0b101, 3);
        bv.write_bits(u64::MAX, 64);
        bv.write_bits(0, 5);
        bv.push(true);
        assert_eq!(bv.len(), 73);
        assert_eq!(bv.get_bits(0, 3), 0b101);
        assert_eq!(bv.get_bits(3, 64), u64::MAX);
        assert_eq!(bv.get_bits(67, 6), 1);
        let bytes = bv.to_bytes();
        assert_eq!(bytes[0], 0b1011_1111);
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read_bits(3).unwrap(), 0b101);
        assert_eq!(r.read_bits(64).unwrap(), u64::MAX);
        assert_eq!(r.read_bits(6).unwrap(), 1);
        assert!(r.read_bits(8).is_err());
    }

    #[test]
    fn select_on_empty_and_full() {
        let s = BitSequence::new(BitVec::zeros(100));
        assert_eq!(s.select1(0), None);
        assert_eq!(s.select0(99), Some(99));
        let s = BitSequence::new((0..1000).map(|_| true).collect());
        assert_eq!(s.select1(777), Some(777));
        assert_eq!(s.rank1(1000), 1000);
    }

    proptest! {
        #[test]
        fn rank_select_duality(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let seq = BitSequence::new(bits.iter().copied().collect());
            let mut ones = 0;
            for (i, &b) in bits.iter().enumerate() {
                prop_assert_eq!(seq.rank1(i), ones);
                if b {
                    prop_assert_eq!(seq.select1(ones), Some(i));
                    ones += 1;
                } else {
                    prop_assert_eq!(seq.select0(i - ones), Some(i));
                }
            }
            prop_assert_eq!(seq.rank1(bits.len()), ones);
            prop_assert_eq!(seq.select1(ones), None);
        }
    }
}
