//! Elias-Fano encoding of non-decreasing integer sequences.
//!
//! Each value is split into `low_width` low bits, stored verbatim, and a high
//! part stored in unary: value `i` sets bit `(x_i >> low_width) + i` of the
//! upper bit sequence.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::succinct::bits::{BitSequence, BitVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliasFano {
    universe: u64,
    len: usize,
    low_width: u32,
    low: BitVec,
    high: BitSequence,
}

pub(crate) fn low_width_for(universe: u64, len: usize) -> u32 {
    if len == 0 {
        return 0;
    }
    let ratio = universe / len as u64;
    if ratio == 0 {
        0
    } else {
        63 - ratio.leading_zeros()
    }
}

impl EliasFano {
    pub fn new(values: &[u64], universe: u64) -> Result<Self> {
        let len = values.len();
        let low_width = low_width_for(universe, len);
        let mut low = BitVec::new();
        let high_len = len + (universe >> low_width) as usize + 1;
        let mut high = BitVec::zeros(high_len);
        let mut prev = 0u64;
        for (i, &x) in values.iter().enumerate() {
            if x < prev {
                return Err(Error::NotMonotone(i));
            }
            if x >= universe {
                return Err(Error::OutOfUniverse { value: x, universe });
            }
            prev = x;
            low.write_bits(x, low_width);
            high.set((x >> low_width) as usize + i, true);
        }
        Ok(EliasFano {
            universe,
            len,
            low_width,
            low,
            high: BitSequence::new(high),
        })
    }

    pub(crate) fn from_parts(universe: u64, len: usize, low: BitVec, high: BitVec) -> Result<Self> {
        let low_width = low_width_for(universe, len);
        if low.len() != len * low_width as usize
            || high.len() != len + (universe >> low_width) as usize + 1
        {
            return Err(Error::corrupt("Elias-Fano part lengths"));
        }
        let high = BitSequence::new(high);
        if high.count_ones() != len {
            return Err(Error::corrupt("Elias-Fano upper bits"));
        }
        Ok(EliasFano {
            universe,
            len,
            low_width,
            low,
            high,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub(crate) fn low_bits(&self) -> &BitVec {
        &self.low
    }

    pub(crate) fn high_bits(&self) -> &BitVec {
        self.high.bits()
    }

    /// Total payload size in bits.
    pub fn size_bits(&self) -> usize {
        self.low.len() + self.high.len()
    }

    pub fn get(&self, i: usize) -> u64 {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let high = (self.high.select1(i).unwrap() - i) as u64;
        let low = self
            .low
            .get_bits(i * self.low_width as usize, self.low_width);
        (high << self.low_width) | low
    }

    /// First index whose value is `>= v`.
    pub fn lower_bound(&self, v: u64) -> usize {
        let (mut lo, mut hi) = (0usize, self.len);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.get(mid) < v {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Index interval holding exactly the occurrences of `v`.
    pub fn range_of_value(&self, v: u64) -> Range<usize> {
        self.lower_bound(v)..self.lower_bound(v.saturating_add(1))
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_sequence() {
        let ef = EliasFano::new(&[0, 0, 1, 3], 4).unwrap();
        assert_eq!(ef.get(2), 1);
        assert_eq!(ef.iter().collect::<Vec<_>>(), vec![0, 0, 1, 3]);
        assert_eq!(ef.range_of_value(0), 0..2);
        assert_eq!(ef.range_of_value(2), 3..3);
        assert_eq!(ef.range_of_value(3), 3..4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(EliasFano::new(&[1, 0], 4), Err(Error::NotMonotone(1))));
        assert!(matches!(
            EliasFano::new(&[5], 4),
            Err(Error::OutOfUniverse { value: 5, .. })
        ));
    }

    #[test]
    fn empty_sequence() {
        let ef = EliasFano::new(&[], 10).unwrap();
        assert!(ef.is_empty());
        assert_eq!(ef.range_of_value(3), 0..0);
    }

    proptest! {
        #[test]
        fn matches_plain_array(mut xs in proptest::collection::vec(0u64..10_000, 0..400), extra in 1u64..5000) {
            xs.sort_unstable();
            let universe = xs.last().map_or(1, |&m| m + 1) + extra;
            let ef = EliasFano::new(&xs, universe).unwrap();
            for (i, &x) in xs.iter().enumerate() {
                prop_assert_eq!(ef.get(i), x);
            }
            for probe in xs.iter().copied().chain([0, universe - 1]) {
                let lo = xs.partition_point(|&x| x < probe);
                let hi = xs.partition_point(|&x| x <= probe);
                prop_assert_eq!(ef.range_of_value(probe), lo..hi);
            }
            // n * (2 + ceil(log2(u / n))) + 1 for the sentinel
            let n = xs.len();
            if n > 0 {
                let ratio = (universe as f64 / n as f64).log2().ceil().max(0.0) as usize;
                prop_assert!(ef.size_bits() <= n * (2 + ratio) + 1);
            }
        }
    }
}
