//! Static k²-tree over a rectangular boolean matrix.
//!
//! The matrix is embedded in the top-left corner of a `k^h × k^h` square.
//! Each tree node splits its square into `k²` sub-squares in row-major order
//! and stores one bit per sub-square; empty sub-squares are not expanded.
//! Internal levels are stored level by level in `tree`, the last level in
//! `leaves`. The children of the set bit at position `x` of `tree` start at
//! position `rank1(tree, x + 1) * k²` of the concatenation `tree ++ leaves`.

use crate::error::{Error, Result};
use crate::succinct::bits::{BitSequence, BitVec};

pub const DEFAULT_ARITY: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K2Tree {
    k: usize,
    rows: usize,
    cols: usize,
    height: u32,
    tree: BitSequence,
    leaves: BitVec,
}

fn height_for(k: usize, rows: usize, cols: usize) -> u32 {
    let n = rows.max(cols).max(1);
    let mut h = 1;
    let mut side = k;
    while side < n {
        side *= k;
        h += 1;
    }
    h
}

impl K2Tree {
    pub fn build(points: &[(usize, usize)], rows: usize, cols: usize, k: usize) -> Result<Self> {
        assert!(k >= 2, "k2-tree arity must be at least 2");
        let height = height_for(k, rows, cols);
        let kk = (k * k) as u128;
        let mut block_sizes = Vec::with_capacity(height as usize);
        let mut b = 1usize;
        for _ in 0..height {
            block_sizes.push(b);
            b *= k;
        }
        block_sizes.reverse(); // block_sizes[l] = side / k^(l+1)

        let mut keys = Vec::with_capacity(points.len());
        for &(r, c) in points {
            if r >= rows || c >= cols {
                return Err(Error::OutOfBounds { row: r, col: c, rows, cols });
            }
            let mut key = 0u128;
            for &bs in &block_sizes {
                let digit = ((r / bs) % k) * k + (c / bs) % k;
                key = key * kk + digit as u128;
            }
            keys.push(key);
        }
        keys.sort_unstable();
        keys.dedup();

        let mut levels: Vec<BitVec> = Vec::with_capacity(height as usize);
        // divisor isolating the prefix above level l: kk^(height - l)
        let mut pow = vec![1u128; height as usize + 1];
        for i in 1..=height as usize {
            pow[i] = pow[i - 1] * kk;
        }
        for l in 0..height as usize {
            let mut bits = BitVec::new();
            let parent_div = pow[height as usize - l];
            let child_div = pow[height as usize - l - 1];
            if keys.is_empty() && l == 0 {
                bits = BitVec::zeros(k * k);
            }
            let mut i = 0;
            while i < keys.len() {
                let parent = keys[i] / parent_div;
                let start = bits.len();
                for _ in 0..k * k {
                    bits.push(false);
                }
                while i < keys.len() && keys[i] / parent_div == parent {
                    let digit = ((keys[i] / child_div) % kk) as usize;
                    bits.set(start + digit, true);
                    i += 1;
                }
            }
            levels.push(bits);
        }
        let leaves = levels.pop().unwrap();
        let mut tree = BitVec::new();
        for lvl in &levels {
            tree.extend_from(lvl);
        }
        Ok(K2Tree {
            k,
            rows,
            cols,
            height,
            tree: BitSequence::new(tree),
            leaves,
        })
    }

    pub(crate) fn from_parts(
        k: usize,
        rows: usize,
        cols: usize,
        tree: BitVec,
        leaves: BitVec,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::corrupt("k2-tree arity below 2"));
        }
        let kk = k * k;
        let height = height_for(k, rows, cols);
        if !tree.len().is_multiple_of(kk) || !leaves.len().is_multiple_of(kk) || tree.len() + leaves.len() < kk {
            return Err(Error::corrupt("k2-tree bit lengths"));
        }
        let tree = BitSequence::new(tree);
        // walk level sizes: level l + 1 holds k² bits per set bit of level l
        let (mut start, mut width) = (0usize, kk);
        for _ in 1..height {
            if start + width > tree.len() {
                return Err(Error::corrupt("k2-tree shape"));
            }
            let ones = tree.rank1(start + width) - tree.rank1(start);
            start += width;
            width = ones * kk;
        }
        if start != tree.len() || width != leaves.len() {
            return Err(Error::corrupt("k2-tree shape"));
        }
        Ok(K2Tree {
            k,
            rows,
            cols,
            height,
            tree,
            leaves,
        })
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub(crate) fn tree_bits(&self) -> &BitVec {
        self.tree.bits()
    }

    pub(crate) fn leaf_bits(&self) -> &BitVec {
        &self.leaves
    }

    pub fn size_bits(&self) -> usize {
        self.tree.len() + self.leaves.len()
    }

    #[inline]
    fn bit(&self, pos: usize) -> bool {
        let t = self.tree.len();
        if pos < t {
            self.tree.get(pos)
        } else {
            self.leaves.get(pos - t)
        }
    }

    #[inline]
    fn children(&self, pos: usize) -> usize {
        self.tree.rank1(pos + 1) * self.k * self.k
    }

    fn side(&self) -> usize {
        self.k.pow(self.height)
    }

    pub fn cell(&self, row: usize, col: usize) -> bool {
        if row >= self.rows || col >= self.cols {
            return false;
        }
        let k = self.k;
        let mut block = self.side();
        let mut base = 0usize;
        for level in 0..self.height {
            block /= k;
            let pos = base + ((row / block) % k) * k + (col / block) % k;
            if !self.bit(pos) {
                return false;
            }
            if level + 1 == self.height {
                return true;
            }
            base = self.children(pos);
        }
        unreachable!()
    }

    /// Columns set in `row`, ascending.
    pub fn row_ones(&self, row: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if row < self.rows {
            self.line(row, 0, self.side() / self.k, 0, true, &mut out);
        }
        out
    }

    /// Rows set in `col`, ascending.
    pub fn col_ones(&self, col: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if col < self.cols {
            self.line(col, 0, self.side() / self.k, 0, false, &mut out);
        }
        out
    }

    fn line(&self, fixed: usize, base: usize, block: usize, offset: usize, by_row: bool, out: &mut Vec<usize>) {
        let k = self.k;
        let d = (fixed / block) % k;
        for j in 0..k {
            let pos = if by_row { base + d * k + j } else { base + j * k + d };
            if !self.bit(pos) {
                continue;
            }
            let at = offset + j * block;
            if block == 1 {
                out.push(at);
            } else {
                self.line(fixed, self.children(pos), block / k, at, by_row, out);
            }
        }
    }

    /// All set cells as `(row, col)`, in tree order.
    pub fn points(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.collect(0, self.side() / self.k, 0, 0, &mut out);
        out
    }

    fn collect(&self, base: usize, block: usize, r0: usize, c0: usize, out: &mut Vec<(usize, usize)>) {
        let k = self.k;
        for i in 0..k {
            for j in 0..k {
                let pos = base + i * k + j;
                if !self.bit(pos) {
                    continue;
                }
                let (r, c) = (r0 + i * block, c0 + j * block);
                if block == 1 {
                    out.push((r, c));
                } else {
                    self.collect(self.children(pos), block / k, r, c, out);
                }
            }
        }
    }
}
