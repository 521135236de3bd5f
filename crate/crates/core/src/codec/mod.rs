//! Binary form of a compressed grammar and the `.itr` container.

mod container;
mod index_fn;
mod nt;
mod rules;
mod start_graph;

pub use container::{deserialize, serialize, CompressedGrammar, Flags, SectionSizes, MAGIC, VERSION};
pub use index_fn::{compute_index_function, decode_index_function, encode_index_function, IndexFunction};
pub use nt::NtMatrix;
pub use rules::{decode_rules, encode_rules};
pub use start_graph::CompressedStartGraph;

use crate::error::{Error, Result};
use crate::succinct::{write_delta, BitSource, BitVec, EliasFano, K2Tree};

fn read_len<R: BitSource>(r: &mut R) -> Result<usize> {
    let v = r.read_delta()?;
    if v > u32::MAX as u64 {
        return Err(Error::corrupt(format!("length {v} out of range")));
    }
    Ok(v as usize)
}

fn read_raw<R: BitSource>(r: &mut R, len: usize) -> Result<BitVec> {
    let mut bv = BitVec::new();
    let mut left = len;
    while left > 0 {
        let w = left.min(64) as u32;
        bv.write_bits(r.read_bits(w)?, w);
        left -= w as usize;
    }
    Ok(bv)
}

/// `δ(universe) δ(len)`, then the low and high bits; their lengths follow
/// from the header.
fn write_elias_fano(ef: &EliasFano, out: &mut BitVec) {
    write_delta(out, ef.universe());
    write_delta(out, ef.len() as u64);
    out.extend_from(ef.low_bits());
    out.extend_from(ef.high_bits());
}

fn read_elias_fano<R: BitSource>(r: &mut R) -> Result<EliasFano> {
    let universe = read_len(r)? as u64;
    let len = read_len(r)?;
    let width = crate::succinct::elias_fano::low_width_for(universe, len);
    let low = read_raw(r, len * width as usize)?;
    let high = read_raw(r, len + (universe >> width) as usize + 1)?;
    EliasFano::from_parts(universe, len, low, high)
}

/// `δ(k) δ(rows) δ(cols) δ(|T|) δ(|L|)`, then both bit arrays.
fn write_k2(t: &K2Tree, out: &mut BitVec) {
    write_delta(out, t.arity() as u64);
    write_delta(out, t.rows() as u64);
    write_delta(out, t.cols() as u64);
    write_delta(out, t.tree_bits().len() as u64);
    write_delta(out, t.leaf_bits().len() as u64);
    out.extend_from(t.tree_bits());
    out.extend_from(t.leaf_bits());
}

fn read_k2<R: BitSource>(r: &mut R) -> Result<K2Tree> {
    let k = read_len(r)?;
    let rows = read_len(r)?;
    let cols = read_len(r)?;
    let tree_len = read_len(r)?;
    let leaf_len = read_len(r)?;
    if !(2..=64).contains(&k) {
        return Err(Error::corrupt(format!("k2-tree arity {k}")));
    }
    let tree = read_raw(r, tree_len)?;
    let leaves = read_raw(r, leaf_len)?;
    K2Tree::from_parts(k, rows, cols, tree, leaves)
}
