use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId};
use crate::succinct::{write_delta, BitSource, BitVec};

/// Maps each position of an edge to an index into the edge's sorted,
/// duplicate-free node list. Together with that list (a column of the
/// incidence matrix) it restores node order and repetitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexFunction(pub SmallVec<[u32; 4]>);

impl IndexFunction {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Number of distinct nodes the function addresses (`max + 1`).
    pub fn distinct(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Applies the function to a sorted distinct node list.
    pub fn apply(&self, zeta: &[NodeId]) -> Option<SmallVec<[NodeId; 4]>> {
        self.0.iter().map(|&i| zeta.get(i as usize).copied()).collect()
    }
}

/// Returns `(ζ, π)` for `e`: its ascending distinct nodes and the index of
/// each position's node in that list.
pub fn compute_index_function(e: &Edge) -> (SmallVec<[NodeId; 4]>, IndexFunction) {
    let mut zeta: SmallVec<[NodeId; 4]> = e.nodes.clone();
    zeta.sort_unstable();
    zeta.dedup();
    let pi = e
        .nodes
        .iter()
        .map(|v| zeta.binary_search(v).unwrap() as u32)
        .collect();
    (zeta, IndexFunction(pi))
}

/// Writes `δ(rank - 1)` followed by `δ(π(m))` for every position.
pub fn encode_index_function(pi: &IndexFunction, out: &mut BitVec) {
    assert!(pi.rank() >= 1, "index functions have rank at least 1");
    write_delta(out, pi.rank() as u64 - 1);
    for &i in &pi.0 {
        write_delta(out, i as u64);
    }
}

pub fn decode_index_function<R: BitSource>(r: &mut R) -> Result<IndexFunction> {
    let rank = r.read_delta()? + 1;
    if rank > u16::MAX as u64 {
        return Err(Error::corrupt("index function rank out of range"));
    }
    let mut pi = SmallVec::with_capacity(rank as usize);
    for _ in 0..rank {
        let i = r.read_delta()?;
        if i >= rank {
            return Err(Error::corrupt("index function value exceeds its rank"));
        }
        pi.push(i as u32);
    }
    let f = IndexFunction(pi);
    // surjective onto 0..distinct
    let mut seen = vec![false; f.distinct()];
    for &i in &f.0 {
        seen[i as usize] = true;
    }
    if seen.contains(&false) {
        return Err(Error::corrupt("index function is not surjective"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::succinct::BitCursor;
    use proptest::prelude::*;

    fn bits_of(bv: &BitVec) -> String {
        bv.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    #[test]
    fn loop_edge() {
        let (zeta, pi) = compute_index_function(&Edge::new(7, [10, 10, 11]));
        assert_eq!(&zeta[..], &[10, 11]);
        assert_eq!(&pi.0[..], &[0, 0, 1]);
        assert_eq!(&pi.apply(&zeta).unwrap()[..], &[10, 10, 11]);
    }

    #[test]
    fn plain_and_inverted_edges() {
        let (zeta, pi) = compute_index_function(&Edge::new(0, [3, 7]));
        assert_eq!((&zeta[..], &pi.0[..]), (&[3, 7][..], &[0, 1][..]));
        let (zeta, pi) = compute_index_function(&Edge::new(0, [7, 3]));
        assert_eq!((&zeta[..], &pi.0[..]), (&[3, 7][..], &[1, 0][..]));
    }

    #[test]
    fn codewords() {
        let mut bv = BitVec::new();
        encode_index_function(&IndexFunction([0, 0, 1].into_iter().collect()), &mut bv);
        assert_eq!(bits_of(&bv), ["0101", "1", "1", "0100"].concat());
        let mut bv = BitVec::new();
        encode_index_function(&IndexFunction([0].into_iter().collect()), &mut bv);
        assert_eq!(bits_of(&bv), "11");
    }

    #[test]
    fn rejects_non_surjective() {
        let mut bv = BitVec::new();
        write_delta(&mut bv, 1);
        write_delta(&mut bv, 1);
        write_delta(&mut bv, 1);
        assert!(decode_index_function(&mut BitCursor::new(&bv)).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(nodes in proptest::collection::vec(0u32..6, 1..9)) {
            let e = Edge::new(0, nodes.iter().copied());
            let (zeta, pi) = compute_index_function(&e);
            prop_assert_eq!(&pi.apply(&zeta).unwrap()[..], &nodes[..]);
            prop_assert_eq!(pi.distinct(), zeta.len());
            let mut bv = BitVec::new();
            encode_index_function(&pi, &mut bv);
            let mut cur = BitCursor::new(&bv);
            prop_assert_eq!(decode_index_function(&mut cur).unwrap(), pi);
            prop_assert!(cur.is_at_end());
        }
    }
}
