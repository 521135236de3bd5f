//! Exhaustive maximum of pairwise edge-disjoint digram occurrences.
//!
//! Exponential; meant for checking the frequency estimate on small graphs.

use rustc_hash::FxHashMap;

use super::Digram;
use crate::error::{Error, Result};
use crate::graph::Hypergraph;

/// Largest number of candidate edges the search accepts.
pub const ORACLE_EDGE_LIMIT: usize = 24;

/// Size of a largest set of occurrences of `d` in which no edge is used
/// twice. An occurrence is an ordered pair of distinct edges `(e1, e2)` with
/// `label(e1) = a1`, `label(e2) = a2` and `e1[m1] = e2[m2]`.
pub fn brute_force_max_occurrences(graph: &Hypergraph, d: &Digram) -> Result<usize> {
    let (i1, i2) = (d.first(), d.second());
    let cand: Vec<usize> = graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.label == i1.label || e.label == i2.label)
        .map(|(i, _)| i)
        .collect();
    if cand.len() > ORACLE_EDGE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            edges: cand.len(),
            limit: ORACLE_EDGE_LIMIT,
        });
    }

    // partners[x]: bitmask of candidates y such that {x, y} is an occurrence
    let n = cand.len();
    let mut partners = vec![0u32; n];
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let (ex, ey) = (&graph.edges[cand[x]], &graph.edges[cand[y]]);
            if ex.label == i1.label
                && ey.label == i2.label
                && ex.nodes[i1.conn as usize] == ey.nodes[i2.conn as usize]
            {
                partners[x] |= 1 << y;
                partners[y] |= 1 << x;
            }
        }
    }

    fn best(avail: u32, partners: &[u32], memo: &mut FxHashMap<u32, usize>) -> usize {
        // drop candidates without available partners
        let mut avail = avail;
        let mut rest = avail;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if partners[x] & avail == 0 {
                avail &= !(1 << x);
            }
        }
        if avail == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&avail) {
            return v;
        }
        let x = avail.trailing_zeros() as usize;
        let without_x = avail & !(1 << x);
        let mut result = best(without_x, partners, memo);
        let mut ys = partners[x] & without_x;
        while ys != 0 {
            let y = ys.trailing_zeros();
            ys &= ys - 1;
            result = result.max(1 + best(without_x & !(1 << y), partners, memo));
        }
        memo.insert(avail, result);
        result
    }

    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    Ok(best(all, &partners, &mut FxHashMap::default()))
}
