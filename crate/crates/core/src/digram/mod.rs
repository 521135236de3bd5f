//! RePair over incidence-type digrams.
//!
//! An incidence-type `(a, m)` describes an edge labelled `a` touching a node
//! at position `m`. A digram is an unordered pair of incidence-types; an
//! occurrence is two distinct edges sharing a node at the positions named by
//! the digram. The compressor repeatedly replaces the most frequent digram by
//! a fresh nonterminal hyperedge whose first attachment node is the shared
//! node.

mod compressor;
mod count;
pub mod oracle;
mod prune;
mod replace;

use std::fmt;

use crate::graph::{LabelId, LabelTable};

pub use compressor::{compress, replace_digrams, CompressConfig, CompressStats, Compressor, StepReport};
pub use count::{count_at_node, count_digrams, count_incidence, update_counts, CountTable, DigramCounts};
pub use oracle::brute_force_max_occurrences;
pub use prune::prune;
pub use replace::{digram_rule, find_occurrences, replace_occurrences, Occurrence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncidenceType {
    pub label: LabelId,
    pub conn: u32,
}

impl IncidenceType {
    pub fn new(label: LabelId, conn: u32) -> Self {
        IncidenceType { label, conn }
    }
}

impl fmt::Display for IncidenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.label, self.conn)
    }
}

/// Pair of incidence-types, stored with `first <= second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digram {
    first: IncidenceType,
    second: IncidenceType,
}

impl Digram {
    pub fn new(a: IncidenceType, b: IncidenceType) -> Self {
        if a <= b {
            Digram { first: a, second: b }
        } else {
            Digram { first: b, second: a }
        }
    }

    pub fn first(&self) -> IncidenceType {
        self.first
    }

    pub fn second(&self) -> IncidenceType {
        self.second
    }

    /// Both incidence-types are equal.
    pub fn is_uniform(&self) -> bool {
        self.first == self.second
    }

    /// Rank of the nonterminal replacing an occurrence.
    pub fn merged_rank(&self, labels: &LabelTable) -> usize {
        labels.rank(self.first.label) + labels.rank(self.second.label) - 1
    }
}

impl fmt::Display for Digram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// Size change from replacing `n` occurrences under the `1 + rank` edge
/// cost: each occurrence saves 2, the new rule costs the two rhs edges.
pub fn size_gain(labels: &LabelTable, digram: &Digram, n: u64) -> i64 {
    let r1 = labels.rank(digram.first.label) as i64;
    let r2 = labels.rank(digram.second.label) as i64;
    2 * n as i64 - (2 + r1 + r2)
}
