//! Grammar-based compression of edge-labeled graphs with queries on the
//! compressed form.
//!
//! A graph is turned into a straight-line hyperedge replacement grammar by
//! repeatedly replacing the most frequent digram (two edges sharing a node)
//! with a nonterminal edge. The grammar is stored as a k²-tree incidence
//! matrix, an Elias-Fano label list and δ-coded index functions and rules,
//! and triple patterns are answered by expanding only the nonterminal edges
//! that can contribute.

pub mod codec;
pub mod dictionary;
pub mod digram;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod query;
pub mod succinct;

pub use codec::{deserialize, serialize, CompressedGrammar};
pub use dictionary::{Dictionary, NodeLabels};
pub use error::{Error, Result};
pub use graph::{graphs_equal, Edge, Grammar, Hypergraph, LabelId, NodeId};
pub use pipeline::{compress_graph, decompress_container, Options};
pub use query::{answer, neighborhood, node_label, Direction, Triple, TriplePattern};
