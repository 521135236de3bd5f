//! Whole-graph compression and decompression.

use crate::codec::CompressedGrammar;
use crate::dictionary::{apply_itr_plus, strip_itr_plus, Dictionary, NodeLabels, StripReport};
use crate::digram::{compress, CompressConfig, CompressStats};
use crate::error::Result;
use crate::graph::{Grammar, Hypergraph};
use crate::succinct::DEFAULT_ARITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Store node labels as rank-1 edges instead of per-node strings.
    pub itr_plus: bool,
    pub max_rank: usize,
    /// k²-tree arity.
    pub k: usize,
    pub prune: bool,
}

impl Default for Options {
    fn default() -> Self {
        let c = CompressConfig::default();
        Options {
            itr_plus: false,
            max_rank: c.max_rank,
            k: DEFAULT_ARITY,
            prune: c.prune,
        }
    }
}

/// Compresses a parsed graph. `node_labels` end up as rank-1 edges or in the
/// dictionary, depending on `opts.itr_plus`.
pub fn compress_graph(
    graph: Hypergraph,
    mut dict: Dictionary,
    node_labels: NodeLabels,
    opts: &Options,
) -> Result<(CompressedGrammar, CompressStats)> {
    let graph = if opts.itr_plus {
        apply_itr_plus(&graph, &node_labels, &mut dict)
    } else {
        let node_count = node_labels
            .keys()
            .next_back()
            .map_or(graph.node_count, |&v| graph.node_count.max(v as usize + 1));
        dict.set_node_labels(node_labels);
        Hypergraph::new(node_count, graph.edges)
    };
    let grammar = Grammar::from_graph(graph, &dict.terminal_ranks());
    let config = CompressConfig {
        max_rank: opts.max_rank,
        prune: opts.prune,
    };
    let (grammar, stats) = compress(grammar, config);
    let view = CompressedGrammar::build(&grammar, dict, opts.itr_plus, opts.k)?;
    Ok((view, stats))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decompressed {
    /// The input graph without node-label edges.
    pub graph: Hypergraph,
    pub node_labels: NodeLabels,
    pub report: StripReport,
}

pub fn decompress_container(view: &CompressedGrammar) -> Result<Decompressed> {
    let graph = view.decompress()?;
    if view.flags().itr_plus {
        let (graph, node_labels, report) = strip_itr_plus(&graph, view.dictionary())?;
        Ok(Decompressed {
            graph,
            node_labels,
            report,
        })
    } else {
        Ok(Decompressed {
            graph,
            node_labels: view.dictionary().node_labels().clone(),
            report: StripReport::default(),
        })
    }
}
