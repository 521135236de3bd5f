//! Text terms on one side, dense ids on the other.
//!
//! Node ids come either from interned terms (RDF input) or directly from
//! numeric identifiers in the input (edge lists). Edge labels are keyed by
//! `(term, rank)`, so a rank-1 node-label edge `x` and a rank-2 predicate `x`
//! get different ids.

use std::borrow::Cow;
use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, LabelId, NodeId};
use crate::succinct::{write_delta, BitSource, BitVec};

/// Node id to label text, for inputs that carry node labels.
pub type NodeLabels = BTreeMap<NodeId, String>;

/// What a term names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    Node,
    /// Terminal edge label of the given rank.
    EdgeLabel(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    numeric_nodes: bool,
    nodes: Vec<String>,
    node_ids: FxHashMap<String, NodeId>,
    labels: Vec<(String, usize)>,
    label_ids: FxHashMap<(String, usize), LabelId>,
    node_labels: NodeLabels,
}

impl Dictionary {
    /// Dictionary whose node ids are interned terms.
    pub fn new() -> Self {
        Self::default()
    }

    /// Dictionary whose node ids are the decimal numbers of the input.
    pub fn with_numeric_nodes() -> Self {
        Dictionary {
            numeric_nodes: true,
            ..Self::default()
        }
    }

    pub fn numeric_nodes(&self) -> bool {
        self.numeric_nodes
    }

    pub fn intern(&mut self, term: &str, kind: TermKind) -> u32 {
        match kind {
            TermKind::Node => self.intern_node(term),
            TermKind::EdgeLabel(rank) => self.intern_label(term, rank),
        }
    }

    /// Panics on a numeric dictionary, whose node ids are not interned.
    pub fn intern_node(&mut self, term: &str) -> NodeId {
        assert!(!self.numeric_nodes, "numeric dictionaries do not intern node terms");
        if let Some(&id) = self.node_ids.get(term) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(term.to_owned());
        self.node_ids.insert(term.to_owned(), id);
        id
    }

    pub fn intern_label(&mut self, term: &str, rank: usize) -> LabelId {
        assert!(rank >= 1, "labels have rank at least 1");
        let key = (term.to_owned(), rank);
        if let Some(&id) = self.label_ids.get(&key) {
            return id;
        }
        let id = self.labels.len() as LabelId;
        self.labels.push(key.clone());
        self.label_ids.insert(key, id);
        id
    }

    /// Node id for `term`; for numeric dictionaries, `term` is parsed.
    pub fn lookup_node(&self, term: &str) -> Option<NodeId> {
        if self.numeric_nodes {
            term.parse().ok()
        } else {
            self.node_ids.get(term).copied()
        }
    }

    pub fn lookup_label(&self, term: &str, rank: usize) -> Option<LabelId> {
        self.label_ids.get(&(term.to_owned(), rank)).copied()
    }

    pub fn node_term(&self, id: NodeId) -> Option<Cow<'_, str>> {
        if self.numeric_nodes {
            Some(Cow::Owned(id.to_string()))
        } else {
            self.nodes.get(id as usize).map(|s| Cow::Borrowed(s.as_str()))
        }
    }

    pub fn label_term(&self, id: LabelId) -> Option<&str> {
        self.labels.get(id as usize).map(|(s, _)| s.as_str())
    }

    pub fn label_rank(&self, id: LabelId) -> Option<usize> {
        self.labels.get(id as usize).map(|&(_, r)| r)
    }

    /// Interned node terms (zero for numeric dictionaries).
    pub fn num_node_terms(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    /// Ranks of all terminal labels, indexed by label id.
    pub fn terminal_ranks(&self) -> Vec<usize> {
        self.labels.iter().map(|&(_, r)| r).collect()
    }

    /// Per-node label strings kept in the dictionary (plain mode).
    pub fn node_labels(&self) -> &NodeLabels {
        &self.node_labels
    }

    pub fn set_node_labels(&mut self, labels: NodeLabels) {
        self.node_labels = labels;
    }

    /// Stored strings that exist only to label nodes: one per labeled node
    /// in plain mode, one per distinct rank-1 label otherwise.
    pub fn node_label_entries(&self) -> usize {
        self.node_labels.len() + self.labels.iter().filter(|&&(_, r)| r == 1).count()
    }

    /// Appends the dictionary to a bit stream.
    ///
    /// Layout: `δ(#nodes)` terms, `δ(#labels)` then `δ(rank)` and a term per
    /// label, `δ(#labeled nodes)` then `δ(node)` and a term per entry. A term
    /// is `δ(byte length)` followed by its UTF-8 bytes.
    pub fn write_to(&self, out: &mut BitVec) {
        write_delta(out, self.nodes.len() as u64);
        for t in &self.nodes {
            write_term(out, t);
        }
        write_delta(out, self.labels.len() as u64);
        for (t, rank) in &self.labels {
            write_delta(out, *rank as u64);
            write_term(out, t);
        }
        write_delta(out, self.node_labels.len() as u64);
        for (&v, t) in &self.node_labels {
            write_delta(out, v as u64);
            write_term(out, t);
        }
    }

    pub fn read_from<R: BitSource>(r: &mut R, numeric_nodes: bool) -> Result<Self> {
        let mut dict = if numeric_nodes {
            Dictionary::with_numeric_nodes()
        } else {
            Dictionary::new()
        };
        let n = r.read_delta()?;
        if numeric_nodes && n != 0 {
            return Err(Error::corrupt("numeric dictionary with node terms"));
        }
        for _ in 0..n {
            let t = read_term(r)?;
            let before = dict.nodes.len();
            dict.intern_node(&t);
            if dict.nodes.len() == before {
                return Err(Error::corrupt("duplicate node term"));
            }
        }
        for _ in 0..r.read_delta()? {
            let rank = r.read_delta()? as usize;
            let t = read_term(r)?;
            let before = dict.labels.len();
            if rank == 0 {
                return Err(Error::corrupt("label of rank 0"));
            }
            dict.intern_label(&t, rank);
            if dict.labels.len() == before {
                return Err(Error::corrupt("duplicate label term"));
            }
        }
        for _ in 0..r.read_delta()? {
            let v = NodeId::try_from(r.read_delta()?).map_err(|_| Error::corrupt("node id overflow"))?;
            let t = read_term(r)?;
            dict.node_labels.insert(v, t);
        }
        Ok(dict)
    }
}

fn write_term(out: &mut BitVec, term: &str) {
    write_delta(out, term.len() as u64);
    for &b in term.as_bytes() {
        out.write_bits(b as u64, 8);
    }
}

fn read_term<R: BitSource>(r: &mut R) -> Result<String> {
    let len = r.read_delta()? as usize;
    let mut bytes = Vec::with_capacity(len.min(1 << 16));
    for _ in 0..len {
        bytes.push(r.read_bits(8)? as u8);
    }
    String::from_utf8(bytes).map_err(|_| Error::corrupt("dictionary term is not UTF-8"))
}

/// Turns node labels into rank-1 terminal edges `label(v)`, appended in node
/// order. Label texts are interned as rank-1 labels of `dict`.
pub fn apply_itr_plus(graph: &Hypergraph, node_labels: &NodeLabels, dict: &mut Dictionary) -> Hypergraph {
    let mut edges = graph.edges.clone();
    let mut node_count = graph.node_count;
    edges.reserve(node_labels.len());
    for (&v, text) in node_labels {
        let label = dict.intern_label(text, 1);
        edges.push(Edge::new(label, [v]));
        node_count = node_count.max(v as usize + 1);
    }
    Hypergraph::new(node_count, edges)
}

/// Problems tolerated while stripping node-label edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StripReport {
    /// Nodes that carried the same label edge more than once.
    pub duplicate_nodes: Vec<NodeId>,
}

/// Inverse of [`apply_itr_plus`]: removes rank-1 terminal edges and returns
/// them as a node-label map. Identical repeated labels are merged and
/// reported; two different labels on one node are an error.
pub fn strip_itr_plus(graph: &Hypergraph, dict: &Dictionary) -> Result<(Hypergraph, NodeLabels, StripReport)> {
    let mut labels = NodeLabels::new();
    let mut report = StripReport::default();
    let mut edges = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        if e.rank() != 1 {
            edges.push(e.clone());
            continue;
        }
        let text = dict.label_term(e.label).ok_or(Error::DanglingId(e.label as u64))?;
        let v = e.nodes[0];
        match labels.get(&v) {
            None => {
                labels.insert(v, text.to_owned());
            }
            Some(prev) if prev == text => {
                log::warn!("node {v} carries label {text:?} more than once");
                report.duplicate_nodes.push(v);
            }
            Some(prev) => {
                return Err(Error::ConflictingLabels {
                    node: v,
                    first: prev.clone(),
                    second: text.to_owned(),
                })
            }
        }
    }
    report.duplicate_nodes.sort_unstable();
    report.duplicate_nodes.dedup();
    Ok((Hypergraph::new(graph.node_count, edges), labels, report))
}
