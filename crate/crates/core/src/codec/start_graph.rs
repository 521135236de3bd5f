use std::ops::Range;

use rustc_hash::FxHashMap;

use super::index_fn::{compute_index_function, decode_index_function, encode_index_function, IndexFunction};
use super::{read_elias_fano, read_k2, read_len, write_elias_fano, write_k2};
use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, LabelId, NodeId};
use crate::succinct::{write_delta, BitSource, BitVec, EliasFano, K2Tree};

/// Start graph with edges sorted by label, stored as an Elias-Fano label
/// list, a node × edge incidence k²-tree and one index function per edge.
/// Edge `j` is column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedStartGraph {
    node_count: usize,
    labels: EliasFano,
    incidence: K2Tree,
    fn_table: Vec<IndexFunction>,
    fn_ids: Vec<u32>,
}

impl CompressedStartGraph {
    /// `num_labels` bounds the label ids (terminals plus nonterminals).
    pub fn encode(graph: &Hypergraph, num_labels: usize, k: usize) -> Result<Self> {
        let mut edges: Vec<&Edge> = graph.edges.iter().collect();
        edges.sort_by_key(|e| e.label);

        let label_seq: Vec<u64> = edges.iter().map(|e| e.label as u64).collect();
        let labels = EliasFano::new(&label_seq, num_labels as u64)?;

        let mut points = Vec::new();
        let mut fn_table = Vec::new();
        let mut fn_index: FxHashMap<IndexFunction, u32> = FxHashMap::default();
        let mut fn_ids = Vec::with_capacity(edges.len());
        for (j, e) in edges.iter().enumerate() {
            let (zeta, pi) = compute_index_function(e);
            points.extend(zeta.iter().map(|&v| (v as usize, j)));
            let id = *fn_index.entry(pi).or_insert_with_key(|pi| {
                fn_table.push(pi.clone());
                fn_table.len() as u32 - 1
            });
            fn_ids.push(id);
        }
        let incidence = K2Tree::build(&points, graph.node_count, edges.len(), k)?;
        Ok(CompressedStartGraph {
            node_count: graph.node_count,
            labels,
            incidence,
            fn_table,
            fn_ids,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.fn_ids.len()
    }

    pub fn label(&self, j: usize) -> LabelId {
        self.labels.get(j) as LabelId
    }

    pub fn labels(&self) -> &EliasFano {
        &self.labels
    }

    pub fn incidence(&self) -> &K2Tree {
        &self.incidence
    }

    /// Distinct index functions in order of first use.
    pub fn fn_table(&self) -> &[IndexFunction] {
        &self.fn_table
    }

    pub fn index_function(&self, j: usize) -> &IndexFunction {
        &self.fn_table[self.fn_ids[j] as usize]
    }

    /// Columns of the edges labeled `label` (binary search on the sorted labels).
    pub fn columns_with_label(&self, label: LabelId) -> Range<usize> {
        self.labels.range_of_value(label as u64)
    }

    /// Columns of the edges touching `v`, read from row `v` of the incidence matrix.
    pub fn columns_at_node(&self, v: NodeId) -> Vec<usize> {
        if v as usize >= self.node_count {
            return Vec::new();
        }
        self.incidence.row_ones(v as usize)
    }

    /// Rebuilds edge `j` from its column, label and index function.
    pub fn decode_edge(&self, j: usize) -> Result<Edge> {
        let zeta: Vec<NodeId> = self.incidence.col_ones(j).into_iter().map(|r| r as NodeId).collect();
        self.assemble(j, &zeta)
    }

    fn assemble(&self, j: usize, zeta: &[NodeId]) -> Result<Edge> {
        let pi = self.index_function(j);
        if pi.distinct() != zeta.len() {
            return Err(Error::corrupt(format!(
                "column {j} has {} nodes, its index function addresses {}",
                zeta.len(),
                pi.distinct()
            )));
        }
        Ok(Edge {
            label: self.label(j),
            nodes: pi.apply(zeta).expect("index checked above"),
        })
    }

    /// All edges in column order.
    pub fn decode(&self) -> Result<Hypergraph> {
        let mut columns: Vec<Vec<NodeId>> = vec![Vec::new(); self.edge_count()];
        for (r, c) in self.incidence.points() {
            columns[c].push(r as NodeId);
        }
        let mut edges = Vec::with_capacity(columns.len());
        for (j, mut zeta) in columns.into_iter().enumerate() {
            zeta.sort_unstable();
            edges.push(self.assemble(j, &zeta)?);
        }
        Ok(Hypergraph::new(self.node_count, edges))
    }

    pub fn size_bits(&self) -> usize {
        let mut out = BitVec::new();
        self.write_to(&mut out);
        out.len()
    }

    /// Layout: `δ(nodes) δ(edges)`, label list, incidence tree,
    /// `δ(#functions)` and the functions, then one `δ(function id)` per edge.
    pub(crate) fn write_to(&self, out: &mut BitVec) {
        write_delta(out, self.node_count as u64);
        write_delta(out, self.edge_count() as u64);
        write_elias_fano(&self.labels, out);
        write_k2(&self.incidence, out);
        write_delta(out, self.fn_table.len() as u64);
        for f in &self.fn_table {
            encode_index_function(f, out);
        }
        for &id in &self.fn_ids {
            write_delta(out, id as u64);
        }
    }

    pub(crate) fn read_from<R: BitSource>(r: &mut R, num_labels: usize) -> Result<Self> {
        let node_count = read_len(r)?;
        let edge_count = read_len(r)?;
        let labels = read_elias_fano(r)?;
        if labels.len() != edge_count || labels.universe() != num_labels as u64 {
            return Err(Error::corrupt("start graph label list does not match its header"));
        }
        let incidence = read_k2(r)?;
        if incidence.rows() != node_count || incidence.cols() != edge_count {
            return Err(Error::corrupt("incidence matrix does not match the start graph header"));
        }
        let nfn = read_len(r)?;
        let fn_table = (0..nfn).map(|_| decode_index_function(r)).collect::<Result<Vec<_>>>()?;
        let mut fn_ids = Vec::with_capacity(edge_count.min(1 << 24));
        for _ in 0..edge_count {
            let id = r.read_delta()?;
            if id >= nfn as u64 {
                return Err(Error::corrupt("index function id out of range"));
            }
            fn_ids.push(id as u32);
        }
        Ok(CompressedStartGraph {
            node_count,
            labels,
            incidence,
            fn_table,
            fn_ids,
        })
    }
}
