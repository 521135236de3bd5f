use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use super::Digram;
use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, LabelId, LabelKind, LabelTable, NodeId, Rule};

/// Two edges (by position in the scanned sequence) forming one occurrence.
/// `first` matches the digram's first incidence-type, `second` the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub first: usize,
    pub second: usize,
    pub shared: NodeId,
}

fn pop_live(pending: &mut FxHashMap<NodeId, Vec<usize>>, v: NodeId, used: &FxHashSet<usize>) -> Option<usize> {
    let list = pending.get_mut(&v)?;
    while let Some(idx) = list.pop() {
        if !used.contains(&idx) {
            return Some(idx);
        }
    }
    None
}

/// Left-to-right scan pairing edges at their shared node.
///
/// `edges` must yield positions in increasing order. Every edge whose label
/// fits the digram leaves a pending handle at the node it would share; an
/// edge that finds a pending partner at that node forms an occurrence, and
/// both edges are then unavailable for further matches.
pub fn find_occurrences<'a, I>(edges: I, d: &Digram) -> Vec<Occurrence>
where
    I: IntoIterator<Item = (usize, &'a Edge)>,
{
    let (i1, i2) = (d.first(), d.second());
    let (m1, m2) = (i1.conn as usize, i2.conn as usize);
    let mut pending1: FxHashMap<NodeId, Vec<usize>> = FxHashMap::default();
    let mut pending2: FxHashMap<NodeId, Vec<usize>> = FxHashMap::default();
    let mut used: FxHashSet<usize> = FxHashSet::default();
    let mut out = Vec::new();

    for (idx, e) in edges {
        if d.is_uniform() {
            if e.label != i1.label {
                continue;
            }
            let v = e.nodes[m1];
            match pop_live(&mut pending1, v, &used) {
                Some(p) => {
                    used.insert(p);
                    used.insert(idx);
                    out.push(Occurrence { first: p, second: idx, shared: v });
                }
                None => pending1.entry(v).or_default().push(idx),
            }
            continue;
        }

        let mut found = None;
        if e.label == i1.label {
            let v = e.nodes[m1];
            if let Some(p) = pop_live(&mut pending2, v, &used) {
                found = Some(Occurrence { first: idx, second: p, shared: v });
            }
        }
        if found.is_none() && e.label == i2.label {
            let v = e.nodes[m2];
            if let Some(p) = pop_live(&mut pending1, v, &used) {
                found = Some(Occurrence { first: p, second: idx, shared: v });
            }
        }
        match found {
            Some(o) => {
                used.insert(o.first);
                used.insert(o.second);
                out.push(o);
            }
            None => {
                if e.label == i1.label {
                    pending1.entry(e.nodes[m1]).or_default().push(idx);
                }
                if e.label == i2.label {
                    pending2.entry(e.nodes[m2]).or_default().push(idx);
                }
            }
        }
    }
    out
}

/// Nonterminal edge for one occurrence: the shared node, then the remaining
/// nodes of the first edge in position order, then those of the second.
pub(crate) fn merged_edge(label: LabelId, d: &Digram, first: &Edge, second: &Edge) -> Edge {
    let (m1, m2) = (d.first().conn as usize, d.second().conn as usize);
    let mut nodes: SmallVec<[NodeId; 4]> = SmallVec::with_capacity(first.rank() + second.rank() - 1);
    nodes.push(first.nodes[m1]);
    nodes.extend(first.nodes.iter().enumerate().filter(|&(m, _)| m != m1).map(|(_, &v)| v));
    nodes.extend(second.nodes.iter().enumerate().filter(|&(m, _)| m != m2).map(|(_, &v)| v));
    Edge { label, nodes }
}

/// The rule `head -> rhs` undoing [`merged_edge`]: formal node 0 is the shared
/// node, `1..r1` the first edge's other positions, `r1..r1+r2-1` the second's.
pub fn digram_rule(d: &Digram, head: LabelId, labels: &LabelTable) -> Rule {
    let (i1, i2) = (d.first(), d.second());
    let r1 = labels.rank(i1.label);
    let r2 = labels.rank(i2.label);
    let formal = |rank: usize, shared_at: usize, offset: u32| {
        let mut next = offset;
        (0..rank)
            .map(|m| {
                if m == shared_at {
                    0
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect::<SmallVec<[NodeId; 4]>>()
    };
    let e1 = Edge {
        label: i1.label,
        nodes: formal(r1, i1.conn as usize, 1),
    };
    let e2 = Edge {
        label: i2.label,
        nodes: formal(r2, i2.conn as usize, r1 as u32),
    };
    Rule {
        head,
        rhs: Hypergraph::new(r1 + r2 - 1, vec![e1, e2]),
    }
}

/// Replaces the occurrences found by [`find_occurrences`] in `graph` with
/// `new_label` edges. The new edge takes the place of the earlier of its two
/// edges. Returns the number of occurrences replaced.
pub fn replace_occurrences(
    graph: &mut Hypergraph,
    labels: &LabelTable,
    d: &Digram,
    new_label: LabelId,
) -> Result<usize> {
    let info = labels.get(new_label).ok_or(Error::UnknownLabel(new_label))?;
    let expected = d.merged_rank(labels);
    if info.kind != LabelKind::Nonterminal || info.rank != expected {
        return Err(Error::RankMismatch {
            label: new_label,
            expected,
            actual: info.rank,
        });
    }
    let occurrences = find_occurrences(graph.edges.iter().enumerate(), d);
    let mut slots: Vec<Option<Edge>> = std::mem::take(&mut graph.edges).into_iter().map(Some).collect();
    for o in &occurrences {
        let e1 = slots[o.first].take().unwrap();
        let e2 = slots[o.second].take().unwrap();
        slots[o.first.min(o.second)] = Some(merged_edge(new_label, d, &e1, &e2));
    }
    graph.edges = slots.into_iter().flatten().collect();
    Ok(occurrences.len())
}
