use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use rustc_hash::{FxHashMap, FxHashSet};

use super::{Digram, IncidenceType};
use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, NodeId};

/// Per-node incidence-type frequencies `c(v, i)`.
///
/// Each node keeps a short unsorted list; nodes rarely see more than a
/// handful of distinct incidence-types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    per_node: Vec<Vec<(IncidenceType, u32)>>,
}

impl CountTable {
    pub fn with_nodes(node_count: usize) -> Self {
        CountTable {
            per_node: vec![Vec::new(); node_count],
        }
    }

    pub fn get(&self, v: NodeId, it: IncidenceType) -> u32 {
        self.per_node
            .get(v as usize)
            .and_then(|types| types.iter().find(|(t, _)| *t == it))
            .map_or(0, |&(_, c)| c)
    }

    /// Incidence-types present at `v` with their (positive) counts.
    pub fn types(&self, v: NodeId) -> &[(IncidenceType, u32)] {
        self.per_node.get(v as usize).map_or(&[], Vec::as_slice)
    }

    pub fn node_count(&self) -> usize {
        self.per_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_node.iter().all(Vec::is_empty)
    }

    fn inc(&mut self, v: NodeId, it: IncidenceType) {
        let v = v as usize;
        if v >= self.per_node.len() {
            self.per_node.resize_with(v + 1, Vec::new);
        }
        let types = &mut self.per_node[v];
        match types.iter_mut().find(|(t, _)| *t == it) {
            Some((_, c)) => *c += 1,
            None => types.push((it, 1)),
        }
    }

    fn dec(&mut self, v: NodeId, it: IncidenceType) {
        let types = &mut self.per_node[v as usize];
        let idx = types
            .iter()
            .position(|(t, _)| *t == it)
            .expect("decrementing an absent incidence-type");
        types[idx].1 -= 1;
        if types[idx].1 == 0 {
            types.swap_remove(idx);
        }
    }

    fn add_edge(&mut self, e: &Edge) {
        for (m, &v) in e.nodes.iter().enumerate() {
            self.inc(v, IncidenceType::new(e.label, m as u32));
        }
    }
}

/// One scan over all edges, one increment per (edge, position).
pub fn count_incidence(graph: &Hypergraph) -> CountTable {
    let mut table = CountTable::with_nodes(graph.node_count);
    for e in &graph.edges {
        table.add_edge(e);
    }
    table
}

/// `count_v(i1, i2)`: `min` of the two frequencies, or half the frequency
/// (rounded down) when both incidence-types coincide.
pub fn count_at_node(table: &CountTable, v: NodeId, i1: IncidenceType, i2: IncidenceType) -> u64 {
    if i1 == i2 {
        (table.get(v, i1) / 2) as u64
    } else {
        table.get(v, i1).min(table.get(v, i2)) as u64
    }
}

/// Estimated digram frequencies with max extraction.
///
/// Ties between equal counts resolve to the canonically smallest digram.
/// Digrams that were excluded (already replaced, or too wide to replace) are
/// dropped and ignore all later updates.
#[derive(Debug, Clone, Default)]
pub struct DigramCounts {
    counts: FxHashMap<Digram, u64>,
    ranked: BTreeSet<(Reverse<u64>, Digram)>,
    excluded: FxHashSet<Digram>,
}

impl DigramCounts {
    fn from_map(counts: FxHashMap<Digram, u64>) -> Self {
        let ranked = counts.iter().map(|(&d, &n)| (Reverse(n), d)).collect();
        DigramCounts {
            counts,
            ranked,
            excluded: FxHashSet::default(),
        }
    }

    pub fn get(&self, d: &Digram) -> u64 {
        self.counts.get(d).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn most_frequent(&self) -> Result<(Digram, u64)> {
        self.ranked
            .iter()
            .next()
            .map(|&(Reverse(n), d)| (d, n))
            .ok_or(Error::EmptyCounts)
    }

    /// Digrams by decreasing count, ties in canonical order.
    pub fn ranked(&self) -> impl Iterator<Item = (Digram, u64)> + '_ {
        self.ranked.iter().map(|&(Reverse(n), d)| (d, n))
    }

    pub fn exclude(&mut self, d: Digram) {
        if let Some(n) = self.counts.remove(&d) {
            self.ranked.remove(&(Reverse(n), d));
        }
        self.excluded.insert(d);
    }

    pub fn is_excluded(&self, d: &Digram) -> bool {
        self.excluded.contains(d)
    }

    pub fn excluded(&self) -> impl Iterator<Item = &Digram> {
        self.excluded.iter()
    }

    /// Snapshot of all positive counts.
    pub fn to_map(&self) -> HashMap<Digram, u64> {
        self.counts.iter().map(|(&d, &n)| (d, n)).collect()
    }

    fn bump(&mut self, d: Digram, up: bool) {
        if self.excluded.contains(&d) {
            return;
        }
        let old = self.get(&d);
        let new = if up {
            old + 1
        } else {
            old.checked_sub(1)
                .unwrap_or_else(|| panic!("digram count underflow for {d}"))
        };
        if old > 0 {
            self.ranked.remove(&(Reverse(old), d));
        }
        if new > 0 {
            self.counts.insert(d, new);
            self.ranked.insert((Reverse(new), d));
        } else {
            self.counts.remove(&d);
        }
    }
}

pub fn count_digrams(table: &CountTable) -> DigramCounts {
    let mut counts: FxHashMap<Digram, u64> = FxHashMap::default();
    for types in &table.per_node {
        for (i, &(t1, c1)) in types.iter().enumerate() {
            if c1 >= 2 {
                *counts.entry(Digram::new(t1, t1)).or_default() += (c1 / 2) as u64;
            }
            for &(t2, c2) in &types[i + 1..] {
                *counts.entry(Digram::new(t1, t2)).or_default() += c1.min(c2) as u64;
            }
        }
    }
    DigramCounts::from_map(counts)
}

/// Removes one incidence of `it` at `v`. The count of `(it, i2)` drops
/// exactly when `it` was the minimum side before the decrement, or, for
/// `i2 = it`, when the old frequency was even.
fn remove_incidence(table: &mut CountTable, counts: &mut DigramCounts, v: NodeId, it: IncidenceType) {
    let before = table.get(v, it);
    assert!(before > 0, "removing incidence {it} absent at node {v}");
    for &(other, c) in table.types(v) {
        if other == it {
            if before.is_multiple_of(2) {
                counts.bump(Digram::new(it, it), false);
            }
        } else if before <= c {
            counts.bump(Digram::new(it, other), false);
        }
    }
    table.dec(v, it);
}

fn add_incidence(table: &mut CountTable, counts: &mut DigramCounts, v: NodeId, it: IncidenceType) {
    let before = table.get(v, it);
    for &(other, c) in table.types(v) {
        if other == it {
            if before % 2 == 1 {
                counts.bump(Digram::new(it, it), true);
            }
        } else if before < c {
            counts.bump(Digram::new(it, other), true);
        }
    }
    table.inc(v, it);
}

/// Keeps `table` and `counts` equal to a recount after removing `removed`
/// and adding `added` (if any).
pub fn update_counts(
    table: &mut CountTable,
    counts: &mut DigramCounts,
    removed: &Edge,
    added: Option<&Edge>,
) {
    for (m, &v) in removed.nodes.iter().enumerate() {
        remove_incidence(table, counts, v, IncidenceType::new(removed.label, m as u32));
    }
    if let Some(e) = added {
        add_edge_counts(table, counts, e);
    }
}

pub(crate) fn add_edge_counts(table: &mut CountTable, counts: &mut DigramCounts, e: &Edge) {
    for (m, &v) in e.nodes.iter().enumerate() {
        add_incidence(table, counts, v, IncidenceType::new(e.label, m as u32));
    }
}
