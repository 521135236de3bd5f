//! Triple-pattern, neighborhood and node-label queries on a compressed
//! grammar.
//!
//! Start-graph edges are seeded from the incidence matrix (bound node), the
//! sorted label list plus the NT matrix (bound predicate only), or all
//! columns. Each seed is then drained depth-first: a nonterminal edge is
//! expanded only if its node arguments contain every bound node and, for a
//! bound predicate, its rule produces that label; a rank-2 terminal edge is
//! emitted if it matches the pattern.

use std::fmt;

use crate::codec::CompressedGrammar;
use crate::error::{Error, Result};
use crate::graph::{Edge, LabelId, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TriplePattern {
    pub s: Option<NodeId>,
    pub p: Option<LabelId>,
    pub o: Option<NodeId>,
}

impl TriplePattern {
    pub fn new(s: Option<NodeId>, p: Option<LabelId>, o: Option<NodeId>) -> Self {
        TriplePattern { s, p, o }
    }

    /// Pattern shape such as `S?O`, used to group benchmark results.
    pub fn shape(&self) -> String {
        [
            if self.s.is_some() { 'S' } else { '?' },
            if self.p.is_some() { 'P' } else { '?' },
            if self.o.is_some() { 'O' } else { '?' },
        ]
        .iter()
        .collect()
    }

    pub fn matches(&self, t: &Triple) -> bool {
        self.s.is_none_or(|s| s == t.s) && self.p.is_none_or(|p| p == t.p) && self.o.is_none_or(|o| o == t.o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub s: NodeId,
    pub p: LabelId,
    pub o: NodeId,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.p, self.o)
    }
}

/// Work done by one query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Start-graph edges decoded as seeds.
    pub seeds: usize,
    /// Nonterminal edges replaced by their rule.
    pub expanded: usize,
    /// Nonterminal edges dropped by the node or NT filter.
    pub pruned: usize,
    pub emitted: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

fn seeds(view: &CompressedGrammar, q: &TriplePattern) -> Vec<usize> {
    let sg = view.start();
    if let Some(r) = q.s.or(q.o) {
        return sg.columns_at_node(r);
    }
    if let Some(p) = q.p {
        let mut cols: Vec<usize> = sg.columns_with_label(p).collect();
        for a in view.nt().producers(p) {
            cols.extend(sg.columns_with_label(a));
        }
        return cols;
    }
    (0..sg.edge_count()).collect()
}

/// Streams the answers of `q` to `sink` in start-graph column order,
/// depth-first through expansions.
pub fn answer_with<F: FnMut(Triple)>(view: &CompressedGrammar, q: &TriplePattern, mut sink: F) -> Result<QueryStats> {
    let mut stats = QueryStats::default();
    let labels = view.labels();
    let admits = |e: &Edge| {
        q.s.is_none_or(|s| e.touches(s))
            && q.o.is_none_or(|o| e.touches(o))
            && q.p.is_none_or(|p| view.nt().generates(e.label, p))
    };
    let mut stack: Vec<Edge> = Vec::new();
    for col in seeds(view, q) {
        stats.seeds += 1;
        stack.push(view.start().decode_edge(col)?);
        while let Some(e) = stack.pop() {
            if labels.is_terminal(e.label) {
                if let [s, o] = e.nodes[..] {
                    let t = Triple { s, p: e.label, o };
                    if q.matches(&t) {
                        stats.emitted += 1;
                        sink(t);
                    }
                }
            } else if admits(&e) {
                stats.expanded += 1;
                let children = view.expand_edge(&e)?;
                stack.extend(children.into_iter().rev());
            } else {
                stats.pruned += 1;
            }
        }
    }
    Ok(stats)
}

pub fn answer(view: &CompressedGrammar, q: &TriplePattern) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    answer_with(view, q, |t| out.push(t))?;
    Ok(out)
}

/// Edges leaving `v` (`(v, ?, ?)`), entering it (`(?, ?, v)`), or both
/// lists concatenated, so a loop at `v` is listed twice.
pub fn neighborhood(view: &CompressedGrammar, v: NodeId, dir: Direction) -> Result<Vec<Triple>> {
    let out_q = TriplePattern::new(Some(v), None, None);
    let in_q = TriplePattern::new(None, None, Some(v));
    match dir {
        Direction::Out => answer(view, &out_q),
        Direction::In => answer(view, &in_q),
        Direction::Both => {
            let mut all = answer(view, &out_q)?;
            all.extend(answer(view, &in_q)?);
            Ok(all)
        }
    }
}

/// Label text of `v` in a container built with node labels as rank-1 edges.
pub fn node_label(view: &CompressedGrammar, v: NodeId) -> Result<Option<String>> {
    if !view.flags().itr_plus {
        return Err(Error::NotItrPlus);
    }
    let labels = view.labels();
    let dict = view.dictionary();
    let label_edges: Vec<LabelId> = (0..labels.num_terminals() as LabelId)
        .filter(|&a| labels.rank(a) == 1)
        .collect();
    let mut found: Option<LabelId> = None;
    let mut stack = Vec::new();
    for col in view.start().columns_at_node(v) {
        stack.push(view.start().decode_edge(col)?);
        while let Some(e) = stack.pop() {
            if labels.is_terminal(e.label) {
                if e.rank() != 1 || e.nodes[0] != v {
                    continue;
                }
                match found {
                    Some(prev) if prev != e.label => {
                        let term = |a: LabelId| dict.label_term(a).unwrap_or_default().to_owned();
                        return Err(Error::ConflictingLabels {
                            node: v,
                            first: term(prev),
                            second: term(e.label),
                        });
                    }
                    _ => found = Some(e.label),
                }
            } else if e.touches(v) && label_edges.iter().any(|&a| view.nt().generates(e.label, a)) {
                stack.extend(view.expand_edge(&e)?.into_iter().rev());
            }
        }
    }
    found
        .map(|a| {
            dict.label_term(a)
                .map(str::to_owned)
                .ok_or(Error::DanglingId(a as u64))
        })
        .transpose()
}

/// Splits a pattern into three terms. `"..."` literals and `<...>` IRIs
/// may contain spaces.
fn split_terms(text: &str) -> Result<Vec<&str>> {
    let mut terms = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let bytes = rest.as_bytes();
        let mut end = match bytes[0] {
            b'"' => {
                let mut i = 1;
                loop {
                    match bytes.get(i) {
                        None => return Err(Error::BadPattern("unterminated literal".into())),
                        Some(b'\\') => i += 2,
                        Some(b'"') => break i + 1,
                        Some(_) => i += 1,
                    }
                }
            }
            b'<' => rest
                .find('>')
                .map(|i| i + 1)
                .ok_or_else(|| Error::BadPattern("unterminated IRI".into()))?,
            _ => 0,
        };
        end += rest[end..].find(char::is_whitespace).unwrap_or(rest.len() - end);
        terms.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    if terms.len() != 3 {
        return Err(Error::BadPattern(format!("expected 3 terms, found {}", terms.len())));
    }
    Ok(terms)
}

/// Result of resolving one pattern position.
enum Resolved {
    Any,
    Id(u32),
    Unknown,
}

fn resolve(term: &str, lookup: impl Fn(&str) -> Option<u32>, valid: impl Fn(u32) -> bool) -> Result<Resolved> {
    if term == "?" {
        return Ok(Resolved::Any);
    }
    let id = match term.strip_prefix('#') {
        Some(digits) => Some(
            digits
                .parse::<u32>()
                .map_err(|_| Error::BadPattern(format!("invalid id {term:?}")))?,
        ),
        None => lookup(term),
    };
    Ok(match id {
        Some(id) if valid(id) => Resolved::Id(id),
        _ => Resolved::Unknown,
    })
}

/// Parses `S P O` where each term is `?`, `#<id>` or a dictionary term.
/// Returns `None` when a bound term is unknown, i.e. the answer is empty.
pub fn parse_pattern(view: &CompressedGrammar, text: &str) -> Result<Option<TriplePattern>> {
    let terms = split_terms(text)?;
    let dict = view.dictionary();
    let nodes = view.node_count();
    let labels = view.labels();
    let node_ok = |v: u32| (v as usize) < nodes;
    let s = resolve(terms[0], |t| dict.lookup_node(t), node_ok)?;
    let p = resolve(
        terms[1],
        |t| dict.lookup_label(t, 2),
        |a| labels.is_terminal(a) && labels.rank(a) == 2,
    )?;
    let o = resolve(terms[2], |t| dict.lookup_node(t), node_ok)?;
    let mut q = TriplePattern::default();
    for (r, slot) in [(s, &mut q.s), (p, &mut q.p), (o, &mut q.o)] {
        match r {
            Resolved::Any => {}
            Resolved::Id(id) => *slot = Some(id),
            Resolved::Unknown => return Ok(None),
        }
    }
    Ok(Some(q))
}

/// Renders an answer the way decompression writes edges: tab-separated for
/// edge-list containers, N-Triples otherwise.
pub fn format_triple(view: &CompressedGrammar, t: &Triple) -> Result<String> {
    let dict = view.dictionary();
    let s = dict.node_term(t.s).ok_or(Error::DanglingId(t.s as u64))?;
    let p = dict.label_term(t.p).ok_or(Error::DanglingId(t.p as u64))?;
    let o = dict.node_term(t.o).ok_or(Error::DanglingId(t.o as u64))?;
    Ok(if dict.numeric_nodes() {
        format!("{s}\t{p}\t{o}")
    } else {
        format!("{s} {p} {o} .")
    })
}
