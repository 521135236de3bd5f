//! Reading and writing N-Triples and tab-separated edge lists.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::dictionary::{Dictionary, NodeLabels};
use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `<s> <p> <o> .` lines; IRIs, blank nodes and literals are node terms.
    NTriples,
    /// `src<TAB>label<TAB>dst` lines with decimal node ids.
    EdgeList,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nt" | "ntriples" => Ok(InputFormat::NTriples),
            "el" | "edgelist" => Ok(InputFormat::EdgeList),
            _ => Err(format!("unknown format {s:?} (expected nt or el)")),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::NTriples => "nt",
            InputFormat::EdgeList => "el",
        })
    }
}

pub fn parse<R: BufRead>(input: R, format: InputFormat) -> Result<(Hypergraph, Dictionary)> {
    match format {
        InputFormat::NTriples => parse_ntriples(input),
        InputFormat::EdgeList => parse_edge_list(input),
    }
}

pub fn emit<W: Write>(graph: &Hypergraph, dict: &Dictionary, format: InputFormat, out: W) -> Result<()> {
    match format {
        InputFormat::NTriples => emit_ntriples(graph, dict, out),
        InputFormat::EdgeList => emit_edge_list(graph, dict, out),
    }
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

/// Splits off one N-Triples term, returning it and the rest of the line.
fn next_term(s: &str, line: usize) -> Result<(&str, &str)> {
    let s = s.trim_start();
    let bytes = s.as_bytes();
    let end = match bytes.first() {
        None => return Err(Error::parse(line, "expected a term")),
        Some(b'<') => s.find('>').ok_or_else(|| Error::parse(line, "unterminated IRI"))? + 1,
        Some(b'"') => {
            let mut i = 1;
            loop {
                match bytes.get(i) {
                    None => return Err(Error::parse(line, "unterminated literal")),
                    Some(b'\\') => i += 2,
                    Some(b'"') => break,
                    Some(_) => i += 1,
                }
            }
            i += 1;
            if bytes.get(i) == Some(&b'@') {
                i += s[i..].find(char::is_whitespace).unwrap_or(s.len() - i);
            } else if s[i..].starts_with("^^<") {
                i += s[i..].find('>').ok_or_else(|| Error::parse(line, "unterminated datatype IRI"))? + 1;
            }
            i
        }
        Some(b'_') if s.starts_with("_:") => {
            let mut e = s.find(char::is_whitespace).unwrap_or(s.len());
            // `_:b .` vs `_:b.`: a label never ends with a dot
            while e > 2 && bytes[e - 1] == b'.' {
                e -= 1;
            }
            if e == 2 {
                return Err(Error::parse(line, "empty blank node label"));
            }
            e
        }
        Some(_) => return Err(Error::parse(line, format!("unexpected term start in {:?}", truncate(s)))),
    };
    Ok((&s[..end], &s[end..]))
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(24) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

/// Parses one triple line into its three surface terms.
fn split_triple(text: &str, line: usize) -> Result<[&str; 3]> {
    let (s, rest) = next_term(text, line)?;
    if s.starts_with('"') {
        return Err(Error::parse(line, "literal in subject position"));
    }
    let (p, rest) = next_term(rest, line)?;
    if !p.starts_with('<') {
        return Err(Error::parse(line, "predicate must be an IRI"));
    }
    let (o, rest) = next_term(rest, line)?;
    let rest = rest.trim_start();
    let rest = rest
        .strip_prefix('.')
        .ok_or_else(|| Error::parse(line, "missing terminating '.'"))?
        .trim_start();
    if !(rest.is_empty() || rest.starts_with('#')) {
        return Err(Error::parse(line, "trailing content after '.'"));
    }
    Ok([s, p, o])
}

pub fn parse_ntriples<R: BufRead>(input: R) -> Result<(Hypergraph, Dictionary)> {
    let mut dict = Dictionary::new();
    let mut edges = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let [s, p, o] = split_triple(&line, i + 1)?;
        let s = dict.intern_node(s);
        let p = dict.intern_label(p, 2);
        let o = dict.intern_node(o);
        edges.push(Edge::new(p, [s, o]));
    }
    Ok((Hypergraph::new(dict.num_node_terms(), edges), dict))
}

fn parse_node_id(s: &str, line: usize) -> Result<NodeId> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid node id {s:?}")))
}

pub fn parse_edge_list<R: BufRead>(input: R) -> Result<(Hypergraph, Dictionary)> {
    let mut dict = Dictionary::with_numeric_nodes();
    let mut edges = Vec::new();
    let mut node_count = 0usize;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let mut fields = line.trim_end_matches('\r').split('\t');
        let (Some(src), Some(label), Some(dst), None) = (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::parse(i + 1, "expected src<TAB>label<TAB>dst"));
        };
        let (src, dst) = (parse_node_id(src, i + 1)?, parse_node_id(dst, i + 1)?);
        if label.is_empty() {
            return Err(Error::parse(i + 1, "empty edge label"));
        }
        node_count = node_count.max(src.max(dst) as usize + 1);
        edges.push(Edge::new(dict.intern_label(label, 2), [src, dst]));
    }
    Ok((Hypergraph::new(node_count, edges), dict))
}

/// Reads `node<TAB>label` lines. `node` is a decimal id for edge-list
/// dictionaries and a node term of `dict` otherwise. Repeating a node with
/// the same label is accepted; a different label is an error.
pub fn parse_node_labels<R: BufRead>(input: R, dict: &Dictionary) -> Result<NodeLabels> {
    let mut labels = NodeLabels::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let Some((node, label)) = line.trim_end_matches('\r').split_once('\t') else {
            return Err(Error::parse(i + 1, "expected node<TAB>label"));
        };
        if label.is_empty() || label.contains('\t') {
            return Err(Error::parse(i + 1, "expected node<TAB>label"));
        }
        let v = if dict.numeric_nodes() {
            parse_node_id(node, i + 1)?
        } else {
            dict.lookup_node(node)
                .ok_or_else(|| Error::parse(i + 1, format!("unknown node term {node}")))?
        };
        if let Some(prev) = labels.get(&v) {
            if prev != label {
                return Err(Error::ConflictingLabels {
                    node: v,
                    first: prev.clone(),
                    second: label.to_owned(),
                });
            }
            continue;
        }
        labels.insert(v, label.to_owned());
    }
    Ok(labels)
}

fn binary_edge(e: &Edge) -> Result<(NodeId, NodeId)> {
    match e.nodes[..] {
        [s, o] => Ok((s, o)),
        _ => Err(Error::RankMismatch {
            label: e.label,
            expected: 2,
            actual: e.rank(),
        }),
    }
}

pub fn emit_ntriples<W: Write>(graph: &Hypergraph, dict: &Dictionary, mut out: W) -> Result<()> {
    for e in &graph.edges {
        let (s, o) = binary_edge(e)?;
        let p = dict.label_term(e.label).ok_or(Error::DanglingId(e.label as u64))?;
        let s = dict.node_term(s).ok_or(Error::DanglingId(s as u64))?;
        let o = dict.node_term(o).ok_or(Error::DanglingId(o as u64))?;
        writeln!(out, "{s} {p} {o} .")?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_edge_list<W: Write>(graph: &Hypergraph, dict: &Dictionary, mut out: W) -> Result<()> {
    for e in &graph.edges {
        let (s, o) = binary_edge(e)?;
        let p = dict.label_term(e.label).ok_or(Error::DanglingId(e.label as u64))?;
        let s = dict.node_term(s).ok_or(Error::DanglingId(s as u64))?;
        let o = dict.node_term(o).ok_or(Error::DanglingId(o as u64))?;
        writeln!(out, "{s}\t{p}\t{o}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `node<TAB>label` lines in the form [`parse_node_labels`] reads.
pub fn emit_node_labels<W: Write>(labels: &NodeLabels, dict: &Dictionary, mut out: W) -> Result<()> {
    for (&v, l) in labels {
        let v = dict.node_term(v).ok_or(Error::DanglingId(v as u64))?;
        writeln!(out, "{v}\t{l}")?;
    }
    out.flush()?;
    Ok(())
}
