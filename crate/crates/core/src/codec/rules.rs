use crate::error::{Error, Result};
use crate::graph::{Edge, Hypergraph, LabelTable, NodeId, Rule};
use crate::succinct::{write_delta, BitCursor, BitSource, BitVec, DeltaStream};

/// Rule right-hand sides as `δ(#edges)` and, per edge, `δ(label)` followed by
/// `δ(node)` for each position. The head of the `i`-th rule is the `i`-th
/// nonterminal, so it is not written.
pub fn encode_rules(rules: &[Rule]) -> DeltaStream {
    let mut out = BitVec::new();
    write_rules(rules, &mut out);
    DeltaStream::from_bits(out)
}

pub(crate) fn write_rules(rules: &[Rule], out: &mut BitVec) {
    for rule in rules {
        write_delta(out, rule.rhs.edges.len() as u64);
        for e in &rule.rhs.edges {
            write_delta(out, e.label as u64);
            for &v in &e.nodes {
                write_delta(out, v as u64);
            }
        }
    }
}

/// Decodes a whole stream. `labels` must hold exactly the terminals; one
/// nonterminal is appended per decoded rule.
pub fn decode_rules(stream: &DeltaStream, labels: &mut LabelTable) -> Result<Vec<Rule>> {
    let mut cur = BitCursor::new(stream.bits());
    let mut rules = Vec::new();
    while !cur.is_at_end() {
        rules.push(read_rule(&mut cur, labels)?);
    }
    Ok(rules)
}

pub(crate) fn read_rules<R: BitSource>(r: &mut R, count: usize, labels: &mut LabelTable) -> Result<Vec<Rule>> {
    (0..count).map(|_| read_rule(r, labels)).collect()
}

/// Reads the next rule; its rank is `1 + max node`, and every node below
/// that must occur.
fn read_rule<R: BitSource>(r: &mut R, labels: &mut LabelTable) -> Result<Rule> {
    let head = labels.len() as u64;
    let n = r.read_delta()?;
    if n == 0 {
        return Err(Error::corrupt("rule without edges"));
    }
    let mut edges = Vec::with_capacity(n.min(1024) as usize);
    for _ in 0..n {
        let label = r.read_delta()?;
        if label >= head {
            return Err(Error::UnknownLabel(label.min(u32::MAX as u64) as u32));
        }
        let label = label as u32;
        let rank = labels.rank(label);
        let nodes = (0..rank)
            .map(|_| {
                let v = r.read_delta()?;
                NodeId::try_from(v).map_err(|_| Error::corrupt("rule node id overflow"))
            })
            .collect::<Result<Vec<_>>>()?;
        edges.push(Edge::new(label, nodes));
    }
    let rank = edges.iter().flat_map(|e| e.nodes.iter()).max().map_or(0, |&m| m as usize + 1);
    let rhs = Hypergraph::new(rank, edges);
    let head = labels.push_nonterminal(rank);
    let rule = Rule { head, rhs };
    if !rule.is_all_external() {
        return Err(Error::corrupt(format!("rule for label {head} has internal nodes")));
    }
    Ok(rule)
}
