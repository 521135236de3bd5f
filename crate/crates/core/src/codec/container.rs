//! `.itr` container.
//!
//! ```text
//! "ITR" version:u8 flags:u8
//! len:u64le × 5          dictionary, label table, rules, start graph, NT matrix
//! sections               each a bit stream, zero-padded to a byte boundary
//! ```

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::graph::{Edge, Grammar, Hypergraph, LabelId, LabelTable, Rule};
use crate::succinct::{write_delta, BitReader, BitVec};

use super::nt::NtMatrix;
use super::rules::{read_rules, write_rules};
use super::start_graph::CompressedStartGraph;
use super::{read_k2, read_len, write_k2};

pub const MAGIC: &[u8; 3] = b"ITR";
pub const VERSION: u8 = b'1';
const SECTIONS: usize = 5;
const HEADER_LEN: usize = MAGIC.len() + 2 + 8 * SECTIONS;

const FLAG_ITR_PLUS: u8 = 1;
const FLAG_NUMERIC_NODES: u8 = 2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    /// Node labels are stored as rank-1 edges.
    pub itr_plus: bool,
    /// Node ids are the numbers of an edge-list input.
    pub numeric_nodes: bool,
}

impl Flags {
    fn to_byte(self) -> u8 {
        (self.itr_plus as u8 * FLAG_ITR_PLUS) | (self.numeric_nodes as u8 * FLAG_NUMERIC_NODES)
    }

    fn from_byte(b: u8) -> Result<Self> {
        if b & !(FLAG_ITR_PLUS | FLAG_NUMERIC_NODES) != 0 {
            return Err(Error::corrupt(format!("unknown flags {b:#04x}")));
        }
        Ok(Flags {
            itr_plus: b & FLAG_ITR_PLUS != 0,
            numeric_nodes: b & FLAG_NUMERIC_NODES != 0,
        })
    }
}

/// Byte sizes of the container parts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SectionSizes {
    pub header: usize,
    pub dictionary: usize,
    pub labels: usize,
    pub rules: usize,
    pub start_graph: usize,
    pub nt_matrix: usize,
}

impl SectionSizes {
    pub fn total(&self) -> usize {
        self.header + self.dictionary + self.labels + self.rules + self.start_graph + self.nt_matrix
    }
}

/// A compressed grammar ready to query. The start graph stays encoded;
/// rules are small and kept decoded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedGrammar {
    flags: Flags,
    dict: Dictionary,
    labels: LabelTable,
    rules: Vec<Rule>,
    start: CompressedStartGraph,
    nt: NtMatrix,
}

impl CompressedGrammar {
    /// Encodes `grammar`, whose terminals must be the labels of `dict`.
    pub fn build(grammar: &Grammar, dict: Dictionary, itr_plus: bool, k: usize) -> Result<Self> {
        let t = grammar.labels.num_terminals();
        if t != dict.num_labels() {
            return Err(Error::corrupt(format!(
                "grammar has {t} terminals, dictionary {}",
                dict.num_labels()
            )));
        }
        for a in 0..t as LabelId {
            let expected = dict.label_rank(a).unwrap();
            if grammar.labels.rank(a) != expected {
                return Err(Error::RankMismatch {
                    label: a,
                    expected,
                    actual: grammar.labels.rank(a),
                });
            }
        }
        for (i, rule) in grammar.rules.iter().enumerate() {
            if rule.head as usize != t + i || !rule.is_all_external() {
                return Err(Error::corrupt(format!("rule {i} is out of creation order or has internal nodes")));
            }
            if rule.rhs.edges.iter().any(|e| e.label >= rule.head) {
                return Err(Error::corrupt(format!("rule {i} references a later nonterminal")));
            }
        }
        let start = CompressedStartGraph::encode(&grammar.start, grammar.labels.len(), k)?;
        let nt = NtMatrix::build(&grammar.labels, &grammar.rules, k)?;
        Ok(CompressedGrammar {
            flags: Flags {
                itr_plus,
                numeric_nodes: dict.numeric_nodes(),
            },
            dict,
            labels: grammar.labels.clone(),
            rules: grammar.rules.clone(),
            start,
            nt,
        })
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn labels(&self) -> &LabelTable {
        &self.labels
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> &CompressedStartGraph {
        &self.start
    }

    pub fn nt(&self) -> &NtMatrix {
        &self.nt
    }

    pub fn node_count(&self) -> usize {
        self.start.node_count()
    }

    pub fn rule(&self, label: LabelId) -> Option<&Rule> {
        let i = (label as usize).checked_sub(self.labels.num_terminals())?;
        self.rules.get(i)
    }

    /// One expansion step of a nonterminal edge.
    pub fn expand_edge(&self, e: &Edge) -> Result<Vec<Edge>> {
        let rule = self.rule(e.label).ok_or(Error::UnknownNonterminal(e.label))?;
        if e.rank() != rule.rhs.node_count {
            return Err(Error::RankMismatch {
                label: e.label,
                expected: rule.rhs.node_count,
                actual: e.rank(),
            });
        }
        Ok(rule
            .rhs
            .edges
            .iter()
            .map(|r| Edge::new(r.label, r.nodes.iter().map(|&f| e.nodes[f as usize])))
            .collect())
    }

    /// Fully decoded grammar; the start graph comes back sorted by label.
    pub fn to_grammar(&self) -> Result<Grammar> {
        Ok(Grammar {
            labels: self.labels.clone(),
            rules: self.rules.clone(),
            start: self.start.decode()?,
        })
    }

    pub fn decompress(&self) -> Result<Hypergraph> {
        self.to_grammar()?.decompress()
    }

    fn sections(&self) -> [BitVec; SECTIONS] {
        let mut dict = BitVec::new();
        self.dict.write_to(&mut dict);

        let mut labels = BitVec::new();
        let t = self.labels.num_terminals();
        write_delta(&mut labels, t as u64);
        for a in 0..t as LabelId {
            write_delta(&mut labels, self.labels.rank(a) as u64);
        }

        let mut rules = BitVec::new();
        write_delta(&mut rules, self.rules.len() as u64);
        write_rules(&self.rules, &mut rules);

        let mut start = BitVec::new();
        self.start.write_to(&mut start);

        let mut nt = BitVec::new();
        write_k2(self.nt.tree(), &mut nt);

        [dict, labels, rules, start, nt]
    }

    pub fn section_sizes(&self) -> SectionSizes {
        let s = self.sections().map(|b| b.len().div_ceil(8));
        SectionSizes {
            header: HEADER_LEN,
            dictionary: s[0],
            labels: s[1],
            rules: s[2],
            start_graph: s[3],
            nt_matrix: s[4],
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let sections = self.sections().map(|b| b.to_bytes());
        let mut out = Vec::with_capacity(HEADER_LEN + sections.iter().map(Vec::len).sum::<usize>());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.flags.to_byte());
        for s in &sections {
            out.extend_from_slice(&(s.len() as u64).to_le_bytes());
        }
        for s in &sections {
            out.extend_from_slice(s);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::BadMagic);
        }
        let version = *bytes.get(MAGIC.len()).ok_or(Error::Truncated)?;
        if version != VERSION {
            return Err(Error::BadVersion(version as char));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated);
        }
        let flags = Flags::from_byte(bytes[MAGIC.len() + 1])?;
        let mut lens = [0usize; SECTIONS];
        for (i, len) in lens.iter_mut().enumerate() {
            let at = MAGIC.len() + 2 + 8 * i;
            let v = u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
            *len = usize::try_from(v).map_err(|_| Error::SectionLength)?;
        }
        let total = lens.iter().try_fold(HEADER_LEN, |acc, &l| acc.checked_add(l));
        match total {
            Some(t) if t == bytes.len() => {}
            Some(t) if t > bytes.len() => return Err(Error::Truncated),
            _ => return Err(Error::SectionLength),
        }
        let mut at = HEADER_LEN;
        let mut parts = lens.map(|l| {
            let s = &bytes[at..at + l];
            at += l;
            BitReader::new(s)
        });
        let [dict_r, labels_r, rules_r, start_r, nt_r] = &mut parts;

        let dict = Dictionary::read_from(dict_r, flags.numeric_nodes)?;
        finish(dict_r, "dictionary")?;

        let t = read_len(labels_r)?;
        let ranks = (0..t).map(|_| read_len(labels_r)).collect::<Result<Vec<_>>>()?;
        finish(labels_r, "label table")?;
        if ranks != dict.terminal_ranks() || ranks.contains(&0) {
            return Err(Error::corrupt("label table disagrees with the dictionary"));
        }
        let mut labels = LabelTable::with_terminals(ranks);

        let nrules = read_len(rules_r)?;
        let rules = read_rules(rules_r, nrules, &mut labels)?;
        finish(rules_r, "rules")?;

        let start = CompressedStartGraph::read_from(start_r, labels.len())?;
        finish(start_r, "start graph")?;

        let tree = read_k2(nt_r)?;
        finish(nt_r, "NT matrix")?;
        if tree.rows() != nrules || tree.cols() != t {
            return Err(Error::corrupt("NT matrix shape"));
        }

        Ok(CompressedGrammar {
            flags,
            dict,
            labels,
            rules,
            start,
            nt: NtMatrix::from_tree(t, tree),
        })
    }
}

/// A section must be consumed up to its zero padding.
fn finish(r: &mut BitReader<'_>, name: &str) -> Result<()> {
    let rest = r.remaining();
    if rest >= 8 || (rest > 0 && r.read_bits(rest as u32)? != 0) {
        return Err(Error::corrupt(format!("trailing data in {name} section")));
    }
    Ok(())
}

pub fn serialize(grammar: &Grammar, dict: Dictionary, itr_plus: bool, k: usize) -> Result<Vec<u8>> {
    Ok(CompressedGrammar::build(grammar, dict, itr_plus, k)?.to_bytes())
}

pub fn deserialize(bytes: &[u8]) -> Result<CompressedGrammar> {
    CompressedGrammar::from_bytes(bytes)
}
