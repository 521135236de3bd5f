//! Hypergraphs and straight-line hyperedge replacement grammars.
//!
//! Nodes are dense integers `0..node_count`. An [`Edge`] carries a label and
//! an ordered node sequence whose length is the rank of that label; position
//! `m` of the sequence is the connection-type of the node at that position.
//! For rank-2 terminals position 0 is the source and position 1 the target.
//!
//! Label ids are shared between terminals and nonterminals: terminals occupy
//! `0..num_terminals`, and the nonterminal created by the `i`-th rule has id
//! `num_terminals + i`. Every rule right-hand side uses exactly the nodes
//! `0..rank(head)`, all of which are attachment nodes.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type LabelId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKind {
    Terminal,
    Nonterminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelInfo {
    pub id: LabelId,
    pub rank: usize,
    pub kind: LabelKind,
}

/// Ranked alphabet: terminals first, then nonterminals in creation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    infos: Vec<LabelInfo>,
    num_terminals: usize,
}

impl LabelTable {
    pub fn with_terminals<I: IntoIterator<Item = usize>>(ranks: I) -> Self {
        let infos: Vec<LabelInfo> = ranks
            .into_iter()
            .enumerate()
            .map(|(i, rank)| {
                assert!(rank >= 1, "labels have rank >= 1");
                LabelInfo {
                    id: i as LabelId,
                    rank,
                    kind: LabelKind::Terminal,
                }
            })
            .collect();
        let num_terminals = infos.len();
        LabelTable {
            infos,
            num_terminals,
        }
    }

    pub fn push_nonterminal(&mut self, rank: usize) -> LabelId {
        assert!(rank >= 1, "labels have rank >= 1");
        let id = self.infos.len() as LabelId;
        self.infos.push(LabelInfo {
            id,
            rank,
            kind: LabelKind::Nonterminal,
        });
        id
    }

    pub fn get(&self, id: LabelId) -> Option<&LabelInfo> {
        self.infos.get(id as usize)
    }

    /// Panics on unknown labels.
    pub fn rank(&self, id: LabelId) -> usize {
        self.infos[id as usize].rank
    }

    pub fn is_terminal(&self, id: LabelId) -> bool {
        (id as usize) < self.num_terminals
    }

    pub fn num_terminals(&self) -> usize {
        self.num_terminals
    }

    pub fn num_nonterminals(&self) -> usize {
        self.infos.len() - self.num_terminals
    }

    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabelInfo> {
        self.infos.iter()
    }

    pub(crate) fn truncate_nonterminals(&mut self, keep: usize) {
        self.infos.truncate(self.num_terminals + keep);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: LabelId,
    pub nodes: SmallVec<[NodeId; 4]>,
}

impl Edge {
    pub fn new<I: IntoIterator<Item = NodeId>>(label: LabelId, nodes: I) -> Self {
        Edge {
            label,
            nodes: nodes.into_iter().collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.nodes.len()
    }

    /// True if the edge is connected to `v` at any position.
    pub fn touches(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.label)?;
        for (i, v) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hypergraph {
    pub node_count: usize,
    pub edges: Vec<Edge>,
}

impl Hypergraph {
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|e| e.nodes.iter().all(|&v| (v as usize) < node_count)));
        Hypergraph { node_count, edges }
    }

    /// Grammar size contribution under the `1 + rank` cost model.
    pub fn cost(&self) -> usize {
        self.edges.iter().map(|e| 1 + e.rank()).sum()
    }
}

/// Edge-multiset equality: order-insensitive, multiplicity-sensitive.
pub fn graphs_equal(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.node_count != b.node_count || a.edges.len() != b.edges.len() {
        return false;
    }
    let mut x = a.edges.clone();
    let mut y = b.edges.clone();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: LabelId,
    pub rhs: Hypergraph,
}

impl Rule {
    /// Rank of the head, i.e. one more than the largest formal node.
    pub fn rank(&self) -> usize {
        self.rhs
            .edges
            .iter()
            .flat_map(|e| e.nodes.iter())
            .map(|&v| v as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// True when the rhs uses exactly the formal nodes `0..rank`.
    pub fn is_all_external(&self) -> bool {
        let rank = self.rank();
        if self.rhs.node_count != rank {
            return false;
        }
        let mut seen = vec![false; rank];
        for e in &self.rhs.edges {
            for &v in &e.nodes {
                seen[v as usize] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateRule(LabelId),
    MissingRule(LabelId),
    HeadIsTerminal(LabelId),
    Recursion(LabelId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateRule(a) => write!(f, "nonterminal {a} has more than one rule"),
            Violation::MissingRule(a) => write!(f, "nonterminal {a} has no rule"),
            Violation::HeadIsTerminal(a) => write!(f, "rule head {a} is a terminal"),
            Violation::Recursion(a) => write!(f, "nonterminal {a} derives itself"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub labels: LabelTable,
    pub rules: Vec<Rule>,
    pub start: Hypergraph,
}

impl Grammar {
    /// A grammar without rules whose start graph is `graph`.
    pub fn from_graph(graph: Hypergraph, terminal_ranks: &[usize]) -> Self {
        Grammar {
            labels: LabelTable::with_terminals(terminal_ranks.iter().copied()),
            rules: Vec::new(),
            start: graph,
        }
    }

    pub fn rule(&self, label: LabelId) -> Option<&Rule> {
        let idx = (label as usize).checked_sub(self.labels.num_terminals())?;
        match self.rules.get(idx) {
            Some(r) if r.head == label => Some(r),
            _ => self.rules.iter().find(|r| r.head == label),
        }
    }

    pub fn is_terminal(&self, label: LabelId) -> bool {
        self.labels.is_terminal(label)
    }

    /// Total size under the `1 + rank` cost model, start graph plus all rules.
    pub fn size(&self) -> usize {
        self.start.cost() + self.rules.iter().map(|r| r.rhs.cost()).sum::<usize>()
    }

    /// One replacement step: the rule's rhs with formal node `i` substituted
    /// by `e.nodes[i]`.
    pub fn expand_edge(&self, e: &Edge) -> Result<Vec<Edge>> {
        let rule = self
            .rule(e.label)
            .ok_or(Error::UnknownNonterminal(e.label))?;
        let rank = rule.rhs.node_count;
        if e.rank() != rank {
            return Err(Error::RankMismatch {
                label: e.label,
                expected: rank,
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

    /// Expands `e` until only terminal edges remain, appending them to `out`
    /// in depth-first order.
    pub fn expand_fully(&self, e: &Edge, out: &mut Vec<Edge>) -> Result<()> {
        let mut stack = vec![e.clone()];
        while let Some(e) = stack.pop() {
            if self.is_terminal(e.label) {
                out.push(e);
            } else {
                let mut children = self.expand_edge(&e)?;
                children.reverse();
                stack.extend(children);
            }
        }
        Ok(())
    }

    pub fn decompress(&self) -> Result<Hypergraph> {
        let mut edges = Vec::with_capacity(self.start.edges.len());
        for e in &self.start.edges {
            self.expand_fully(e, &mut edges)?;
        }
        Ok(Hypergraph {
            node_count: self.start.node_count,
            edges,
        })
    }

    /// Checks that every nonterminal has exactly one rule and that the rule
    /// reference graph is acyclic. Reports the first violation found.
    pub fn validate_straight_line(&self) -> std::result::Result<(), Violation> {
        let nt = self.labels.num_terminals();
        let total = self.labels.len().max(
            self.rules
                .iter()
                .map(|r| r.head as usize + 1)
                .max()
                .unwrap_or(0),
        );
        let mut owner: Vec<Option<usize>> = vec![None; total];
        for (i, r) in self.rules.iter().enumerate() {
            if (r.head as usize) < nt {
                return Err(Violation::HeadIsTerminal(r.head));
            }
            if owner[r.head as usize].replace(i).is_some() {
                return Err(Violation::DuplicateRule(r.head));
            }
        }
        let referenced = self
            .start
            .edges
            .iter()
            .chain(self.rules.iter().flat_map(|r| r.rhs.edges.iter()))
            .map(|e| e.label as usize)
            .filter(|&l| l >= nt);
        for l in referenced {
            if owner.get(l).copied().flatten().is_none() {
                return Err(Violation::MissingRule(l as LabelId));
            }
        }
        for (l, o) in owner.iter().enumerate().take(total).skip(nt) {
            if o.is_none() && self.labels.get(l as LabelId).is_some() {
                return Err(Violation::MissingRule(l as LabelId));
            }
        }

        // Iterative three-colour DFS over the rule reference graph.
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut colour = vec![WHITE; total];
        for root in self.rules.iter().map(|r| r.head as usize) {
            if colour[root] != WHITE {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            colour[root] = GREY;
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                let rule = &self.rules[owner[node].unwrap()];
                if let Some(e) = rule.rhs.edges.get(*next) {
                    *next += 1;
                    let child = e.label as usize;
                    if child < nt {
                        continue;
                    }
                    match colour[child] {
                        GREY => return Err(Violation::Recursion(child as LabelId)),
                        WHITE => {
                            colour[child] = GREY;
                            stack.push((child, 0));
                        }
                        _ => {}
                    }
                } else {
                    colour[node] = BLACK;
                    stack.pop();
                }
            }
        }
        Ok(())
    }
}
