use std::collections::BTreeSet;

use crate::error::Result;
use crate::graph::{LabelId, LabelTable, Rule};
use crate::succinct::K2Tree;

/// Which terminal labels each nonterminal eventually produces. Row `i` is
/// the `i`-th nonterminal, column `a` the terminal label `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtMatrix {
    num_terminals: usize,
    tree: K2Tree,
}

impl NtMatrix {
    pub fn build(labels: &LabelTable, rules: &[Rule], k: usize) -> Result<Self> {
        let t = labels.num_terminals();
        let mut reach: Vec<BTreeSet<LabelId>> = Vec::with_capacity(rules.len());
        for rule in rules {
            let mut set = BTreeSet::new();
            for e in &rule.rhs.edges {
                if (e.label as usize) < t {
                    set.insert(e.label);
                } else {
                    // rules only reference earlier nonterminals
                    set.extend(reach[e.label as usize - t].iter().copied());
                }
            }
            reach.push(set);
        }
        let points: Vec<(usize, usize)> = reach
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&a| (i, a as usize)))
            .collect();
        Ok(NtMatrix {
            num_terminals: t,
            tree: K2Tree::build(&points, rules.len(), t, k)?,
        })
    }

    pub(crate) fn from_tree(num_terminals: usize, tree: K2Tree) -> Self {
        NtMatrix { num_terminals, tree }
    }

    pub fn tree(&self) -> &K2Tree {
        &self.tree
    }

    /// True when expanding `nonterminal` yields at least one `terminal` edge.
    pub fn generates(&self, nonterminal: LabelId, terminal: LabelId) -> bool {
        let t = self.num_terminals;
        match (nonterminal as usize).checked_sub(t) {
            Some(row) if row < self.tree.rows() && (terminal as usize) < t => self.tree.cell(row, terminal as usize),
            _ => false,
        }
    }

    /// Nonterminal labels that produce `terminal`, ascending.
    pub fn producers(&self, terminal: LabelId) -> Vec<LabelId> {
        if terminal as usize >= self.num_terminals {
            return Vec::new();
        }
        self.tree
            .col_ones(terminal as usize)
            .into_iter()
            .map(|r| (r + self.num_terminals) as LabelId)
            .collect()
    }
}
