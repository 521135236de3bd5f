use crate::graph::{Edge, Grammar, Hypergraph, LabelId, Rule};

/// Inlines rules that do not pay for themselves.
///
/// Rules are visited in creation order. A rule `A` used `u` times whose
/// right-hand side costs `s` (counting already-inlined children at their
/// expanded size) is inlined when `u <= 1` or `(u - 1) * s < u * (1 + rank(A))`,
/// i.e. when keeping it costs more than writing its rhs out at every use.
/// Inlining a rule only raises the usage of its children and the size of its
/// parents, so a rule kept once stays profitable. Surviving nonterminals are
/// renumbered in their original order.
pub fn prune(grammar: &Grammar) -> Grammar {
    let nt = grammar.labels.num_terminals();
    let nrules = grammar.rules.len();
    let index = |label: LabelId| -> Option<usize> {
        let i = (label as usize).checked_sub(nt)?;
        (i < nrules).then_some(i)
    };

    let mut usage = vec![0usize; nrules];
    for e in grammar
        .start
        .edges
        .iter()
        .chain(grammar.rules.iter().flat_map(|r| r.rhs.edges.iter()))
    {
        if let Some(i) = index(e.label) {
            usage[i] += 1;
        }
    }

    let mut inline = vec![false; nrules];
    let mut eff_size = vec![0usize; nrules];
    for (i, rule) in grammar.rules.iter().enumerate() {
        debug_assert_eq!(index(rule.head), Some(i), "rules must be in creation order");
        let s: usize = rule
            .rhs
            .edges
            .iter()
            .map(|e| match index(e.label) {
                Some(j) if inline[j] => eff_size[j],
                _ => 1 + e.rank(),
            })
            .sum();
        eff_size[i] = s;
        let u = usage[i];
        let r = rule.rhs.node_count;
        inline[i] = u <= 1 || (u - 1) * s < u * (1 + r);
    }

    let mut renumber: Vec<Option<LabelId>> = vec![None; nrules];
    let mut labels = grammar.labels.clone();
    labels.truncate_nonterminals(0);
    for (i, rule) in grammar.rules.iter().enumerate() {
        if !inline[i] {
            renumber[i] = Some(labels.push_nonterminal(rule.rhs.node_count));
        }
    }

    let rewrite = |edges: &[Edge]| -> Vec<Edge> {
        let mut out = Vec::with_capacity(edges.len());
        let mut stack: Vec<Edge> = edges.iter().rev().cloned().collect();
        while let Some(mut e) = stack.pop() {
            match index(e.label) {
                Some(j) if inline[j] => {
                    let rhs = &grammar.rules[j].rhs.edges;
                    for r in rhs.iter().rev() {
                        stack.push(Edge::new(r.label, r.nodes.iter().map(|&f| e.nodes[f as usize])));
                    }
                }
                Some(j) => {
                    e.label = renumber[j].unwrap();
                    out.push(e);
                }
                None => out.push(e),
            }
        }
        out
    };

    let rules = grammar
        .rules
        .iter()
        .enumerate()
        .filter(|&(i, _)| !inline[i])
        .map(|(i, r)| Rule {
            head: renumber[i].unwrap(),
            rhs: Hypergraph::new(r.rhs.node_count, rewrite(&r.rhs.edges)),
        })
        .collect();
    Grammar {
        labels,
        rules,
        start: Hypergraph::new(grammar.start.node_count, rewrite(&grammar.start.edges)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graphs_equal, LabelTable};

    fn two_edge_rule(head: LabelId) -> Rule {
        Rule {
            head,
            rhs: Hypergraph::new(3, vec![Edge::new(0, [1, 0]), Edge::new(0, [0, 2])]),
        }
    }

    #[test]
    fn single_use_rule_is_inlined() {
        let mut labels = LabelTable::with_terminals([2]);
        let a = labels.push_nonterminal(3);
        let g = Grammar {
            labels,
            rules: vec![two_edge_rule(a)],
            start: Hypergraph::new(5, vec![Edge::new(a, [0, 1, 2]), Edge::new(0, [3, 4])]),
        };
        let p = prune(&g);
        assert!(p.rules.is_empty());
        assert_eq!(p.labels.num_nonterminals(), 0);
        assert!(graphs_equal(&p.decompress().unwrap(), &g.decompress().unwrap()));
    }

    #[test]
    fn frequent_rule_is_kept() {
        let mut labels = LabelTable::with_terminals([2]);
        let a = labels.push_nonterminal(3);
        let start = (0..5u32).map(|i| Edge::new(a, [3 * i, 3 * i + 1, 3 * i + 2])).collect();
        let g = Grammar {
            labels,
            rules: vec![two_edge_rule(a)],
            start: Hypergraph::new(15, start),
        };
        assert_eq!(prune(&g), g);
    }

    #[test]
    fn no_rules_is_identity() {
        let g = Grammar::from_graph(Hypergraph::new(2, vec![Edge::new(0, [0, 1])]), &[2]);
        assert_eq!(prune(&g), g);
    }

    #[test]
    fn nested_inlining_renumbers() {
        // A occurs once (inside C) and B once (in the start graph): both are
        // inlined. C occurs six times, stays, and becomes the first nonterminal.
        let mut labels = LabelTable::with_terminals([2]);
        let a = labels.push_nonterminal(3);
        let b = labels.push_nonterminal(3);
        let c = labels.push_nonterminal(4);
        let rule_c = Rule {
            head: c,
            rhs: Hypergraph::new(4, vec![Edge::new(a, [0, 1, 2]), Edge::new(0, [0, 3])]),
        };
        let mut start: Vec<Edge> = (0..6u32).map(|i| Edge::new(c, [4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3])).collect();
        start.push(Edge::new(b, [30, 31, 32]));
        let g = Grammar {
            labels,
            rules: vec![two_edge_rule(a), two_edge_rule(b), rule_c],
            start: Hypergraph::new(33, start),
        };
        assert_eq!(g.validate_straight_line(), Ok(()));
        let p = prune(&g);
        assert_eq!(p.validate_straight_line(), Ok(()));
        assert!(graphs_equal(&p.decompress().unwrap(), &g.decompress().unwrap()));
        assert!(p.size() <= g.size());
        assert_eq!(p.rules.len(), 1);
        assert_eq!(p.rules[0].head, 1);
        assert_eq!(p.rules[0].rhs.edges.len(), 3);
    }
}
