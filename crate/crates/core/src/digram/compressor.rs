use log::debug;

use super::count::add_edge_counts;
use super::replace::merged_edge;
use super::{
    count_digrams, count_incidence, digram_rule, find_occurrences, prune, size_gain, update_counts,
    CountTable, Digram, DigramCounts, Occurrence,
};
use crate::graph::{Edge, Grammar, Hypergraph, LabelId, LabelTable, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressConfig {
    /// Widest nonterminal the compressor may create.
    pub max_rank: usize,
    /// Run the prune pass after replacement.
    pub prune: bool,
}

impl Default for CompressConfig {
    fn default() -> Self {
        CompressConfig {
            max_rank: 8,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompressStats {
    pub iterations: usize,
    pub occurrences_replaced: usize,
    pub input_edges: usize,
    pub start_edges: usize,
    /// Grammar size before the first iteration and after each one.
    pub sizes: Vec<usize>,
    pub rules_before_prune: usize,
    pub rules: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub digram: Digram,
    pub estimated: u64,
    pub replaced: usize,
    pub label: LabelId,
    pub size_after: usize,
}

/// State of the replacement loop.
///
/// Edges live in slots so that a replacement can put the new edge where the
/// earlier of its two edges was without shifting anything; `by_label` lists
/// the slots of each label in increasing order (possibly with stale slots
/// that are filtered on use).
#[derive(Debug)]
pub struct Compressor {
    labels: LabelTable,
    rules: Vec<Rule>,
    node_count: usize,
    slots: Vec<Option<Edge>>,
    by_label: Vec<Vec<usize>>,
    table: CountTable,
    counts: DigramCounts,
    config: CompressConfig,
    size: usize,
    stats: CompressStats,
}

impl Compressor {
    pub fn new(grammar: Grammar, config: CompressConfig) -> Self {
        let table = count_incidence(&grammar.start);
        let counts = count_digrams(&table);
        let mut by_label = vec![Vec::new(); grammar.labels.len()];
        for (i, e) in grammar.start.edges.iter().enumerate() {
            by_label[e.label as usize].push(i);
        }
        let size = grammar.size();
        let stats = CompressStats {
            input_edges: grammar.start.edges.len(),
            sizes: vec![size],
            ..CompressStats::default()
        };
        Compressor {
            node_count: grammar.start.node_count,
            slots: grammar.start.edges.into_iter().map(Some).collect(),
            labels: grammar.labels,
            rules: grammar.rules,
            by_label,
            table,
            counts,
            config,
            size,
            stats,
        }
    }

    pub fn labels(&self) -> &LabelTable {
        &self.labels
    }

    pub fn counts(&self) -> &DigramCounts {
        &self.counts
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn stats(&self) -> &CompressStats {
        &self.stats
    }

    /// Current grammar size under the `1 + rank` cost model.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn current_graph(&self) -> Hypergraph {
        Hypergraph {
            node_count: self.node_count,
            edges: self.slots.iter().flatten().cloned().collect(),
        }
    }

    /// Highest-count digram that may be replaced: narrow enough and with a
    /// positive estimated gain. Digrams wider than the rank limit are retired
    /// on the way since their width never changes.
    fn candidate(&mut self) -> Option<(Digram, u64)> {
        let mut wide = Vec::new();
        let mut found = None;
        for (d, n) in self.counts.ranked() {
            // no pair of edges costs less than 4, so 2n must exceed 4
            if n <= 2 {
                break;
            }
            if d.merged_rank(&self.labels) > self.config.max_rank {
                wide.push(d);
            } else if size_gain(&self.labels, &d, n) > 0 {
                found = Some((d, n));
                break;
            }
        }
        for d in wide {
            self.counts.exclude(d);
        }
        found
    }

    /// Slots holding an edge with label `a` or `b`, ascending.
    fn slots_with(&mut self, a: LabelId, b: LabelId) -> Vec<usize> {
        for l in [a, b] {
            let slots = &self.slots;
            self.by_label[l as usize]
                .retain(|&s| slots[s].as_ref().is_some_and(|e| e.label == l));
        }
        if a == b {
            return self.by_label[a as usize].clone();
        }
        let (x, y) = (&self.by_label[a as usize], &self.by_label[b as usize]);
        let mut merged = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i] < y[j]) {
                merged.push(x[i]);
                i += 1;
            } else {
                merged.push(y[j]);
                j += 1;
            }
        }
        merged
    }

    /// Occurrences a replacement of `d` would consume, without changing state.
    pub fn occurrences(&mut self, d: &Digram) -> Vec<Occurrence> {
        let order = self.slots_with(d.first().label, d.second().label);
        let slots = &self.slots;
        find_occurrences(order.into_iter().map(|s| (s, slots[s].as_ref().unwrap())), d)
    }

    /// Replaces every occurrence of `d` found by the scan, whatever the gain,
    /// and retires `d` from further counting. Returns the new nonterminal.
    pub fn replace(&mut self, d: Digram) -> (LabelId, usize) {
        let occ = self.occurrences(&d);
        let label = self.commit(d, &occ);
        (label, occ.len())
    }

    fn commit(&mut self, d: Digram, occurrences: &[Occurrence]) -> LabelId {
        let head = self.labels.push_nonterminal(d.merged_rank(&self.labels));
        let rule = digram_rule(&d, head, &self.labels);
        self.size += rule.rhs.cost();
        self.rules.push(rule);
        self.by_label.push(Vec::with_capacity(occurrences.len()));
        for o in occurrences {
            let e1 = self.slots[o.first].take().unwrap();
            let e2 = self.slots[o.second].take().unwrap();
            let merged = merged_edge(head, &d, &e1, &e2);
            update_counts(&mut self.table, &mut self.counts, &e1, None);
            update_counts(&mut self.table, &mut self.counts, &e2, None);
            add_edge_counts(&mut self.table, &mut self.counts, &merged);
            let at = o.first.min(o.second);
            self.slots[at] = Some(merged);
            self.by_label[head as usize].push(at);
            self.size -= 2;
        }
        self.by_label[head as usize].sort_unstable();
        self.counts.exclude(d);
        self.stats.occurrences_replaced += occurrences.len();
        head
    }

    /// One loop iteration: picks the best candidate and replaces it if the
    /// occurrences actually found still make the grammar smaller. Candidates
    /// whose scan falls short are retired and the next one is tried.
    pub fn step(&mut self) -> Option<StepReport> {
        loop {
            let (d, estimated) = self.candidate()?;
            let occ = self.occurrences(&d);
            if size_gain(&self.labels, &d, occ.len() as u64) <= 0 {
                debug!("retiring {d}: estimated {estimated}, found {}", occ.len());
                self.counts.exclude(d);
                continue;
            }
            let label = self.commit(d, &occ);
            self.stats.iterations += 1;
            self.stats.sizes.push(self.size);
            debug!(
                "iteration {}: {d} -> {label}, estimated {estimated}, replaced {}, size {}",
                self.stats.iterations,
                occ.len(),
                self.size
            );
            return Some(StepReport {
                digram: d,
                estimated,
                replaced: occ.len(),
                label,
                size_after: self.size,
            });
        }
    }

    pub fn run(&mut self) {
        while self.step().is_some() {}
    }

    pub fn finish(self) -> (Grammar, CompressStats) {
        let mut stats = self.stats;
        let start = Hypergraph {
            node_count: self.node_count,
            edges: self.slots.into_iter().flatten().collect(),
        };
        stats.start_edges = start.edges.len();
        stats.rules = self.rules.len();
        stats.rules_before_prune = self.rules.len();
        (
            Grammar {
                labels: self.labels,
                rules: self.rules,
                start,
            },
            stats,
        )
    }
}

/// The replacement loop without pruning.
pub fn replace_digrams(grammar: Grammar, config: CompressConfig) -> (Grammar, CompressStats) {
    let mut c = Compressor::new(grammar, config);
    c.run();
    c.finish()
}

/// Replacement loop followed by pruning when `config.prune` is set.
pub fn compress(grammar: Grammar, config: CompressConfig) -> (Grammar, CompressStats) {
    let (g, mut stats) = replace_digrams(grammar, config);
    if !config.prune {
        return (g, stats);
    }
    let pruned = prune(&g);
    stats.rules = pruned.rules.len();
    stats.start_edges = pruned.start.edges.len();
    (pruned, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digram::IncidenceType;
    use crate::graph::graphs_equal;

    fn grammar(ranks: &[usize], node_count: usize, edges: Vec<Edge>) -> Grammar {
        Grammar::from_graph(Hypergraph::new(node_count, edges), ranks)
    }

    #[test]
    fn forced_worked_example_iteration() {
        let g = grammar(
            &[2, 2],
            14,
            vec![
                Edge::new(0, [11, 12]),
                Edge::new(1, [12, 13]),
                Edge::new(0, [10, 10]),
                Edge::new(1, [10, 11]),
                Edge::new(1, [10, 12]),
            ],
        );
        let mut c = Compressor::new(g, CompressConfig::default());
        let d = Digram::new(IncidenceType::new(0, 1), IncidenceType::new(1, 0));
        let (b, n) = c.replace(d);
        assert_eq!((b, n), (2, 2));
        let (out, _) = c.finish();
        assert_eq!(
            out.start.edges,
            vec![Edge::new(b, [12, 11, 13]), Edge::new(b, [10, 10, 11]), Edge::new(1, [10, 12])]
        );
        assert_eq!(out.rules[0].rhs.edges, vec![Edge::new(0, [1, 0]), Edge::new(1, [0, 2])]);
    }

    #[test]
    fn unique_labels_need_no_rules() {
        let g = grammar(&[2, 2, 2], 4, vec![Edge::new(0, [0, 1]), Edge::new(1, [1, 2]), Edge::new(2, [2, 3])]);
        let (out, stats) = replace_digrams(g.clone(), CompressConfig::default());
        assert_eq!(stats.iterations, 0);
        assert_eq!(out, g);
    }

    #[test]
    fn short_chain_is_not_worth_a_rule() {
        // estimate 3 gives gain 2*3 - 6 = 0
        let g = grammar(&[2], 5, (0..4).map(|i| Edge::new(0, [i, i + 1])).collect());
        let (_, stats) = replace_digrams(g, CompressConfig::default());
        assert_eq!(stats.iterations, 0);
    }

    #[test]
    fn long_chain_round_trips() {
        let n = 200u32;
        let g = grammar(&[2], n as usize + 1, (0..n).map(|i| Edge::new(0, [i, i + 1])).collect());
        let (out, stats) = compress(g.clone(), CompressConfig::default());
        assert!(stats.iterations >= 1);
        assert!(out.start.edges.len() < g.start.edges.len());
        assert!(graphs_equal(&out.decompress().unwrap(), &g.start));
        assert_eq!(out.validate_straight_line(), Ok(()));
    }

    #[test]
    fn sizes_strictly_decrease() {
        let mut edges = Vec::new();
        for i in 0..300u32 {
            edges.push(Edge::new(0, [3 * i, 3 * i + 1]));
            edges.push(Edge::new(1, [3 * i + 1, 3 * i + 2]));
            edges.push(Edge::new(0, [3 * i, 3 * i + 2]));
        }
        let g = grammar(&[2, 2], 900, edges);
        let (out, stats) = replace_digrams(g.clone(), CompressConfig::default());
        assert!(stats.sizes.windows(2).all(|w| w[1] < w[0]), "{:?}", stats.sizes);
        assert_eq!(stats.sizes.len(), stats.iterations + 1);
        assert!(graphs_equal(&out.decompress().unwrap(), &g.start));
    }

    #[test]
    fn max_rank_is_respected() {
        let mut edges = Vec::new();
        for i in 0..50u32 {
            for j in 0..6 {
                edges.push(Edge::new(j % 2, [7 * i, 7 * i + 1 + j]));
            }
        }
        let g = grammar(&[2, 2], 350, edges);
        for max_rank in [2, 3, 4, 8] {
            let config = CompressConfig { max_rank, prune: false };
            let (out, _) = replace_digrams(g.clone(), config);
            assert!(out.labels.iter().all(|l| l.rank <= max_rank.max(2)));
            assert!(graphs_equal(&out.decompress().unwrap(), &g.start));
        }
    }
}
