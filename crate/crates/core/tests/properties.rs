mod common;

use common::{naive_answer, sorted};
use itr::digram::{brute_force_max_occurrences, compress, count_digrams, count_incidence, CompressConfig, Digram, IncidenceType};
use itr::graph::{Edge, Grammar, Hypergraph, LabelId, NodeId};
use itr::query::answer_with;
use itr::{compress_graph, deserialize, graphs_equal, CompressedGrammar, Dictionary, NodeLabels, Options, TriplePattern};
use proptest::prelude::*;

/// Small hypergraphs with up to three labels of rank 1..=3.
fn arb_hypergraph() -> impl Strategy<Value = (Hypergraph, Vec<usize>)> {
    (proptest::collection::vec(1usize..=3, 1..=3), 1u32..=6).prop_flat_map(|(ranks, nodes)| {
        let r = ranks.clone();
        let edge = (0..ranks.len()).prop_flat_map(move |a| {
            proptest::collection::vec(0..nodes, r[a]).prop_map(move |ns| Edge::new(a as LabelId, ns))
        });
        proptest::collection::vec(edge, 0..=12)
            .prop_map(move |edges| (Hypergraph::new(nodes as usize, edges), ranks.clone()))
    })
}

/// Binary graphs big enough to compress.
fn arb_binary_graph() -> impl Strategy<Value = (Hypergraph, usize)> {
    (2u32..30, 1usize..4).prop_flat_map(|(nodes, labels)| {
        let edge = (0..labels as u32, 0..nodes, 0..nodes).prop_map(|(l, a, b)| Edge::new(l, [a, b]));
        proptest::collection::vec(edge, 0..150).prop_map(move |es| (Hypergraph::new(nodes as usize, es), labels))
    })
}

fn compressed(graph: &Hypergraph, labels: usize) -> CompressedGrammar {
    let mut dict = Dictionary::with_numeric_nodes();
    for i in 0..labels {
        dict.intern_label(&format!("l{i}"), 2);
    }
    let (view, _) = compress_graph(graph.clone(), dict, NodeLabels::new(), &Options::default()).unwrap();
    deserialize(&view.to_bytes()).unwrap()
}

/// Nonterminal edges of the full derivation tree that contain `v`.
fn derivation_edges_touching(view: &CompressedGrammar, v: NodeId) -> usize {
    let mut stack: Vec<Edge> = view.start().decode().unwrap().edges;
    let mut n = 0;
    while let Some(e) = stack.pop() {
        if !view.labels().is_terminal(e.label) {
            n += e.touches(v) as usize;
            stack.extend(view.expand_edge(&e).unwrap());
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn estimate_bounds_optimum((g, ranks) in arb_hypergraph()) {
        let counts = count_digrams(&count_incidence(&g));
        let types: Vec<IncidenceType> = ranks
            .iter()
            .enumerate()
            .flat_map(|(a, &r)| (0..r as u32).map(move |m| IncidenceType::new(a as LabelId, m)))
            .collect();
        for (i, &x) in types.iter().enumerate() {
            for &y in &types[i..] {
                let d = Digram::new(x, y);
                let best = brute_force_max_occurrences(&g, &d).unwrap() as u64;
                prop_assert!(counts.get(&d) >= best, "{}: {} < {}", d, counts.get(&d), best);
            }
        }
    }

    #[test]
    fn compression_is_lossless((g, ranks) in arb_hypergraph()) {
        let (grammar, stats) = compress(Grammar::from_graph(g.clone(), &ranks), CompressConfig::default());
        prop_assert!(grammar.validate_straight_line().is_ok());
        prop_assert!(graphs_equal(&grammar.decompress().unwrap(), &g));
        prop_assert!(stats.sizes.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn queries_match_scan((g, labels) in arb_binary_graph(), s in 0u32..30, p in 0u32..4, o in 0u32..30, shape in 0u8..8) {
        let view = compressed(&g, labels);
        let q = TriplePattern::new(
            (shape & 1 != 0).then_some(s),
            (shape & 2 != 0).then_some(p),
            (shape & 4 != 0).then_some(o),
        );
        let mut got = Vec::new();
        answer_with(&view, &q, |t| got.push(t)).unwrap();
        prop_assert_eq!(sorted(got), sorted(naive_answer(&g, &q)));
    }

    #[test]
    fn bound_node_never_over_expands((g, labels) in arb_binary_graph(), v in 0u32..30, p in proptest::option::of(0u32..4)) {
        let view = compressed(&g, labels);
        let q = TriplePattern::new(Some(v), p, None);
        let stats = answer_with(&view, &q, |_| {}).unwrap();
        prop_assert_eq!(stats.seeds, view.start().columns_at_node(v).len());
        prop_assert!(stats.expanded <= derivation_edges_touching(&view, v));
    }
}
