#![allow(dead_code)]

use itr::dictionary::{Dictionary, NodeLabels};
use itr::graph::{Edge, Hypergraph, LabelId, NodeId};
use itr::query::{Triple, TriplePattern};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Dictionary with rank-2 labels `l0, l1, ...`.
pub fn label_dict(labels: usize) -> Dictionary {
    let mut d = Dictionary::with_numeric_nodes();
    for i in 0..labels {
        d.intern_label(&format!("l{i}"), 2);
    }
    d
}

/// Uniform random binary graph, loops and multi-edges allowed.
pub fn random_graph(rng: &mut StdRng, nodes: usize, edges: usize, labels: usize) -> (Hypergraph, Dictionary) {
    let es = (0..edges)
        .map(|_| {
            Edge::new(
                rng.gen_range(0..labels) as LabelId,
                [rng.gen_range(0..nodes) as NodeId, rng.gen_range(0..nodes) as NodeId],
            )
        })
        .collect();
    (Hypergraph::new(nodes, es), label_dict(labels))
}

/// Random graph built from a few repeated small motifs plus noise, so the
/// compressor has something to find.
pub fn motif_graph(rng: &mut StdRng, copies: usize, labels: usize) -> (Hypergraph, Dictionary) {
    let mut edges = Vec::new();
    let mut next = 0u32;
    let motifs: Vec<Vec<(LabelId, u32, u32)>> = (0..4)
        .map(|_| {
            let size = rng.gen_range(2..6);
            (0..size)
                .map(|_| (rng.gen_range(0..labels) as LabelId, rng.gen_range(0..4), rng.gen_range(0..4)))
                .collect()
        })
        .collect();
    for _ in 0..copies {
        let m = &motifs[rng.gen_range(0..motifs.len())];
        for &(l, a, b) in m {
            edges.push(Edge::new(l, [next + a, next + b]));
        }
        if next > 0 && rng.gen_bool(0.3) {
            let other = rng.gen_range(0..next);
            edges.push(Edge::new(rng.gen_range(0..labels) as LabelId, [other, next]));
        }
        next += 4;
    }
    (Hypergraph::new(next as usize, edges), label_dict(labels))
}

pub fn chain(n: usize) -> (Hypergraph, Dictionary) {
    let edges = (0..n as u32).map(|i| Edge::new(0, [i, i + 1])).collect();
    (Hypergraph::new(n + 1, edges), label_dict(1))
}

pub fn star(n: usize) -> (Hypergraph, Dictionary) {
    let edges = (1..=n as u32).map(|i| Edge::new(i % 2, [0, i])).collect();
    (Hypergraph::new(n + 1, edges), label_dict(2))
}

pub fn clique(n: usize) -> (Hypergraph, Dictionary) {
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a != b {
                edges.push(Edge::new(0, [a, b]));
            }
        }
    }
    (Hypergraph::new(n, edges), label_dict(1))
}

/// Synthetic stand-in for the tic-tac-toe endgame corpus: `boards` 3×3
/// boards, each with 16 edges (6 horizontal, 6 vertical, 4 diagonal) and
/// every square labeled x, o or b.
pub fn ttt_like(rng: &mut StdRng, boards: usize) -> (Hypergraph, Dictionary, NodeLabels) {
    let mut dict = Dictionary::with_numeric_nodes();
    let h = dict.intern_label("h", 2);
    let v = dict.intern_label("v", 2);
    let d = dict.intern_label("d", 2);
    let mut edges = Vec::with_capacity(boards * 16);
    let mut labels = NodeLabels::new();
    for b in 0..boards as u32 {
        let sq = |r: u32, c: u32| 9 * b + 3 * r + c;
        for r in 0..3 {
            for c in 0..2 {
                edges.push(Edge::new(h, [sq(r, c), sq(r, c + 1)]));
                edges.push(Edge::new(v, [sq(c, r), sq(c + 1, r)]));
            }
        }
        for i in 0..2 {
            edges.push(Edge::new(d, [sq(i, i), sq(i + 1, i + 1)]));
            edges.push(Edge::new(d, [sq(i, 2 - i), sq(i + 1, 1 - i)]));
        }
        for s in 0..9 {
            labels.insert(9 * b + s, ["x", "o", "b"][rng.gen_range(0..3)].to_owned());
        }
    }
    (Hypergraph::new(boards * 9, edges), dict, labels)
}

/// Answers of `q` by scanning a plain edge list.
pub fn naive_answer(graph: &Hypergraph, q: &TriplePattern) -> Vec<Triple> {
    graph
        .edges
        .iter()
        .filter(|e| e.rank() == 2)
        .map(|e| Triple {
            s: e.nodes[0],
            p: e.label,
            o: e.nodes[1],
        })
        .filter(|t| q.matches(t))
        .collect()
}

pub fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}
