//! Test oracles. Everything here works from the parity-check and generator
//! matrices alone and never calls into the table builders.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use gcstego::graph::{complete_graph, cycle_graph, wheel_graph};
use gcstego::{build_code, BitMatrix, BitVector, Codebook, Graph, GraphicalCode};

/// Minimum weight per syndrome over all `2^n` vectors, indexed MSB-first.
pub fn exhaustive_min_weights(h: &BitMatrix) -> Vec<usize> {
    let n = h.cols();
    let p = h.rows();
    assert!(n <= 20, "oracle enumerates 2^n vectors");
    let cols: Vec<u64> = (0..n).map(|j| h.column(j).to_index()).collect();
    let mut best = vec![usize::MAX; 1 << p];
    for x in 0u64..1 << n {
        let s = (0..n)
            .filter(|&j| (x >> j) & 1 == 1)
            .fold(0u64, |acc, j| acc ^ cols[j]) as usize;
        best[s] = best[s].min(x.count_ones() as usize);
    }
    best
}

/// Minimum nonzero codeword weight by enumerating all generator combinations.
pub fn min_distance_by_enumeration(g: &BitMatrix) -> usize {
    let k = g.rows();
    assert!(k <= 20);
    (1u64..1 << k)
        .map(|mask| {
            let mut w = BitVector::zeros(g.cols());
            for r in 0..k {
                if (mask >> r) & 1 == 1 {
                    w.add_assign(g.row(r)).unwrap();
                }
            }
            w.weight()
        })
        .min()
        .unwrap()
}

/// Row-by-row reduction count, written independently of `BitMatrix::rank`.
pub fn rank_by_elimination(m: &BitMatrix) -> usize {
    let mut rows: Vec<u64> = m
        .row_vectors()
        .iter()
        .map(|r| r.support().iter().fold(0u64, |acc, &j| acc | 1 << j))
        .collect();
    let mut rank = 0;
    for bit in 0..m.cols() {
        if let Some(pos) = rows.iter().position(|&r| (r >> bit) & 1 == 1) {
            let pivot = rows.swap_remove(pos);
            for r in rows.iter_mut() {
                if (*r >> bit) & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Brute-force `τ(G, T)`: smallest edge set whose odd vertices are exactly `T`.
pub fn brute_t_join_number(g: &Graph, terminals: &[usize]) -> usize {
    let m = g.edge_count();
    assert!(m <= 20);
    let mut target = vec![false; g.vertex_count() + 1];
    for &t in terminals {
        target[t] = true;
    }
    (0u64..1 << m)
        .filter(|&x| {
            let mut odd = vec![false; g.vertex_count() + 1];
            for j in 0..m {
                if (x >> j) & 1 == 1 {
                    let e = g.edge(j);
                    odd[e.u] ^= true;
                    odd[e.v] ^= true;
                }
            }
            odd == target
        })
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap()
}

/// Random connected simple graph with `3..=max_vertices` vertices, at least
/// one cycle and at most `max_edges` edges.
pub fn random_connected_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> Graph {
    let v = rng.gen_range(3..=max_vertices);
    let mut order: Vec<usize> = (1..=v).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..v {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent.min(order[i]), parent.max(order[i])));
    }
    let mut missing: Vec<(usize, usize)> = (1..=v)
        .flat_map(|a| (a + 1..=v).map(move |b| (a, b)))
        .filter(|e| !edges.contains(e))
        .collect();
    missing.shuffle(rng);
    let cap = max_edges.min(v * (v - 1) / 2);
    let target = rng.gen_range(v..=cap.max(v));
    while edges.len() < target {
        match missing.pop() {
            Some(e) => edges.push(e),
            None => break,
        }
    }
    edges.shuffle(rng);
    Graph::new(v, &edges).unwrap()
}

pub fn worked_k5() -> GraphicalCode {
    Codebook::worked_k5().to_code().unwrap()
}

/// Named graphs used across the suites.
pub fn named_codes() -> Vec<(&'static str, GraphicalCode)> {
    vec![
        ("K3", build_code(complete_graph(3).unwrap()).unwrap()),
        ("K4", build_code(complete_graph(4).unwrap()).unwrap()),
        ("K5", build_code(complete_graph(5).unwrap()).unwrap()),
        ("K5-worked", worked_k5()),
        ("K6", build_code(complete_graph(6).unwrap()).unwrap()),
        ("W5", build_code(wheel_graph(5).unwrap()).unwrap()),
        ("C7", build_code(cycle_graph(7).unwrap()).unwrap()),
    ]
}

pub fn bits(s: &str) -> BitVector {
    s.parse().unwrap()
}

/// Flip pattern of length `n` with ones at 1-based edge labels.
pub fn edges(n: usize, labels: &[usize]) -> BitVector {
    BitVector::from_support(n, &labels.iter().map(|l| l - 1).collect::<Vec<_>>())
}
