#![allow(dead_code)]

use qcut_core::WeightedDigraph;
use qcut_decompositions::PathDecomposition;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn link(g: &mut WeightedDigraph, a: usize, b: usize, rng: &mut ChaCha8Rng) {
    for (t, h) in [(a, b), (b, a)] {
        let c = rng.gen_range(1..=5) as f64;
        g.add_edge_with_capacity(t, h, 1.0, c).unwrap();
    }
}

/// Bidirected 2-tree with random capacities.
pub fn two_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    let mut sides = vec![(0, 1), (1, 2), (0, 2)];
    for &(a, b) in &sides.clone() {
        link(&mut g, a, b, rng);
    }
    for v in 3..n {
        let (a, b) = sides[rng.gen_range(0..sides.len())];
        link(&mut g, a, v, rng);
        link(&mut g, b, v, rng);
        sides.push((a, v));
        sides.push((b, v));
    }
    g
}

/// Bidirected graph of pathwidth at most `w` with its decomposition.
pub fn pathwidth(n: usize, w: usize, rng: &mut ChaCha8Rng) -> (WeightedDigraph, PathDecomposition) {
    let mut g = WeightedDigraph::new(n);
    for v in 1..n {
        let lo = v.saturating_sub(w);
        let first = rng.gen_range(lo..v);
        for u in lo..v {
            if u == first || rng.gen_bool(0.3) {
                link(&mut g, u, v, rng);
            }
        }
    }
    let bags = (0..n.saturating_sub(w).max(1)).map(|i| (i..(i + w + 1).min(n)).collect()).collect();
    (g, PathDecomposition { bags })
}

/// `count` distinct ordered pairs with unit demand.
pub fn random_pairs(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
    let mut out: Vec<(usize, usize, f64)> = Vec::new();
    while out.len() < count {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if s != t && !out.iter().any(|p| (p.0, p.1) == (s, t)) {
            out.push((s, t, 1.0));
        }
    }
    out
}

/// All-pairs shortest paths by Floyd–Warshall over lengths `x`.
pub fn floyd(g: &WeightedDigraph, x: &[f64]) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for (e, ed) in g.edges().iter().enumerate() {
        d[ed.tail][ed.head] = d[ed.tail][ed.head].min(x[e]);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}
