#![allow(dead_code)]

use qcut_core::WeightedDigraph;
use qcut_decompositions::{
    build_complementary, compute_tree_decomposition, embed_hexagon_tree, embed_path_of_cliques,
    ComplementaryStructure, HexagonTree, PathDecomposition, PathOfCliques,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_two_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    let mut sides = vec![(0, 1), (1, 2), (0, 2)];
    let link = |g: &mut WeightedDigraph, a: usize, b: usize, rng: &mut ChaCha8Rng| {
        let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
        g.add_bidirected(a, b, f, r).unwrap();
    };
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

/// Canonical hexagon host and its complementary structure.
pub fn tw2_instance(n: usize, rng: &mut ChaCha8Rng) -> (WeightedDigraph, HexagonTree, ComplementaryStructure) {
    let g = random_two_tree(n, rng);
    let h = embed_hexagon_tree(&g, &compute_tree_decomposition(&g)).unwrap().canonicalize().0;
    let cs = build_complementary(&h, h.hexagons()[0].vertices[0]).unwrap();
    (g, h, cs)
}

/// Path of `k`-cliques over a random graph of pathwidth `k − 1`; `k = 1`
/// gives a bidirected path of single vertices.
pub fn clique_host(n: usize, k: usize, rng: &mut ChaCha8Rng) -> PathOfCliques {
    if k == 1 {
        let mut g = WeightedDigraph::new(n);
        for v in 1..n {
            let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
            g.add_bidirected(v - 1, v, f, r).unwrap();
        }
        let cliques = (0..n).map(|v| vec![v]).collect();
        return PathOfCliques::from_parts(g, cliques, (0..n).collect(), (0..n).collect()).unwrap();
    }
    let w = k - 1;
    let mut g = WeightedDigraph::new(n);
    for v in 1..n {
        let lo = v.saturating_sub(w);
        let first = rng.gen_range(lo..v);
        for u in lo..v {
            if u == first || rng.gen_bool(0.5) {
                let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
                g.add_bidirected(u, v, f, r).unwrap();
            }
        }
    }
    let bags = (0..n.saturating_sub(w).max(1))
        .map(|i| (i..(i + w + 1).min(n)).collect())
        .collect();
    embed_path_of_cliques(&g, &PathDecomposition { bags }).unwrap()
}

pub fn bidirected_cycle(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for i in 0..n {
        let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
        g.add_bidirected(i, (i + 1) % n, f, r).unwrap();
    }
    g
}

/// Cycle that is cheap clockwise on one side and cheap counter-clockwise on
/// the other, so short pairs exist.
pub fn skewed_cycle(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    let split = rng.gen_range(1..n);
    for i in 0..n {
        let cheap = rng.gen_range(1..=3) as f64 / 10.0;
        let dear = rng.gen_range(10..=30) as f64;
        let (f, r) = if i < split { (cheap, dear) } else { (dear, cheap) };
        g.add_bidirected(i, (i + 1) % n, f, r).unwrap();
    }
    g
}

/// Random directed tree; each tree edge appears forward, backward or both.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let (a, b) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
        match rng.gen_range(0..3) {
            0 => g.add_edge(u, v, a).map(|_| ()),
            1 => g.add_edge(v, u, a).map(|_| ()),
            _ => g.add_bidirected(u, v, a, b).map(|_| ()),
        }
        .unwrap();
    }
    g
}
