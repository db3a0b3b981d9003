use std::collections::BTreeSet;

use qcut_core::quasimetric::dijkstra_with;
use qcut_core::{approx_eq, WeightedDigraph};

use crate::hexagon::{classify_length, PathClass};
use crate::paths::{intersection_is_path, path_vertices, PathTree};
use crate::{DecompError, HexagonTree};

/// Paths attached to one leaf hexagon.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafPaths {
    pub leaf: usize,
    /// Chosen vertex of the leaf hexagon.
    pub target: usize,
    /// Hexagons from the root to the leaf.
    pub chain: Vec<usize>,
    /// Shortest path root → target (edge ids).
    pub p: Vec<usize>,
    /// Shortest path target → root.
    pub q: Vec<usize>,
    pub p_hat: Vec<usize>,
    pub q_hat: Vec<usize>,
    /// Complementary path closed under tight child paths (sorted edge ids).
    pub p_bar: Vec<usize>,
    pub q_bar: Vec<usize>,
    /// Distances from the root inside `p_bar`.
    pub p_bar_dist: Vec<f64>,
    /// Distances to the root inside `q_bar`.
    pub q_bar_dist: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryStructure {
    pub root: usize,
    pub leaves: Vec<LeafPaths>,
}

fn restricted_dist(g: &WeightedDigraph, edges: &[usize], root: usize, reverse: bool) -> Vec<f64> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &e in edges {
        let ed = g.edge(e);
        adj[if reverse { ed.head } else { ed.tail }].push(e);
    }
    dijkstra_with(g, &adj, root, reverse)
}

fn tight_closure(h: &HexagonTree, start: &[usize]) -> Vec<usize> {
    let g = h.host();
    let mut set: BTreeSet<usize> = start.iter().copied().collect();
    let mut work: Vec<usize> = start.to_vec();
    while let Some(e) = work.pop() {
        for &p in h.children_of(e) {
            if classify_length(h.path_length(p), g.edge(e).weight) == PathClass::Tight {
                for &c in &h.paths()[p].edges {
                    if set.insert(c) {
                        work.push(c);
                    }
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Builds shortest, complementary and flattened complementary paths for
/// every leaf hexagon, rooted at host vertex `x` of the root hexagon.
///
/// The complementary path of `p_i` is the tie-broken shortest path from `x`
/// to the leaf target inside the hexagons of the chain, with the edges of
/// `p_i` removed and only level-non-decreasing edges allowed (mirrored for
/// `q_i`).
pub fn build_complementary(h: &HexagonTree, x: usize) -> Result<ComplementaryStructure, DecompError> {
    if let Some((id, _)) = h.classes().into_iter().find(|(_, c)| *c == PathClass::Neither) {
        return Err(DecompError::NotCanonical(id));
    }
    if !h.hexagons()[0].vertices.contains(&x) {
        return Err(DecompError::BadTree(format!("vertex {x} is not in the root hexagon")));
    }
    let g = h.host();
    let level = h.level();
    let out_tree = PathTree::build(g, x, false, |_| true);
    let in_tree = PathTree::build(g, x, true, |_| true);
    let children = h.hexagon_children();
    let mut leaves = Vec::new();
    for leaf in (0..h.hexagons().len()).filter(|&i| children[i].is_empty()) {
        let mut chain = vec![leaf];
        while let Some(p) = h.hexagons()[*chain.last().unwrap()].parent {
            chain.push(p);
        }
        chain.reverse();
        let target = h.hexagons()[leaf].vertices[2];
        let p = out_tree.path(g, target).expect("host is strongly connected");
        let q = in_tree.path(g, target).expect("host is strongly connected");
        let mut in_chain = vec![false; g.edge_count()];
        for &c in &chain {
            for e in h.hexagon_edges(c) {
                in_chain[e] = true;
            }
        }
        let p_set: BTreeSet<usize> = p.iter().copied().collect();
        let q_set: BTreeSet<usize> = q.iter().copied().collect();
        let hat_out = PathTree::build(g, x, false, |e| {
            let ed = g.edge(e);
            in_chain[e] && !p_set.contains(&e) && level[ed.tail] <= level[ed.head]
        });
        let hat_in = PathTree::build(g, x, true, |e| {
            let ed = g.edge(e);
            in_chain[e] && !q_set.contains(&e) && level[ed.tail] >= level[ed.head]
        });
        let missing = |from, to| DecompError::NoComplement { leaf, from, to };
        let p_hat = hat_out.path(g, target).ok_or_else(|| missing(x, target))?;
        let q_hat = hat_in.path(g, target).ok_or_else(|| missing(target, x))?;
        let p_bar = tight_closure(h, &p_hat);
        let q_bar = tight_closure(h, &q_hat);
        let p_bar_dist = restricted_dist(g, &p_bar, x, false);
        let q_bar_dist = restricted_dist(g, &q_bar, x, true);
        leaves.push(LeafPaths {
            leaf,
            target,
            chain,
            p,
            q,
            p_hat,
            q_hat,
            p_bar,
            q_bar,
            p_bar_dist,
            q_bar_dist,
        });
    }
    let cs = ComplementaryStructure { root: x, leaves };
    cs.check_intersections(g)?;
    Ok(cs)
}

impl ComplementaryStructure {
    /// Fails if two outward (or two inward) shortest paths meet in more than
    /// one segment.
    pub fn check_intersections(&self, g: &WeightedDigraph) -> Result<(), DecompError> {
        let outward: Vec<_> = self
            .leaves
            .iter()
            .map(|l| (format!("p[{}]", l.leaf), path_vertices(g, self.root, &l.p)))
            .collect();
        let inward: Vec<_> = self
            .leaves
            .iter()
            .map(|l| (format!("q[{}]", l.leaf), path_vertices(g, l.target, &l.q)))
            .collect();
        for named in [outward, inward] {
            for (i, (na, a)) in named.iter().enumerate() {
                for (nb, b) in &named[i + 1..] {
                    if !intersection_is_path(a, b) {
                        return Err(DecompError::IntersectionNotPath(na.clone(), nb.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Shared edges of two flattened complementary graphs whose endpoint
    /// distances from (or to) the root disagree.
    pub fn consistency_violations(&self, g: &WeightedDigraph) -> Vec<Inconsistency> {
        let mut out = Vec::new();
        for (i, a) in self.leaves.iter().enumerate() {
            for b in &self.leaves[i + 1..] {
                let sides = [
                    (false, &a.p_hat, &a.p_bar, &a.p_bar_dist, &b.p_hat, &b.p_bar, &b.p_bar_dist),
                    (true, &a.q_hat, &a.q_bar, &a.q_bar_dist, &b.q_hat, &b.q_bar, &b.q_bar_dist),
                ];
                for (inward, ha, ea, da, hb, eb, db) in sides {
                    let sb: BTreeSet<usize> = eb.iter().copied().collect();
                    for &e in ea.iter().filter(|e| sb.contains(e)) {
                        let kind = match (ha.contains(&e), hb.contains(&e)) {
                            (true, true) => SharedKind::Spine,
                            (false, false) => SharedKind::Closure,
                            _ => SharedKind::SpineClosure,
                        };
                        let ed = g.edge(e);
                        for v in [ed.tail, ed.head] {
                            if !approx_eq(da[v], db[v]) {
                                out.push(Inconsistency {
                                    kind,
                                    inward,
                                    leaves: (a.leaf, b.leaf),
                                    edge: e,
                                    vertex: v,
                                    values: (da[v], db[v]),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// How a shared edge sits in the two flattened graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedKind {
    /// On both complementary paths.
    Spine,
    /// On one complementary path, added by closure in the other.
    SpineClosure,
    /// Added by closure in both.
    Closure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inconsistency {
    pub kind: SharedKind,
    pub inward: bool,
    pub leaves: (usize, usize),
    pub edge: usize,
    pub vertex: usize,
    pub values: (f64, f64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{compute_tree_decomposition, embed_hexagon_tree};

    fn triangle() -> WeightedDigraph {
        let mut g = WeightedDigraph::new(3);
        g.add_bidirected(0, 1, 1.0, 2.0).unwrap();
        g.add_bidirected(1, 2, 3.0, 1.0).unwrap();
        g.add_bidirected(2, 0, 2.0, 2.0).unwrap();
        g
    }

    /// All simple paths from `s` to `t` over allowed edges, by enumeration.
    fn simple_paths(g: &WeightedDigraph, s: usize, t: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
        fn go(
            g: &WeightedDigraph,
            u: usize,
            t: usize,
            allowed: &dyn Fn(usize) -> bool,
            seen: &mut Vec<bool>,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if u == t {
                out.push(cur.clone());
                return;
            }
            for (i, e) in g.edges().iter().enumerate() {
                if e.tail == u && allowed(i) && !seen[e.head] {
                    seen[e.head] = true;
                    cur.push(i);
                    go(g, e.head, t, allowed, seen, cur, out);
                    cur.pop();
                    seen[e.head] = false;
                }
            }
        }
        let mut seen = vec![false; g.vertex_count()];
        seen[s] = true;
        let mut out = Vec::new();
        go(g, s, t, allowed, &mut seen, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn single_hexagon_complement_is_the_other_way_round() {
        let g = triangle();
        let h = embed_hexagon_tree(&g, &compute_tree_decomposition(&g)).unwrap();
        let x = h.hexagons()[0].vertices[0];
        let cs = build_complementary(&h, x).unwrap();
        assert_eq!(cs.leaves.len(), 1);
        let l = &cs.leaves[0];
        let host = h.host();
        let len = |es: &[usize]| es.iter().map(|&e| host.edge(e).weight).sum::<f64>();
        // p is a shortest path
        let all = simple_paths(host, x, l.target, &|_| true);
        let best = all.iter().map(|p| len(p)).fold(f64::INFINITY, f64::min);
        assert!(approx_eq(len(&l.p), best));
        // the hexagon minus p leaves exactly one simple x -> target path
        let p_set: BTreeSet<usize> = l.p.iter().copied().collect();
        let rest = simple_paths(host, x, l.target, &|e| !p_set.contains(&e));
        let monotone: Vec<_> = rest.into_iter().filter(|r| r.iter().all(|e| !l.p.contains(e))).collect();
        assert!(monotone.contains(&l.p_hat));
        let pv = path_vertices(host, x, &l.p);
        let hv = path_vertices(host, x, &l.p_hat);
        // disjoint interiors: p and its complement go opposite ways round
        assert!(hv[1..hv.len() - 1].iter().all(|v| !pv.contains(v)));
        assert!(cs.consistency_violations(host).is_empty());
    }

    #[test]
    fn rejects_non_canonical_host() {
        let mut g = WeightedDigraph::new(4);
        g.add_bidirected(0, 1, 2.0, 2.0).unwrap();
        for v in [2, 3] {
            g.add_bidirected(0, v, 1.0, 1.0).unwrap();
            g.add_bidirected(v, 1, 2.0, 2.0).unwrap();
        }
        let h = embed_hexagon_tree(&g, &compute_tree_decomposition(&g)).unwrap();
        assert!(matches!(build_complementary(&h, 0), Err(DecompError::NotCanonical(_))));
        let (c, _) = h.canonicalize();
        let cs = build_complementary(&c, 0).unwrap();
        assert_eq!(cs.leaves.len(), 1);
        assert!(cs.consistency_violations(c.host()).is_empty());
    }
}
