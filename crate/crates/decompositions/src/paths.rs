use std::collections::VecDeque;

use qcut_core::quasimetric::dijkstra_with;
use qcut_core::{approx_eq, WeightedDigraph};

/// Shortest-path tree with a fixed tie-break: minimise length, then edge
/// count, then take the smallest-id neighbour towards the root.
///
/// With `toward_root`, paths run from each vertex *to* the root.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTree {
    pub root: usize,
    pub toward_root: bool,
    pub dist: Vec<f64>,
    pub hops: Vec<usize>,
    /// Tree edge at each vertex: into it (outward tree) or out of it (inward tree).
    pub link: Vec<Option<usize>>,
}

impl PathTree {
    pub fn build(
        g: &WeightedDigraph,
        root: usize,
        toward_root: bool,
        allowed: impl Fn(usize) -> bool,
    ) -> PathTree {
        let n = g.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in g.edges().iter().enumerate() {
            if allowed(i) {
                adj[if toward_root { e.head } else { e.tail }].push(i);
            }
        }
        let dist = dijkstra_with(g, &adj, root, toward_root);
        let far = |i: usize| {
            let e = g.edge(i);
            if toward_root {
                (e.head, e.tail)
            } else {
                (e.tail, e.head)
            }
        };
        let tight = |i: usize| {
            let (a, b) = far(i);
            dist[a].is_finite() && approx_eq(dist[a] + g.edge(i).weight, dist[b])
        };
        let mut hops = vec![usize::MAX; n];
        hops[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &i in &adj[a] {
                let (_, b) = far(i);
                if hops[b] == usize::MAX && tight(i) {
                    hops[b] = hops[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        let mut link = vec![None; n];
        for (i, _) in g.edges().iter().enumerate() {
            if !allowed(i) || !tight(i) {
                continue;
            }
            let (a, b) = far(i);
            if hops[a] == usize::MAX || hops[b] != hops[a] + 1 {
                continue;
            }
            let better = match link[b] {
                None => true,
                Some(j) => {
                    let (aj, _) = far(j);
                    (a, i) < (aj, j)
                }
            };
            if better {
                link[b] = Some(i);
            }
        }
        PathTree {
            root,
            toward_root,
            dist,
            hops,
            link,
        }
    }

    /// Edges of the tree path between the root and `v`, in travel order.
    pub fn path(&self, g: &WeightedDigraph, v: usize) -> Option<Vec<usize>> {
        if self.hops[v] == usize::MAX {
            return None;
        }
        let mut edges = Vec::with_capacity(self.hops[v]);
        let mut cur = v;
        while cur != self.root {
            let e = self.link[cur]?;
            edges.push(e);
            cur = if self.toward_root {
                g.edge(e).head
            } else {
                g.edge(e).tail
            };
        }
        if !self.toward_root {
            edges.reverse();
        }
        Some(edges)
    }
}

/// Vertex sequence of an edge path starting at `start`.
pub fn path_vertices(g: &WeightedDigraph, start: usize, edges: &[usize]) -> Vec<usize> {
    let mut vs = vec![start];
    vs.extend(edges.iter().map(|&e| g.edge(e).head));
    vs
}

/// Whether the common vertices of two simple paths form one contiguous,
/// equally ordered segment of each.
pub fn intersection_is_path(a: &[usize], b: &[usize]) -> bool {
    let pos_b: std::collections::HashMap<usize, usize> =
        b.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let common: Vec<(usize, usize)> = a
        .iter()
        .enumerate()
        .filter_map(|(i, v)| pos_b.get(v).map(|&j| (i, j)))
        .collect();
    common.windows(2).all(|w| w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_fewer_edges_then_smaller_ids() {
        let mut g = WeightedDigraph::new(5);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 4, 1.0).unwrap();
        g.add_edge(0, 2, 1.0).unwrap();
        g.add_edge(2, 4, 1.0).unwrap();
        g.add_edge(0, 3, 0.5).unwrap();
        g.add_edge(3, 1, 0.5).unwrap();
        let t = PathTree::build(&g, 0, false, |_| true);
        let p = t.path(&g, 4).unwrap();
        assert_eq!(path_vertices(&g, 0, &p), vec![0, 1, 4]);
        assert_eq!(t.dist[4], 2.0);
    }

    #[test]
    fn inward_tree_paths_end_at_root() {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(2, 1, 1.0).unwrap();
        g.add_edge(1, 0, 1.0).unwrap();
        g.add_edge(2, 0, 5.0).unwrap();
        let t = PathTree::build(&g, 0, true, |_| true);
        let p = t.path(&g, 2).unwrap();
        assert_eq!(path_vertices(&g, 2, &p), vec![2, 1, 0]);
        assert_eq!(t.dist[2], 2.0);
        let masked = PathTree::build(&g, 0, true, |e| e != 1);
        assert_eq!(masked.dist[2], 5.0);
    }

    #[test]
    fn zero_weight_cycles_are_fine() {
        let mut g = WeightedDigraph::new(3);
        g.add_bidirected(0, 1, 0.0, 0.0).unwrap();
        g.add_bidirected(1, 2, 0.0, 0.0).unwrap();
        let t = PathTree::build(&g, 0, false, |_| true);
        assert_eq!(t.hops, vec![0, 1, 2]);
    }

    #[test]
    fn intersection_shapes() {
        assert!(intersection_is_path(&[0, 1, 2, 3], &[5, 1, 2, 6]));
        assert!(!intersection_is_path(&[0, 1, 2, 3], &[1, 9, 3]));
        assert!(!intersection_is_path(&[0, 1, 2], &[2, 1]));
        assert!(intersection_is_path(&[0, 1], &[7, 8]));
    }
}
