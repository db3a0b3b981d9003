use std::collections::{BTreeSet, HashMap};

use qcut_core::{approx_eq, approx_le, shortest_path_quasimetric, QuasimetricSpace, WeightedDigraph};

use crate::{DecompError, TreeDecomposition};

/// One bag triangle `{u, v, w}` expanded to a 6-cycle.
///
/// `vertices` lists `u'', u', w'', w', v'', v'` where `(u'', v')` carries the
/// source edge `(u, v)` shared with the parent hexagon.
#[derive(Debug, Clone, PartialEq)]
pub struct Hexagon {
    pub vertices: [usize; 6],
    /// Source vertices `u, w, v`.
    pub source: [usize; 3],
    /// Host edges `(u'', v')` and `(v', u'')`.
    pub side: [usize; 2],
    pub parent: Option<usize>,
    pub depth: usize,
    /// Child paths `Γ'` (from `u''` to `v'`) and `Γ''` (from `v'` to `u''`).
    pub paths: [usize; 2],
}

/// A 5-edge path of a hexagon between the endpoints of its parent edge.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildPath {
    /// `None` for the two paths of the root hexagon.
    pub parent: Option<usize>,
    pub hexagon: usize,
    pub vertices: [usize; 6],
    pub edges: [usize; 5],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathClass {
    Tight,
    Slack,
    Neither,
}

/// Tight when `len = w`, slack when `len >= 2w`.
pub fn classify_length(len: f64, parent_weight: f64) -> PathClass {
    if approx_eq(len, parent_weight) {
        PathClass::Tight
    } else if approx_le(2.0 * parent_weight, len) {
        PathClass::Slack
    } else {
        PathClass::Neither
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HexagonTree {
    host: WeightedDigraph,
    origin: Vec<usize>,
    embedding: Vec<usize>,
    level: Vec<usize>,
    hexagons: Vec<Hexagon>,
    paths: Vec<ChildPath>,
    edge_path: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    source_edge: HashMap<(usize, usize), usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalReport {
    /// New weight over old weight, per host edge.
    pub factors: Vec<f64>,
    pub rescaled_paths: usize,
    /// `max(d_old/d_new) · max(d_new/d_old)` over host pairs.
    pub distortion: f64,
}

struct Builder {
    t: HexagonTree,
    dist: QuasimetricSpace,
}

impl Builder {
    fn fresh(&mut self, src: usize, depth: usize) -> usize {
        let v = self.t.host.add_vertex();
        self.t.origin.push(src);
        self.t.level.push(depth);
        if self.t.embedding[src] == usize::MAX {
            self.t.embedding[src] = v;
        }
        v
    }

    fn edge(&mut self, a: usize, b: usize, w: f64) -> usize {
        let e = self.t.host.add_edge(a, b, w).expect("fresh host vertices");
        self.t.edge_path.push(None);
        self.t.children.push(Vec::new());
        e
    }

    fn weight(&self, a: usize, b: usize) -> Result<f64, DecompError> {
        let d = self.dist.get(a, b);
        if d.is_finite() {
            Ok(d)
        } else {
            Err(DecompError::NotStronglyConnected(a, b))
        }
    }

    fn hexagon(
        &mut self,
        (u, v, w): (usize, usize, usize),
        side: [usize; 2],
        parent: Option<usize>,
        depth: usize,
    ) -> Result<(), DecompError> {
        let upp = self.t.host.edge(side[0]).tail;
        let vp = self.t.host.edge(side[0]).head;
        let (d_uw, d_wu, d_wv, d_vw) = (
            self.weight(u, w)?,
            self.weight(w, u)?,
            self.weight(w, v)?,
            self.weight(v, w)?,
        );
        let up = self.fresh(u, depth);
        let wpp = self.fresh(w, depth);
        let wp = self.fresh(w, depth);
        let vpp = self.fresh(v, depth);
        let fwd = [
            self.edge(upp, up, 0.0),
            self.edge(up, wpp, d_uw),
            self.edge(wpp, wp, 0.0),
            self.edge(wp, vpp, d_wv),
            self.edge(vpp, vp, 0.0),
        ];
        let bwd = [
            self.edge(vp, vpp, 0.0),
            self.edge(vpp, wp, d_vw),
            self.edge(wp, wpp, 0.0),
            self.edge(wpp, up, d_wu),
            self.edge(up, upp, 0.0),
        ];
        for (key, e) in [((u, w), fwd[1]), ((w, v), fwd[3]), ((v, w), bwd[1]), ((w, u), bwd[3])] {
            self.t.source_edge.insert(key, e);
        }
        let h = self.t.hexagons.len();
        let p0 = self.t.paths.len();
        let parent_edges = parent.map(|_| side);
        self.t.paths.push(ChildPath {
            parent: parent_edges.map(|s| s[0]),
            hexagon: h,
            vertices: [upp, up, wpp, wp, vpp, vp],
            edges: fwd,
        });
        self.t.paths.push(ChildPath {
            parent: parent_edges.map(|s| s[1]),
            hexagon: h,
            vertices: [vp, vpp, wp, wpp, up, upp],
            edges: bwd,
        });
        for (i, es) in [fwd, bwd].iter().enumerate() {
            for &e in es {
                self.t.edge_path[e] = Some(p0 + i);
            }
        }
        if let Some(s) = parent_edges {
            self.t.children[s[0]].push(p0);
            self.t.children[s[1]].push(p0 + 1);
        }
        self.t.hexagons.push(Hexagon {
            vertices: [upp, up, wpp, wp, vpp, vp],
            source: [u, w, v],
            side,
            parent,
            depth,
            paths: [p0, p0 + 1],
        });
        Ok(())
    }
}

/// Attach edge and new vertex for each triangle of a 2-tree containing `g`.
fn two_tree_triangles(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
) -> Vec<(usize, usize, usize)> {
    let n = g.vertex_count();
    let order = td.elimination_order(n);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = g
        .undirected_neighbors()
        .into_iter()
        .map(|a| a.into_iter().collect())
        .collect();
    let mut later = vec![Vec::new(); n];
    for &v in &order {
        let nb: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        later[v] = nb;
    }
    let sigma: Vec<usize> = order.into_iter().rev().collect();
    let mut tree: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let (a0, b0) = (sigma[0], sigma[1]);
    tree[a0].insert(b0);
    tree[b0].insert(a0);
    let mut out = Vec::with_capacity(n - 2);
    for &w in &sigma[2..] {
        let nb = &later[w];
        let (a, b) = match nb.as_slice() {
            [a, b] if tree[*a].contains(b) => (*a.min(b), *a.max(b)),
            [a, ..] => (*a, *tree[*a].iter().next().expect("attached vertex has a neighbour")),
            [] => (a0, b0),
        };
        tree[w].insert(a);
        tree[w].insert(b);
        tree[a].insert(w);
        tree[b].insert(w);
        out.push((a, b, w));
    }
    out
}

/// Isometric embedding of a treewidth-2 digraph into a tree of hexagons.
///
/// Pairs inside a bag triangle get weight equal to their source distance, so
/// every host edge is a shortest path. Requires all bag pairs to be mutually
/// reachable.
pub fn embed_hexagon_tree(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
) -> Result<HexagonTree, DecompError> {
    td.validate(g)?;
    if td.width() > 2 {
        return Err(DecompError::WidthTooLarge {
            found: td.width(),
            allowed: 2,
        });
    }
    let n = g.vertex_count();
    if n < 3 {
        return Err(DecompError::TooSmall(n));
    }
    let triangles = two_tree_triangles(g, td);
    let mut b = Builder {
        t: HexagonTree {
            host: WeightedDigraph::new(0),
            origin: Vec::new(),
            embedding: vec![usize::MAX; n],
            level: Vec::new(),
            hexagons: Vec::new(),
            paths: Vec::new(),
            edge_path: Vec::new(),
            children: Vec::new(),
            source_edge: HashMap::new(),
        },
        dist: shortest_path_quasimetric(g),
    };
    let mut edge_hex: HashMap<usize, usize> = HashMap::new();
    for (i, &(u, v, w)) in triangles.iter().enumerate() {
        let (side, parent, depth) = if i == 0 {
            let (d_uv, d_vu) = (b.weight(u, v)?, b.weight(v, u)?);
            let upp = b.fresh(u, 0);
            let vp = b.fresh(v, 0);
            let s = [b.edge(upp, vp, d_uv), b.edge(vp, upp, d_vu)];
            b.t.source_edge.insert((u, v), s[0]);
            b.t.source_edge.insert((v, u), s[1]);
            (s, None, 0)
        } else {
            let s = [b.t.source_edge[&(u, v)], b.t.source_edge[&(v, u)]];
            let ph = edge_hex[&s[0]];
            (s, Some(ph), b.t.hexagons[ph].depth + 1)
        };
        let h = b.t.hexagons.len();
        b.hexagon((u, v, w), side, parent, depth)?;
        if i == 0 {
            edge_hex.insert(side[0], h);
            edge_hex.insert(side[1], h);
        }
        let hex = &b.t.hexagons[h];
        for p in hex.paths {
            for e in b.t.paths[p].edges {
                edge_hex.insert(e, h);
            }
        }
    }
    Ok(b.t)
}

impl HexagonTree {
    pub fn host(&self) -> &WeightedDigraph {
        &self.host
    }

    /// Host vertex → source vertex.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    /// Source vertex → its first host copy.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    /// Depth of the hexagon that created each host vertex.
    pub fn level(&self) -> &[usize] {
        &self.level
    }

    pub fn hexagons(&self) -> &[Hexagon] {
        &self.hexagons
    }

    pub fn paths(&self) -> &[ChildPath] {
        &self.paths
    }

    pub fn path(&self, id: usize) -> Result<&ChildPath, DecompError> {
        self.paths.get(id).ok_or(DecompError::UnknownPath(id))
    }

    /// Child paths whose parent is host edge `e`.
    pub fn children_of(&self, e: usize) -> &[usize] {
        &self.children[e]
    }

    /// Parent edge of host edge `e`, if any.
    pub fn parent_edge(&self, e: usize) -> Option<usize> {
        self.edge_path[e].and_then(|p| self.paths[p].parent)
    }

    /// Child path that contains host edge `e`.
    pub fn path_of(&self, e: usize) -> Option<usize> {
        self.edge_path[e]
    }

    /// Host edge carrying the source edge `(a, b)`.
    pub fn host_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.source_edge.get(&(a, b)).copied()
    }

    pub fn path_length(&self, id: usize) -> f64 {
        self.paths[id].edges.iter().map(|&e| self.host.edge(e).weight).sum()
    }

    /// All host edges of hexagon `h`, including its side.
    pub fn hexagon_edges(&self, h: usize) -> Vec<usize> {
        let hex = &self.hexagons[h];
        let mut es = hex.side.to_vec();
        for p in hex.paths {
            es.extend(self.paths[p].edges);
        }
        es
    }

    /// Child hexagons per hexagon.
    pub fn hexagon_children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.hexagons.len()];
        for (i, h) in self.hexagons.iter().enumerate() {
            if let Some(p) = h.parent {
                ch[p].push(i);
            }
        }
        ch
    }

    /// Rooted hexagon tree as a decomposition of the host.
    pub fn host_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.hexagons.iter().map(|h| h.vertices.to_vec()).collect(),
            parent: self.hexagons.iter().map(|h| h.parent).collect(),
        }
    }

    pub fn classify_child_path(&self, edge: usize, path: usize) -> Result<PathClass, DecompError> {
        let p = self.path(path)?;
        if p.parent != Some(edge) {
            return Err(DecompError::UnknownPath(path));
        }
        Ok(classify_length(self.path_length(path), self.host.edge(edge).weight))
    }

    /// Classification of every path that has a parent edge.
    pub fn classes(&self) -> Vec<(usize, PathClass)> {
        self.paths
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                p.parent
                    .map(|e| (i, classify_length(self.path_length(i), self.host.edge(e).weight)))
            })
            .collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.classes().iter().all(|(_, c)| *c != PathClass::Neither)
    }

    /// Rescales every path that is neither tight nor slack to be tight,
    /// processing parents before children.
    pub fn canonicalize(&self) -> (HexagonTree, CanonicalReport) {
        let mut out = self.clone();
        let mut factors = vec![1.0; self.host.edge_count()];
        let mut rescaled_paths = 0;
        for id in 0..out.paths.len() {
            let Some(parent) = out.paths[id].parent else {
                continue;
            };
            let len = out.path_length(id);
            let w = out.host.edge(parent).weight;
            if classify_length(len, w) == PathClass::Neither {
                let f = w / len;
                for e in out.paths[id].edges {
                    let nw = out.host.edge(e).weight * f;
                    out.host.set_weight(e, nw);
                    factors[e] *= f;
                }
                rescaled_paths += 1;
            }
        }
        let before = shortest_path_quasimetric(&self.host);
        let after = shortest_path_quasimetric(&out.host);
        let distortion = crate::multiplicative_distortion(&before, &after);
        (
            out,
            CanonicalReport {
                factors,
                rescaled_paths,
                distortion,
            },
        )
    }
}
