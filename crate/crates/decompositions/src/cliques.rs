use qcut_core::{shortest_path_quasimetric, WeightedDigraph};

use crate::{DecompError, PathDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Both ends in the same clique.
    Vertical,
    /// From clique `i` to clique `i+1`.
    LeftHorizontal,
    /// From clique `i+1` to clique `i`.
    RightHorizontal,
}

/// Host whose vertices split into consecutive equal-size cliques with every
/// ordered pair inside two adjacent cliques joined by an edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOfCliques {
    host: WeightedDigraph,
    cliques: Vec<Vec<usize>>,
    clique_of: Vec<usize>,
    parent: Vec<usize>,
    embedding: Vec<usize>,
}

/// Pads every bag to `size` vertices, borrowing from the right neighbour
/// first, then the left.
pub fn pad_bags(pd: &PathDecomposition, size: usize) -> Result<Vec<Vec<usize>>, DecompError> {
    let mut bags = pd.bags.clone();
    let l = bags.len();
    for i in 0..l {
        let mut donors: Vec<usize> = Vec::new();
        if i + 1 < l {
            donors.extend(&pd.bags[i + 1]);
        }
        if i > 0 {
            donors.extend(bags[i - 1].clone());
        }
        for v in donors {
            if bags[i].len() >= size {
                break;
            }
            if !bags[i].contains(&v) {
                bags[i].push(v);
            }
        }
        if bags[i].len() < size {
            return Err(DecompError::CannotPad(i));
        }
        bags[i].sort_unstable();
    }
    Ok(bags)
}

/// Isometric embedding of `g` into a path of `(width+1)`-cliques.
pub fn embed_path_of_cliques(
    g: &WeightedDigraph,
    pd: &PathDecomposition,
) -> Result<PathOfCliques, DecompError> {
    pd.validate(g)?;
    let size = pd.width() + 1;
    let bags = pad_bags(pd, size)?;
    let dist = shortest_path_quasimetric(g);
    let mut host = WeightedDigraph::new(0);
    let mut cliques = Vec::with_capacity(bags.len());
    let mut parent = Vec::new();
    let mut clique_of = Vec::new();
    let mut embedding = vec![usize::MAX; g.vertex_count()];
    for (i, bag) in bags.iter().enumerate() {
        let mut c = Vec::with_capacity(size);
        for &v in bag {
            let h = host.add_vertex();
            parent.push(v);
            clique_of.push(i);
            if embedding[v] == usize::MAX {
                embedding[v] = h;
            }
            c.push(h);
        }
        cliques.push(c);
    }
    let mut link = |a: usize, b: usize| -> Result<(), DecompError> {
        let d = dist.get(parent[a], parent[b]);
        if !d.is_finite() {
            return Err(DecompError::NotStronglyConnected(parent[a], parent[b]));
        }
        host.add_edge(a, b, d)?;
        Ok(())
    };
    for i in 0..cliques.len() {
        for &a in &cliques[i] {
            for &b in &cliques[i] {
                if a != b {
                    link(a, b)?;
                }
            }
        }
        if i + 1 < cliques.len() {
            for &a in &cliques[i] {
                for &b in &cliques[i + 1] {
                    link(a, b)?;
                    link(b, a)?;
                }
            }
        }
    }
    Ok(PathOfCliques {
        host,
        cliques,
        clique_of,
        parent,
        embedding,
    })
}

impl PathOfCliques {
    /// Wraps an existing host, checking the structural conditions.
    pub fn from_parts(
        host: WeightedDigraph,
        cliques: Vec<Vec<usize>>,
        parent: Vec<usize>,
        embedding: Vec<usize>,
    ) -> Result<Self, DecompError> {
        let mut clique_of = vec![usize::MAX; host.vertex_count()];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                if v >= clique_of.len() || clique_of[v] != usize::MAX {
                    return Err(DecompError::BadTree(format!("vertex {v} misplaced in clique {i}")));
                }
                clique_of[v] = i;
            }
        }
        let pc = Self {
            host,
            cliques,
            clique_of,
            parent,
            embedding,
        };
        pc.check_structure()?;
        Ok(pc)
    }

    pub fn host(&self) -> &WeightedDigraph {
        &self.host
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn clique_size(&self) -> usize {
        self.cliques.first().map_or(0, Vec::len)
    }

    pub fn clique_of(&self, v: usize) -> usize {
        self.clique_of[v]
    }

    /// Host vertex → source vertex.
    pub fn parent(&self) -> &[usize] {
        &self.parent
    }

    /// Source vertex → its host copy in the first bag holding it.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn edge_kind(&self, e: usize) -> EdgeKind {
        let ed = self.host.edge(e);
        let (a, b) = (self.clique_of[ed.tail], self.clique_of[ed.head]);
        if a == b {
            EdgeKind::Vertical
        } else if b == a + 1 {
            EdgeKind::LeftHorizontal
        } else {
            EdgeKind::RightHorizontal
        }
    }

    /// Cliques cover the host, have equal size, and the edges are exactly
    /// the ordered pairs inside consecutive clique unions.
    pub fn check_structure(&self) -> Result<(), DecompError> {
        let n = self.host.vertex_count();
        if self.clique_of.contains(&usize::MAX) {
            return Err(DecompError::BadTree("cliques do not cover the host".into()));
        }
        let k = self.clique_size();
        if self.cliques.iter().any(|c| c.len() != k) {
            return Err(DecompError::BadTree("cliques differ in size".into()));
        }
        let mut seen = vec![false; n * n];
        for e in self.host.edges() {
            let (a, b) = (self.clique_of[e.tail], self.clique_of[e.head]);
            if a.abs_diff(b) > 1 {
                return Err(DecompError::BadTree(format!("edge {}->{} skips a clique", e.tail, e.head)));
            }
            if std::mem::replace(&mut seen[e.tail * n + e.head], true) {
                return Err(DecompError::BadTree(format!("duplicate edge {}->{}", e.tail, e.head)));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let close = x != y && self.clique_of[x].abs_diff(self.clique_of[y]) <= 1;
                if close && !seen[x * n + y] {
                    return Err(DecompError::BadTree(format!("missing edge {x}->{y}")));
                }
            }
        }
        Ok(())
    }
}
