use std::collections::BTreeSet;

use qcut_core::graph::content_lines;
use qcut_core::WeightedDigraph;

use crate::DecompError;

/// Rooted tree decomposition of the underlying undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> Result<Self, DecompError> {
        if bags.len() != parent.len() {
            return Err(DecompError::BadTree("bag and parent counts differ".into()));
        }
        let td = Self { bags, parent };
        td.check_tree()?;
        Ok(td)
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn root(&self) -> usize {
        self.parent.iter().position(Option::is_none).unwrap_or(0)
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(i);
            }
        }
        ch
    }

    /// Distance of each bag from the root.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.bags.len()];
        let ch = self.children();
        let mut stack = vec![self.root()];
        if !self.bags.is_empty() {
            depth[self.root()] = 0;
        }
        while let Some(b) = stack.pop() {
            for &c in &ch[b] {
                depth[c] = depth[b] + 1;
                stack.push(c);
            }
        }
        depth
    }

    fn check_tree(&self) -> Result<(), DecompError> {
        let k = self.bags.len();
        if k == 0 {
            return Ok(());
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(DecompError::BadTree(format!("{roots} roots")));
        }
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                if *p >= k || *p == i {
                    return Err(DecompError::BadTree(format!("bad parent {p} of bag {i}")));
                }
            }
        }
        if self.depths().contains(&usize::MAX) {
            return Err(DecompError::BadTree("parent map has a cycle".into()));
        }
        Ok(())
    }

    /// Checks the decomposition axioms against `g`.
    pub fn validate(&self, g: &WeightedDigraph) -> Result<(), DecompError> {
        self.check_tree()?;
        let n = g.vertex_count();
        let mut holders = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(qcut_core::CoreError::VertexOutOfRange { vertex: v, n }.into());
                }
                holders[v].push(i);
            }
        }
        for (v, h) in holders.iter().enumerate() {
            if h.is_empty() {
                return Err(DecompError::UncoveredVertex(v));
            }
            // bags holding v induce a subtree iff exactly one of them has its parent outside
            let tops = h
                .iter()
                .filter(|&&b| self.parent[b].is_none_or(|p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                return Err(DecompError::Disconnected(v));
            }
        }
        for e in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&e.tail) && b.contains(&e.head)) {
                return Err(DecompError::UncoveredEdge(e.tail, e.head));
            }
        }
        Ok(())
    }

    /// Elimination order in which every vertex has at most `width` later
    /// neighbours in the filled graph, all inside one bag.
    pub fn elimination_order(&self, n: usize) -> Vec<usize> {
        let depth = self.depths();
        let mut top = vec![(usize::MAX, usize::MAX); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if depth[i] < top[v].0 {
                    top[v] = (depth[i], i);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(top[v].0), top[v].1, v));
        order
    }

    pub fn from_text(text: &str) -> Result<Self, DecompError> {
        let mut bags = Vec::new();
        let mut parent = Vec::new();
        for (line, body) in content_lines(text) {
            let mut toks = body.split_whitespace();
            let p: i64 = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| DecompError::Parse {
                    line,
                    msg: "missing parent index".into(),
                })?;
            let bag = toks
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| DecompError::Parse {
                    line,
                    msg: e.to_string(),
                })?;
            parent.push(if p < 0 { None } else { Some(p as usize) });
            bags.push(bag);
        }
        Self::new(bags, parent)
    }

    /// One line per bag: parent index (`-1` for the root) then vertex ids.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (bag, p) in self.bags.iter().zip(&self.parent) {
            let p = p.map_or(-1, |p| p as i64);
            s.push_str(&p.to_string());
            for v in bag {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Path decomposition: bag `i` is adjacent to bags `i-1` and `i+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn as_tree(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.bags.clone(),
            parent: (0..self.bags.len()).map(|i| i.checked_sub(1)).collect(),
        }
    }

    pub fn validate(&self, g: &WeightedDigraph) -> Result<(), DecompError> {
        self.as_tree().validate(g)
    }

    pub fn from_tree(td: &TreeDecomposition) -> Result<Self, DecompError> {
        for (i, p) in td.parent.iter().enumerate() {
            if *p != i.checked_sub(1) {
                return Err(DecompError::BadTree(format!("bag {i} does not follow bag {}", i.wrapping_sub(1))));
            }
        }
        Ok(Self {
            bags: td.bags.clone(),
        })
    }

    pub fn from_text(text: &str) -> Result<Self, DecompError> {
        Self::from_tree(&TreeDecomposition::from_text(text)?)
    }

    pub fn to_text(&self) -> String {
        self.as_tree().to_text()
    }
}

/// Tree decomposition built from an elimination order.
pub fn decomposition_from_order(g: &WeightedDigraph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = g
        .undirected_neighbors()
        .into_iter()
        .map(|a| a.into_iter().collect())
        .collect();
    let mut later: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in order {
        let nb: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        later[v] = nb;
    }
    let mut bags = Vec::with_capacity(n);
    let mut parent = Vec::with_capacity(n);
    let mut last_root: Option<usize> = None;
    for (i, &v) in order.iter().enumerate().rev() {
        let mut bag = vec![v];
        bag.extend(&later[v]);
        bag.sort_unstable();
        // bag index for vertex at position i is n-1-i
        let p = later[v]
            .iter()
            .min_by_key(|&&u| pos[u])
            .map(|&u| n - 1 - pos[u])
            .or(last_root);
        if later[v].is_empty() {
            last_root = Some(n - 1 - i);
        }
        bags.push(bag);
        parent.push(p);
    }
    TreeDecomposition { bags, parent }
}

/// Width of the elimination order (largest later-neighbourhood).
pub fn order_width(g: &WeightedDigraph, order: &[usize]) -> usize {
    decomposition_from_order(g, order).width()
}

fn min_degree_order(g: &WeightedDigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = g
        .undirected_neighbors()
        .into_iter()
        .map(|a| a.into_iter().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .expect("vertex left");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Exact treewidth order by dynamic programming over vertex subsets.
fn exact_order(g: &WeightedDigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let nbr: Vec<u32> = g
        .undirected_neighbors()
        .iter()
        .map(|a| a.iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    // vertices outside `s ∪ {v}` reachable from v through s
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(u) = stack.pop() {
            let mut m = nbr[u] & !seen;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                seen |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out += 1;
                }
            }
        }
        out
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw = vec![u8::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut m = s;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = s & !(1 << v);
            let val = tw[rest as usize].max(q(rest, v) as u8);
            if val < tw[s as usize] {
                tw[s as usize] = val;
                choice[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Vertex count up to which the exact subset search is used.
pub const EXACT_LIMIT: usize = 16;

/// Tree decomposition by exact search for small graphs, min-degree otherwise.
pub fn compute_tree_decomposition(g: &WeightedDigraph) -> TreeDecomposition {
    let greedy = min_degree_order(g);
    let order = if g.vertex_count() <= EXACT_LIMIT && order_width(g, &greedy) > 2 {
        exact_order(g)
    } else {
        greedy
    };
    decomposition_from_order(g, &order)
}
