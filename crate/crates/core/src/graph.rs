use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
    pub capacity: f64,
}

/// Directed multigraph with non-negative weights and capacities.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl WeightedDigraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<(), CoreError> {
        if labels.len() != self.n {
            return Err(CoreError::SizeMismatch(labels.len(), self.n));
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// Appends a vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        if let Some(l) = &mut self.labels {
            l.push(format!("{}", self.n - 1));
        }
        self.n - 1
    }

    /// Adds an edge with capacity 1 and returns its index.
    pub fn add_edge(&mut self, tail: usize, head: usize, weight: f64) -> Result<usize, CoreError> {
        self.add_edge_with_capacity(tail, head, weight, 1.0)
    }

    pub fn add_edge_with_capacity(
        &mut self,
        tail: usize,
        head: usize,
        weight: f64,
        capacity: f64,
    ) -> Result<usize, CoreError> {
        for v in [tail, head] {
            if v >= self.n {
                return Err(CoreError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if tail == head {
            return Err(CoreError::SelfLoop(tail));
        }
        for (what, value) in [("weight", weight), ("capacity", capacity)] {
            if !value.is_finite() || value < 0.0 {
                return Err(CoreError::InvalidNumber {
                    what,
                    value,
                    tail,
                    head,
                });
            }
        }
        self.edges.push(Edge {
            tail,
            head,
            weight,
            capacity,
        });
        Ok(self.edges.len() - 1)
    }

    /// Adds both `(u,v)` and `(v,u)`; returns the two edge indices.
    pub fn add_bidirected(
        &mut self,
        u: usize,
        v: usize,
        forward: f64,
        backward: f64,
    ) -> Result<(usize, usize), CoreError> {
        let a = self.add_edge(u, v, forward)?;
        let b = self.add_edge(v, u, backward)?;
        Ok((a, b))
    }

    pub fn set_weight(&mut self, idx: usize, weight: f64) {
        self.edges[idx].weight = weight;
    }

    /// Outgoing edge indices per vertex.
    pub fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push(i);
        }
        adj
    }

    /// Incoming edge indices per vertex.
    pub fn in_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.head].push(i);
        }
        adj
    }

    /// Undirected neighbour lists without duplicates, sorted.
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Index of the lightest edge `tail -> head`, if any.
    pub fn find_edge(&self, tail: usize, head: usize) -> Option<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.tail == tail && e.head == head)
            .min_by(|a, b| a.1.weight.total_cmp(&b.1.weight))
            .map(|(i, _)| i)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Whether the underlying undirected graph is connected.
    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.undirected_neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Text form: `n m` then `tail head weight capacity` per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            s.push_str(&format!("{} {} {} {}\n", e.tail, e.head, e.weight, e.capacity));
        }
        s
    }
}

impl fmt::Display for WeightedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Lines with content, stripped of `#` comments, paired with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, CoreError> {
    let tok = tok.ok_or_else(|| CoreError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| CoreError::Parse {
        line,
        msg: format!("bad {what} '{tok}'"),
    })
}

impl FromStr for WeightedDigraph {
    type Err = CoreError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(CoreError::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let mut toks = header.split_whitespace();
        let n: usize = parse_field(toks.next(), hline, "vertex count")?;
        let m: usize = parse_field(toks.next(), hline, "edge count")?;
        let mut g = WeightedDigraph::new(n);
        for (line, body) in lines.by_ref().take(m) {
            let mut t = body.split_whitespace();
            let tail = parse_field(t.next(), line, "tail")?;
            let head = parse_field(t.next(), line, "head")?;
            let weight = parse_field(t.next(), line, "weight")?;
            let capacity = match t.next() {
                Some(tok) => parse_field(Some(tok), line, "capacity")?,
                None => 1.0,
            };
            g.add_edge_with_capacity(tail, head, weight, capacity)
                .map_err(|e| CoreError::Parse {
                    line,
                    msg: e.to_string(),
                })?;
        }
        if g.edge_count() != m {
            return Err(CoreError::Parse {
                line: hline,
                msg: format!("expected {m} edges, found {}", g.edge_count()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(CoreError::Parse {
                line,
                msg: "trailing content after edge list".into(),
            });
        }
        Ok(g)
    }
}
