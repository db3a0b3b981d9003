use qcut_core::{shortest_path_quasimetric, transitive_closure, QuasimetricSpace, Quasipartition, WeightedDigraph};
use serde::Serialize;

use crate::CutError;

/// Terminal pair `source → target` with its demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Demand {
    pub source: usize,
    pub target: usize,
    pub amount: f64,
}

/// Capacitated digraph with terminal pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CutInstance {
    graph: WeightedDigraph,
    pairs: Vec<Demand>,
}

impl CutInstance {
    pub fn new(graph: WeightedDigraph, pairs: Vec<(usize, usize, f64)>) -> Result<Self, CutError> {
        let n = graph.vertex_count();
        let mut out = Vec::with_capacity(pairs.len());
        for (index, (source, target, amount)) in pairs.into_iter().enumerate() {
            for vertex in [source, target] {
                if vertex >= n {
                    return Err(CutError::PairOutOfRange { index, vertex, n });
                }
            }
            if source == target {
                return Err(CutError::DegeneratePair(index));
            }
            if !amount.is_finite() || amount < 0.0 {
                return Err(CutError::BadDemand(index, amount));
            }
            out.push(Demand { source, target, amount });
        }
        Ok(Self { graph, pairs: out })
    }

    /// Unit demand on every ordered pair of distinct vertices.
    pub fn uniform(graph: WeightedDigraph) -> Self {
        let n = graph.vertex_count();
        let pairs = (0..n)
            .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| Demand {
                source: s,
                target: t,
                amount: 1.0,
            }))
            .collect();
        Self { graph, pairs }
    }

    /// Parses lines `s t [dem]`; `#` starts a comment and demand defaults to 1.
    pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize, f64)>, CutError> {
        let mut out = Vec::new();
        for (line, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let bad = || CutError::BadPairsLine(line + 1, raw.to_string());
            let fields: Vec<&str> = body.split_whitespace().collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(bad());
            }
            let s = fields[0].parse().map_err(|_| bad())?;
            let t = fields[1].parse().map_err(|_| bad())?;
            let d = match fields.get(2) {
                Some(f) => f.parse().map_err(|_| bad())?,
                None => 1.0,
            };
            out.push((s, t, d));
        }
        Ok(out)
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn pairs(&self) -> &[Demand] {
        &self.pairs
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn total_demand(&self) -> f64 {
        self.pairs.iter().map(|p| p.amount).sum()
    }

    /// Every ordered pair of distinct vertices appears once with one common
    /// positive demand.
    pub fn is_uniform(&self) -> bool {
        let n = self.vertex_count();
        if self.pairs.len() != n * n.saturating_sub(1) {
            return false;
        }
        let Some(first) = self.pairs.first() else {
            return false;
        };
        let mut seen = vec![false; n * n];
        self.pairs.iter().all(|p| {
            p.amount == first.amount && p.amount > 0.0 && !std::mem::replace(&mut seen[p.source * n + p.target], true)
        })
    }

    /// Reachability in the graph without the edges in `removed`.
    pub fn reachability(&self, removed: &[usize]) -> Result<Quasipartition, CutError> {
        let n = self.vertex_count();
        let mut gone = vec![false; self.graph.edge_count()];
        for &e in removed {
            *gone.get_mut(e).ok_or(CutError::NoSuchEdge(e))? = true;
        }
        let mut rel = vec![false; n * n];
        for (e, ed) in self.graph.edges().iter().enumerate() {
            if !gone[e] {
                rel[ed.tail * n + ed.head] = true;
            }
        }
        Ok(transitive_closure(n, &rel)?)
    }

    pub fn cost(&self, edges: &[usize]) -> f64 {
        edges.iter().map(|&e| self.graph.edge(e).capacity).sum()
    }

    /// Evaluates an edge set; duplicates are dropped.
    pub fn evaluate(&self, edges: &[usize]) -> Result<CutSolution, CutError> {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        let reach = self.reachability(&edges)?;
        let separated: Vec<usize> = (0..self.pairs.len())
            .filter(|&i| !reach.contains(self.pairs[i].source, self.pairs[i].target))
            .collect();
        let demand = separated.iter().map(|&i| self.pairs[i].amount).sum::<f64>();
        let cost = self.cost(&edges);
        Ok(CutSolution {
            sparsity: (demand > 0.0).then(|| cost / demand),
            edges,
            cost,
            separated,
            demand,
        })
    }

    /// `(C(S), D(S), C/D)`; the ratio is `None` when nothing is separated.
    pub fn sparsity(&self, edges: &[usize]) -> Result<(f64, f64, Option<f64>), CutError> {
        let s = self.evaluate(edges)?;
        Ok((s.cost, s.demand, s.sparsity))
    }

    /// Same instance with edge weights replaced by `x`.
    pub fn reweighted(&self, x: &[f64]) -> WeightedDigraph {
        let mut g = self.graph.clone();
        for (e, &v) in x.iter().enumerate() {
            g.set_weight(e, v);
        }
        g
    }
}

/// Edge set with its cost and the terminal pairs it disconnects.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutSolution {
    pub edges: Vec<usize>,
    pub cost: f64,
    pub separated: Vec<usize>,
    pub demand: f64,
    pub sparsity: Option<f64>,
}

impl CutSolution {
    pub fn separates_all(&self, inst: &CutInstance) -> bool {
        self.separated.len() == inst.pairs().len()
    }
}

/// Edge lengths from an LP with the quasimetric they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub dist: QuasimetricSpace,
}

impl FractionalSolution {
    pub fn from_lengths(inst: &CutInstance, x: Vec<f64>) -> Self {
        let objective = inst.graph().edges().iter().zip(&x).map(|(e, v)| e.capacity * v).sum();
        let dist = shortest_path_quasimetric(&inst.reweighted(&x));
        Self { x, objective, dist }
    }

    /// Smallest `d_x(s, t)` over terminal pairs.
    pub fn min_pair_distance(&self, inst: &CutInstance) -> f64 {
        inst.pairs()
            .iter()
            .map(|p| self.dist.get(p.source, p.target))
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ dem · d_x(s, t)`.
    pub fn demand_distance(&self, inst: &CutInstance) -> f64 {
        inst.pairs()
            .iter()
            .map(|p| p.amount * self.dist.get(p.source, p.target))
            .sum()
    }
}
