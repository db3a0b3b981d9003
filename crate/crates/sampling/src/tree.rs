use std::collections::HashSet;

use qcut_core::{Quasipartition, WeightedDigraph};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::{ExplicitDistribution, SamplingError};

/// Directed graph whose underlying undirected graph is a tree.
#[derive(Debug, Clone)]
pub struct TreeInstance<'a> {
    g: &'a WeightedDigraph,
    total: f64,
}

impl<'a> TreeInstance<'a> {
    pub fn new(g: &'a WeightedDigraph) -> Result<Self, SamplingError> {
        let n = g.vertex_count();
        let mut directed = HashSet::new();
        let mut undirected = HashSet::new();
        for e in g.edges() {
            if e.tail == e.head {
                return Err(SamplingError::NotATree(format!("loop at {}", e.tail)));
            }
            if !directed.insert((e.tail, e.head)) {
                return Err(SamplingError::NotATree(format!("parallel edges {}->{}", e.tail, e.head)));
            }
            undirected.insert((e.tail.min(e.head), e.tail.max(e.head)));
        }
        if n == 0 || undirected.len() != n - 1 || !g.is_weakly_connected() {
            return Err(SamplingError::NotATree(format!(
                "{n} vertices, {} undirected edges",
                undirected.len()
            )));
        }
        let total = g.total_weight();
        if total <= 0.0 {
            return Err(SamplingError::ZeroWeight);
        }
        Ok(Self { g, total })
    }

    pub fn total_weight(&self) -> f64 {
        self.total
    }

    /// Closure of all edges but `e`.
    pub fn without(&self, e: usize) -> Quasipartition {
        let kept = self
            .g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, ed)| (ed.tail, ed.head));
        Quasipartition::from_pairs(self.g.vertex_count(), kept)
    }

    /// Removes edge `e` with probability `w(e)/W`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, Quasipartition) {
        let e = WeightedIndex::new(self.g.edges().iter().map(|e| e.weight))
            .expect("positive total weight")
            .sample(rng);
        (e, self.without(e))
    }

    /// One member per edge, unmerged, with mass `w(e)/W`.
    pub fn atoms(&self) -> Vec<(usize, Quasipartition, f64)> {
        (0..self.g.edge_count())
            .map(|e| (e, self.without(e), self.g.edge(e).weight / self.total))
            .collect()
    }
}

pub fn sample_tree<R: Rng + ?Sized>(g: &WeightedDigraph, rng: &mut R) -> Result<Quasipartition, SamplingError> {
    Ok(TreeInstance::new(g)?.sample(rng).1)
}

pub fn tree_distribution(g: &WeightedDigraph) -> Result<ExplicitDistribution, SamplingError> {
    let t = TreeInstance::new(g)?;
    ExplicitDistribution::new(t.atoms().into_iter().map(|(_, q, p)| (q, p)).collect())
}
