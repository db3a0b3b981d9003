use qcut_core::quasimetric::dijkstra_with;
use qcut_core::{shortest_path_quasimetric, Quasipartition};
use qcut_decompositions::{ComplementaryStructure, DecompError, HexagonTree};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::threshold::crosses;
use crate::SamplingError;

/// Step of the treewidth-2 sampler that first removed an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tw2Step {
    /// Level sets of the distance from the root.
    Outward,
    /// Level sets along the flattened complementary graphs.
    OutwardComplement,
    /// Random edge on each uncut child path below an edge cut by the previous step.
    OutwardPropagation,
    Inward,
    InwardComplement,
    InwardPropagation,
    /// Edges longer than a tenth of the radius.
    Long,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tw2Outcome {
    pub z: f64,
    /// Relation on host vertices.
    pub host: Quasipartition,
    pub removed_at: Vec<Option<Tw2Step>>,
}

impl Tw2Outcome {
    /// Relation on source vertices.
    pub fn project(&self, h: &HexagonTree) -> Quasipartition {
        self.host.restrict(h.embedding())
    }
}

/// Treewidth-2 sampler with the per-instance distance tables precomputed.
#[derive(Debug, Clone)]
pub struct Tw2Sampler<'a> {
    h: &'a HexagonTree,
    cs: &'a ComplementaryStructure,
    r: f64,
    from_root: Vec<f64>,
    to_root: Vec<f64>,
    edge_dist: Vec<f64>,
}

impl<'a> Tw2Sampler<'a> {
    pub fn new(h: &'a HexagonTree, cs: &'a ComplementaryStructure, r: f64) -> Result<Self, SamplingError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(SamplingError::BadRadius(r));
        }
        if let Some((id, _)) = h
            .classes()
            .into_iter()
            .find(|(_, c)| *c == qcut_decompositions::PathClass::Neither)
        {
            return Err(DecompError::NotCanonical(id).into());
        }
        let g = h.host();
        let from_root = dijkstra_with(g, &g.out_adjacency(), cs.root, false);
        let to_root = dijkstra_with(g, &g.in_adjacency(), cs.root, true);
        let dist = shortest_path_quasimetric(g);
        let edge_dist = g.edges().iter().map(|e| dist.get(e.tail, e.head)).collect();
        Ok(Self {
            h,
            cs,
            r,
            from_root,
            to_root,
            edge_dist,
        })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Tw2Outcome {
        let z = rng.gen::<f64>() * self.r;
        self.run(z, rng)
    }

    /// Runs Steps 2–9 with the given offset; `rng` drives only propagation.
    pub fn run<R: Rng + ?Sized>(&self, z: f64, rng: &mut R) -> Tw2Outcome {
        let g = self.h.host();
        let r = self.r;
        let m = g.edge_count();
        let mut removed: Vec<Option<Tw2Step>> = vec![None; m];
        for inward in [false, true] {
            let (level, spine, prop) = if inward {
                (Tw2Step::Inward, Tw2Step::InwardComplement, Tw2Step::InwardPropagation)
            } else {
                (Tw2Step::Outward, Tw2Step::OutwardComplement, Tw2Step::OutwardPropagation)
            };
            let d = if inward { &self.to_root } else { &self.from_root };
            let cut = |lo: f64, hi: f64| crosses(lo, hi, z, r);
            let fired: Vec<usize> = (0..m)
                .filter(|&e| {
                    let ed = g.edge(e);
                    if inward {
                        cut(d[ed.head], d[ed.tail])
                    } else {
                        cut(d[ed.tail], d[ed.head])
                    }
                })
                .collect();
            mark(&mut removed, &fired, level);
            let mut fired = vec![false; m];
            for l in &self.cs.leaves {
                let (edges, dist) = if inward {
                    (&l.q_bar, &l.q_bar_dist)
                } else {
                    (&l.p_bar, &l.p_bar_dist)
                };
                for &e in edges {
                    let ed = g.edge(e);
                    let hit = if inward {
                        cut(dist[ed.head], dist[ed.tail])
                    } else {
                        cut(dist[ed.tail], dist[ed.head])
                    };
                    fired[e] |= hit;
                }
            }
            let fired: Vec<usize> = (0..m).filter(|&e| fired[e]).collect();
            mark(&mut removed, &fired, spine);
            for &e in &fired {
                self.propagate(e, &mut removed, prop, rng);
            }
        }
        let long: Vec<usize> = (0..m)
            .filter(|&e| removed[e].is_none() && self.edge_dist[e] > r / 10.0)
            .collect();
        mark(&mut removed, &long, Tw2Step::Long);
        let kept = (0..m)
            .filter(|&e| removed[e].is_none())
            .map(|e| (g.edge(e).tail, g.edge(e).head));
        Tw2Outcome {
            z,
            host: Quasipartition::from_pairs(g.vertex_count(), kept),
            removed_at: removed,
        }
    }

    fn propagate<R: Rng + ?Sized>(&self, e: usize, removed: &mut [Option<Tw2Step>], step: Tw2Step, rng: &mut R) {
        let g = self.h.host();
        for &p in self.h.children_of(e) {
            let edges = self.h.paths()[p].edges;
            if edges.iter().any(|&c| removed[c].is_some()) || self.h.path_length(p) <= 0.0 {
                continue;
            }
            let pick = WeightedIndex::new(edges.iter().map(|&c| g.edge(c).weight))
                .expect("positive path length")
                .sample(rng);
            let c = edges[pick];
            removed[c] = Some(step);
            self.propagate(c, removed, step, rng);
        }
    }
}

fn mark(removed: &mut [Option<Tw2Step>], edges: &[usize], step: Tw2Step) {
    for &e in edges {
        removed[e].get_or_insert(step);
    }
}

/// One draw of the treewidth-2 sampler, projected to source vertices.
pub fn sample_tw2<R: Rng + ?Sized>(
    h: &HexagonTree,
    cs: &ComplementaryStructure,
    r: f64,
    rng: &mut R,
) -> Result<Quasipartition, SamplingError> {
    Ok(Tw2Sampler::new(h, cs, r)?.sample(rng).project(h))
}
