//! Dual check for embedding the unit directed cycle into directed trees:
//! under the uniform distribution on cycle edges, every non-contracting tree
//! host has average edge stretch at least `n − 1`.

use std::collections::BTreeSet;

use qcut_core::{shortest_path_quasimetric, QuasimetricSpace, WeightedDigraph, TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::HarnessError;

/// Directed tree host with the image of each cycle vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEmbeddingCandidate {
    pub name: String,
    pub host: WeightedDigraph,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateReport {
    pub name: String,
    pub host_vertices: usize,
    pub average_stretch: f64,
    pub bound: f64,
}

/// `(y − x) mod n`: distance on the unit directed cycle.
pub fn cycle_distance(n: usize, x: usize, y: usize) -> f64 {
    ((y + n - x) % n) as f64
}

impl TreeEmbeddingCandidate {
    /// Underlying undirected graph is a tree and the map is in range.
    pub fn check_tree(&self) -> Result<(), HarnessError> {
        let m = self.host.vertex_count();
        let links: BTreeSet<(usize, usize)> = self
            .host
            .edges()
            .iter()
            .map(|e| (e.tail.min(e.head), e.tail.max(e.head)))
            .collect();
        if m == 0 || links.len() != m - 1 || !self.host.is_weakly_connected() {
            return Err(HarnessError::NotATree(format!("{m} vertices, {} links", links.len())));
        }
        if let Some(&v) = self.map.iter().find(|&&v| v >= m) {
            return Err(HarnessError::NotATree(format!("map names vertex {v} of {m}")));
        }
        Ok(())
    }

    /// Host distances between images; errors on the first contracted pair.
    pub fn check_non_contracting(&self) -> Result<QuasimetricSpace, HarnessError> {
        let n = self.map.len();
        let d = shortest_path_quasimetric(&self.host);
        for x in 0..n {
            for y in (0..n).filter(|&y| y != x) {
                let (host, cycle) = (d.get(self.map[x], self.map[y]), cycle_distance(n, x, y));
                if host < cycle - TOL {
                    return Err(HarnessError::Contracting { x, y, host, cycle });
                }
            }
        }
        Ok(d)
    }

    /// `(1/n)·Σ d_H(v_i, v_{i+1})`.
    pub fn average_stretch(&self, d: &QuasimetricSpace) -> f64 {
        let n = self.map.len();
        (0..n).map(|i| d.get(self.map[i], self.map[(i + 1) % n])).sum::<f64>() / n as f64
    }
}

/// Validates each candidate and reports its average edge stretch; errors on
/// any stretch below `n − 1`.
pub fn lowerbound_dual_check(n: usize, candidates: &[TreeEmbeddingCandidate]) -> Result<Vec<CandidateReport>, HarnessError> {
    let bound = n.saturating_sub(1) as f64;
    let mut out = Vec::with_capacity(candidates.len());
    for (index, c) in candidates.iter().enumerate() {
        if c.map.len() != n {
            return Err(HarnessError::NotATree(format!("candidate {index} maps {} vertices, want {n}", c.map.len())));
        }
        c.check_tree()?;
        let d = c.check_non_contracting()?;
        let stretch = c.average_stretch(&d);
        if stretch < bound - TOL {
            return Err(HarnessError::StretchBelowBound { index, stretch, bound });
        }
        out.push(CandidateReport {
            name: c.name.clone(),
            host_vertices: c.host.vertex_count(),
            average_stretch: stretch,
            bound,
        });
    }
    Ok(out)
}

/// Path `0 → 1 → … → n−1` with unit forward and `n − 1` backward weights.
pub fn path_candidate(n: usize) -> Result<TreeEmbeddingCandidate, HarnessError> {
    let mut host = WeightedDigraph::new(n);
    for v in 1..n {
        host.add_bidirected(v - 1, v, 1.0, (n - 1) as f64)?;
    }
    Ok(TreeEmbeddingCandidate {
        name: "path".into(),
        host,
        map: (0..n).collect(),
    })
}

/// Star with hub `n`: leaf `i` reaches the hub at cost `n − i` and the hub
/// reaches leaf `j` at cost `j`.
pub fn graded_star_candidate(n: usize) -> Result<TreeEmbeddingCandidate, HarnessError> {
    let mut host = WeightedDigraph::new(n + 1);
    for v in 0..n {
        host.add_bidirected(v, n, (n - v) as f64, v as f64)?;
    }
    Ok(TreeEmbeddingCandidate {
        name: "graded-star".into(),
        host,
        map: (0..n).collect(),
    })
}

/// Star with hub `n`, every leaf at cost `n − 1` in and `0` out.
pub fn flat_star_candidate(n: usize) -> Result<TreeEmbeddingCandidate, HarnessError> {
    let mut host = WeightedDigraph::new(n + 1);
    for v in 0..n {
        host.add_bidirected(v, n, (n - 1) as f64, 0.0)?;
    }
    Ok(TreeEmbeddingCandidate {
        name: "flat-star".into(),
        host,
        map: (0..n).collect(),
    })
}

/// Scales every weight by the worst contraction so no pair is contracted.
fn inflate(name: &str, mut host: WeightedDigraph, map: Vec<usize>) -> TreeEmbeddingCandidate {
    let n = map.len();
    let d = shortest_path_quasimetric(&host);
    let mut factor: f64 = 1.0;
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            factor = factor.max(cycle_distance(n, x, y) / d.get(map[x], map[y]));
        }
    }
    for e in 0..host.edge_count() {
        let w = host.edge(e).weight;
        host.set_weight(e, w * factor);
    }
    TreeEmbeddingCandidate {
        name: name.into(),
        host,
        map,
    }
}

/// Heap-ordered binary tree on the cycle vertices, unit weights, inflated.
pub fn binary_candidate(n: usize) -> Result<TreeEmbeddingCandidate, HarnessError> {
    let mut host = WeightedDigraph::new(n);
    for v in 1..n {
        host.add_bidirected((v - 1) / 2, v, 1.0, 1.0)?;
    }
    Ok(inflate("binary", host, (0..n).collect()))
}

/// Random recursive tree with weights in `[1, 3]` per direction, inflated.
pub fn random_candidate(n: usize, seed: u64) -> Result<TreeEmbeddingCandidate, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut host = WeightedDigraph::new(n);
    for v in 1..n {
        let p = rng.gen_range(0..v);
        host.add_bidirected(p, v, rng.gen_range(1.0..=3.0), rng.gen_range(1.0..=3.0))?;
    }
    Ok(inflate(&format!("random-{seed}"), host, (0..n).collect()))
}

/// Every shipped construction for size `n`.
pub fn standard_candidates(n: usize, seed: u64) -> Result<Vec<TreeEmbeddingCandidate>, HarnessError> {
    Ok(vec![
        path_candidate(n)?,
        graded_star_candidate(n)?,
        flat_star_candidate(n)?,
        binary_candidate(n)?,
        random_candidate(n, seed)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_flat_star_meet_the_bound_exactly() {
        for n in [2, 5, 8] {
            let r = lowerbound_dual_check(n, &[path_candidate(n).unwrap(), flat_star_candidate(n).unwrap()]).unwrap();
            assert!(r.iter().all(|c| (c.average_stretch - (n - 1) as f64).abs() < 1e-12));
        }
    }

    #[test]
    fn graded_star_averages_n() {
        let r = lowerbound_dual_check(8, &[graded_star_candidate(8).unwrap()]).unwrap();
        assert_eq!(r[0].average_stretch, 8.0);
    }

    #[test]
    fn contracting_host_is_rejected() {
        let mut host = WeightedDigraph::new(4);
        for v in 1..4 {
            host.add_bidirected(v - 1, v, 1.0, 1.0).unwrap();
        }
        let c = TreeEmbeddingCandidate {
            name: "unit path".into(),
            host,
            map: (0..4).collect(),
        };
        // d_H(1, 0) = 1 but the cycle needs 3
        assert!(matches!(
            lowerbound_dual_check(4, &[c]),
            Err(HarnessError::Contracting { x: 1, y: 0, .. })
        ));
    }

    #[test]
    fn non_tree_host_is_rejected() {
        let mut host = WeightedDigraph::new(3);
        for v in 0..3 {
            host.add_bidirected(v, (v + 1) % 3, 5.0, 5.0).unwrap();
        }
        let c = TreeEmbeddingCandidate {
            name: "triangle".into(),
            host,
            map: vec![0, 1, 2],
        };
        assert!(matches!(lowerbound_dual_check(3, &[c]), Err(HarnessError::NotATree(_))));
    }
}
