use qcut_core::QuasimetricSpace;

use crate::QuasipartitionDistribution;

/// Normal quantile used for Wilson intervals (95%).
pub const WILSON_Z: f64 = 1.96;

#[derive(Debug, Clone, PartialEq)]
pub struct PairEstimate {
    pub x: usize,
    pub y: usize,
    pub distance: f64,
    pub probability: f64,
    /// `probability · r / distance`; infinite when a zero-distance pair is separated.
    pub witness: f64,
    /// Wilson interval for Monte Carlo estimates.
    pub interval: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub pairs: Vec<PairEstimate>,
    /// Largest witness over pairs with `0 < d ≤ r` (and separated zero pairs).
    pub max_witness: f64,
    /// Largest witness computed from the upper Wilson bound.
    pub max_upper_witness: Option<f64>,
    pub samples: Option<usize>,
}

/// Wilson score interval for `hits` successes in `n` trials.
pub fn wilson_interval(hits: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / (1.0 + z2 / nf);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn witness(p: f64, d: f64, r: f64) -> f64 {
    if d > 0.0 {
        p * r / d
    } else if p > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Separation probability and Lipschitz witness for every ordered pair.
pub fn estimate_lipschitz(dist: &QuasipartitionDistribution, q: &QuasimetricSpace, r: f64) -> LipschitzReport {
    let n = q.size();
    let (prob, counts, samples) = match dist {
        QuasipartitionDistribution::Explicit(e) => (e.separation(), None, None),
        QuasipartitionDistribution::Sampler { config, .. } => {
            let mut hits = vec![0usize; n * n];
            for i in 0..config.samples {
                let s = dist.draw(i as u64).expect("sampler handle");
                for x in 0..n {
                    for y in 0..n {
                        if !s.contains(x, y) {
                            hits[x * n + y] += 1;
                        }
                    }
                }
            }
            let total = config.samples as f64;
            (
                hits.iter().map(|&h| h as f64 / total).collect(),
                Some(hits),
                Some(config.samples),
            )
        }
    };
    let mut pairs = Vec::with_capacity(n * n);
    let mut max_witness: f64 = 0.0;
    let mut max_upper: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let d = q.get(x, y);
            let p = prob[x * n + y];
            let w = witness(p, d, r);
            let interval = match (&counts, samples) {
                (Some(c), Some(s)) => Some(wilson_interval(c[x * n + y], s, WILSON_Z)),
                _ => None,
            };
            if d <= r {
                max_witness = max_witness.max(w);
                if let Some((_, hi)) = interval {
                    max_upper = max_upper.max(witness(hi, d, r));
                }
            }
            pairs.push(PairEstimate {
                x,
                y,
                distance: d,
                probability: p,
                witness: w,
                interval,
            });
        }
    }
    LipschitzReport {
        pairs,
        max_witness,
        max_upper_witness: samples.map(|_| max_upper),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{tree_distribution, ExplicitDistribution, SamplerConfig};
    use qcut_core::{shortest_path_quasimetric, Quasipartition, WeightedDigraph};

    #[test]
    fn wilson_matches_reference_values() {
        // 10 of 100 at 95%: (0.0552, 0.1744)
        let (lo, hi) = wilson_interval(10, 100, 1.96);
        assert!((lo - 0.05523).abs() < 1e-4 && (hi - 0.17437).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 50, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
    }

    #[test]
    fn tree_law_has_witness_one_at_total_weight() {
        let mut g = WeightedDigraph::new(3);
        g.add_bidirected(0, 1, 2.0, 5.0).unwrap();
        g.add_bidirected(1, 2, 3.0, 5.0).unwrap();
        let q = shortest_path_quasimetric(&g);
        let d = QuasipartitionDistribution::Explicit(tree_distribution(&g).unwrap());
        let rep = estimate_lipschitz(&d, &q, 15.0);
        assert!((rep.max_witness - 1.0).abs() < 1e-12);
        assert!(rep.pairs.iter().all(|p| (p.witness - 1.0).abs() < 1e-12));
    }

    #[test]
    fn identity_law_never_separates() {
        let g: WeightedDigraph = "2 2\n0 1 1\n1 0 1\n".parse().unwrap();
        let q = shortest_path_quasimetric(&g);
        let d = QuasipartitionDistribution::Explicit(
            ExplicitDistribution::new(vec![(Quasipartition::full(2), 1.0)]).unwrap(),
        );
        assert_eq!(estimate_lipschitz(&d, &q, 1.0).max_witness, 0.0);
        let cfg = SamplerConfig::new(1.0, 3, 50).unwrap();
        let d = QuasipartitionDistribution::sampler(cfg, |_| Quasipartition::full(2));
        let rep = estimate_lipschitz(&d, &q, 1.0);
        assert_eq!(rep.max_witness, 0.0);
        assert!(rep.max_upper_witness.unwrap() > 0.0);
    }
}
