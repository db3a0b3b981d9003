use qcut_core::{zero_one_from_quasipartition, DirectedCutMetric, DirectedL1Embedding, ZeroOneQuasimetric};
use qcut_sampling::QuasipartitionDistribution;
use serde::Serialize;
use serde_json::{json, Value};

use crate::EmbedError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Member {
    ZeroOne(ZeroOneQuasimetric),
    Cut(DirectedCutMetric),
}

impl Member {
    pub fn size(&self) -> usize {
        match self {
            Member::ZeroOne(z) => z.size(),
            Member::Cut(c) => c.size(),
        }
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        match self {
            Member::ZeroOne(z) => z.distance(x, y),
            Member::Cut(c) => c.distance(x, y),
        }
    }
}

/// Weighted members with weights summing to one; `d_φ = Σ λ_i d_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexCombination {
    n: usize,
    members: Vec<(Member, f64)>,
}

impl ConvexCombination {
    /// An empty member list is the zero quasimetric.
    pub fn new(n: usize, members: Vec<(Member, f64)>) -> Result<Self, EmbedError> {
        let mut total = 0.0;
        for (m, w) in &members {
            if m.size() != n {
                return Err(EmbedError::SizeMismatch {
                    expected: n,
                    found: m.size(),
                });
            }
            if !(*w >= 0.0 && w.is_finite()) {
                return Err(EmbedError::BadWeights(*w));
            }
            total += w;
        }
        if !members.is_empty() && (total - 1.0).abs() > 1e-9 {
            return Err(EmbedError::BadWeights(total));
        }
        Ok(Self { n, members })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[(Member, f64)] {
        &self.members
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.members.iter().map(|(m, w)| w * m.distance(x, y)).sum()
    }

    /// Row-major `d_φ`.
    pub fn table(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for (m, w) in &self.members {
            for x in 0..n {
                for y in 0..n {
                    out[x * n + y] += w * m.distance(x, y);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|(m, w)| match m {
                Member::Cut(c) => json!({ "type": "cut", "side": c.side(), "weight": w }),
                Member::ZeroOne(z) => {
                    let n = z.size();
                    let rows: Vec<Vec<u8>> = (0..n)
                        .map(|x| (0..n).map(|y| z.distance(x, y) as u8).collect())
                        .collect();
                    json!({ "type": "zero_one", "table": rows, "weight": w })
                }
            })
            .collect();
        json!({ "size": self.n, "members": members })
    }
}

/// One 0-1 quasimetric per support member: `d_φ(u,v) = Pr[(u,v) ∉ Q]`.
pub fn combination_from_distribution(dist: &QuasipartitionDistribution) -> Result<ConvexCombination, EmbedError> {
    let QuasipartitionDistribution::Explicit(law) = dist else {
        return Err(EmbedError::NeedsExplicit);
    };
    let members = law
        .support()
        .iter()
        .map(|(q, p)| (Member::ZeroOne(zero_one_from_quasipartition(q)), *p))
        .collect();
    ConvexCombination::new(law.size(), members)
}

/// One coordinate per cut, `λ/2` on the cut side, so each coordinate adds
/// `λ` to the directed l1 distance exactly on the pairs leaving the side.
pub fn cuts_to_l1(c: &ConvexCombination) -> Result<DirectedL1Embedding, EmbedError> {
    let mut coords = vec![Vec::with_capacity(c.members.len()); c.n];
    for (i, (m, w)) in c.members.iter().enumerate() {
        let Member::Cut(cut) = m else {
            return Err(EmbedError::NotACut(i));
        };
        for (x, row) in coords.iter_mut().enumerate() {
            row.push(if cut.in_side(x) { w / 2.0 } else { 0.0 });
        }
    }
    Ok(DirectedL1Embedding::new(coords, 1.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcut_core::{directed_cut_from_set, Quasipartition};
    use qcut_sampling::ExplicitDistribution;

    fn point_mass(q: Quasipartition) -> QuasipartitionDistribution<'static> {
        QuasipartitionDistribution::Explicit(ExplicitDistribution::new(vec![(q, 1.0)]).unwrap())
    }

    #[test]
    fn identity_point_mass_separates_everything() {
        let c = combination_from_distribution(&point_mass(Quasipartition::identity(3))).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c.distance(x, y), f64::from(u8::from(x != y)));
            }
        }
        let c = combination_from_distribution(&point_mass(Quasipartition::full(3))).unwrap();
        assert!(c.table().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn single_cut_to_l1() {
        let cut = directed_cut_from_set(2, &[0]).unwrap();
        let c = ConvexCombination::new(2, vec![(Member::Cut(cut), 1.0)]).unwrap();
        let e = cuts_to_l1(&c).unwrap();
        assert_eq!(e.distance(0, 1), 1.0);
        assert_eq!(e.distance(1, 0), 0.0);
    }

    #[test]
    fn empty_combination_is_zero() {
        let c = ConvexCombination::new(3, Vec::new()).unwrap();
        let e = cuts_to_l1(&c).unwrap();
        assert!((0..3).all(|x| (0..3).all(|y| e.distance(x, y) == 0.0)));
    }

    #[test]
    fn rejects_bad_members() {
        let cut = directed_cut_from_set(2, &[0]).unwrap();
        assert!(ConvexCombination::new(2, vec![(Member::Cut(cut.clone()), 0.5)]).is_err());
        assert!(ConvexCombination::new(3, vec![(Member::Cut(cut), 1.0)]).is_err());
        let z = zero_one_from_quasipartition(&Quasipartition::identity(2));
        let c = ConvexCombination::new(2, vec![(Member::ZeroOne(z), 1.0)]).unwrap();
        assert_eq!(cuts_to_l1(&c), Err(EmbedError::NotACut(0)));
        let sampler = QuasipartitionDistribution::sampler(
            qcut_sampling::SamplerConfig::new(1.0, 0, 1).unwrap(),
            |_| Quasipartition::identity(2),
        );
        assert_eq!(combination_from_distribution(&sampler), Err(EmbedError::NeedsExplicit));
    }

    #[test]
    fn json_lists_members() {
        let cut = directed_cut_from_set(2, &[1]).unwrap();
        let c = ConvexCombination::new(2, vec![(Member::Cut(cut), 1.0)]).unwrap();
        let v = c.to_json();
        assert_eq!(v["members"][0]["type"], "cut");
        assert_eq!(v["members"][0]["side"][0], 1);
    }
}
