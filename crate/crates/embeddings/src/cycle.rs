use std::collections::HashMap;

use qcut_core::{DirectedCutMetric, Quasipartition};
use qcut_sampling::{CycleInstance, CycleLaw, RingEdge};

use crate::{ConvexCombination, EmbedError, Member};

/// Largest removal set a cycle support member may have.
pub const MAX_REMOVED: usize = 28;

/// Side `U` of a relation that is exactly "everything except `U → V∖U`".
pub(crate) fn cut_of(q: &Quasipartition) -> Result<DirectedCutMetric, EmbedError> {
    let n = q.size();
    let side: Vec<bool> = (0..n).map(|x| (0..n).any(|y| !q.contains(x, y))).collect();
    for x in 0..n {
        for y in 0..n {
            if q.contains(x, y) == (side[x] && !side[y]) {
                return Err(EmbedError::RelationNotACut);
            }
        }
    }
    Ok(DirectedCutMetric::from_indicator(side))
}

/// Cuts from removing one clockwise and one counter-clockwise edge of
/// `removed`, skipping opposite edges between the same two vertices.
pub fn cut_family(c: &CycleInstance, removed: &[RingEdge]) -> Result<Vec<DirectedCutMetric>, EmbedError> {
    let mut out = Vec::new();
    for a in removed.iter().filter(|e| e.clockwise) {
        for b in removed.iter().filter(|e| !e.clockwise && e.pos != a.pos) {
            out.push(cut_of(&c.closure_without(&[*a, *b]))?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleCuts {
    pub combination: ConvexCombination,
    /// Largest cut family over the support.
    pub max_family: usize,
    /// Largest removal set over the support.
    pub max_removed: usize,
}

fn build(c: &CycleInstance, law: &CycleLaw, limit: Option<usize>) -> Result<CycleCuts, EmbedError> {
    let n = c.vertex_count();
    let mut weight: HashMap<DirectedCutMetric, f64> = HashMap::new();
    let mut order = Vec::new();
    let (mut max_family, mut max_removed) = (0, 0);
    for atom in &law.atoms {
        if limit.is_some_and(|l| atom.removed.len() > l) {
            return Err(EmbedError::TooManyRemoved(atom.removed.len()));
        }
        max_removed = max_removed.max(atom.removed.len());
        let mut family = cut_family(c, &atom.removed)?;
        max_family = max_family.max(family.len());
        if family.is_empty() {
            // only opposite pairs were removed, so nothing is separated
            family.push(DirectedCutMetric::from_indicator(vec![false; n]));
        }
        let share = atom.mass / family.len() as f64;
        for cut in family {
            let w = weight.entry(cut.clone()).or_insert_with(|| {
                order.push(cut);
                0.0
            });
            *w += share;
        }
    }
    let members = order
        .into_iter()
        .map(|cut| {
            let w = weight[&cut];
            (Member::Cut(cut), w)
        })
        .collect();
    Ok(CycleCuts {
        combination: ConvexCombination::new(n, members)?,
        max_family,
        max_removed,
    })
}

/// Replaces each support member by a uniform choice from its cut family.
/// Fails if a member removes more than [`MAX_REMOVED`] edges.
pub fn cycle_cut_distribution(c: &CycleInstance, law: &CycleLaw) -> Result<CycleCuts, EmbedError> {
    build(c, law, Some(MAX_REMOVED))
}

/// Same construction without the removal-count check.
pub fn cycle_cut_distribution_unchecked(c: &CycleInstance, law: &CycleLaw) -> Result<CycleCuts, EmbedError> {
    build(c, law, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcut_core::WeightedDigraph;
    use qcut_sampling::enumerate_cycle_law;

    fn square() -> CycleInstance {
        let mut g = WeightedDigraph::new(4);
        for i in 0..4 {
            g.add_bidirected(i, (i + 1) % 4, 1.0, 1.0).unwrap();
        }
        CycleInstance::new(&g).unwrap()
    }

    #[test]
    fn one_edge_each_way_gives_one_cut() {
        let c = square();
        let cw = RingEdge { pos: 0, clockwise: true };
        let ccw = RingEdge { pos: 2, clockwise: false };
        let fam = cut_family(&c, &[cw, ccw]).unwrap();
        assert_eq!(fam.len(), 1);
        // 0→1 and 3→2 gone: {0,3} cannot reach {1,2}
        let s = fam[0].side();
        assert_eq!(s, vec![0, 3]);
        assert!(cut_family(&c, &[cw, RingEdge { pos: 0, clockwise: false }]).unwrap().is_empty());
    }

    #[test]
    fn unit_square_law_is_all_singletons() {
        let c = square();
        let law = enumerate_cycle_law(&c);
        let cuts = cycle_cut_distribution(&c, &law).unwrap();
        assert_eq!(cuts.max_removed, 8);
        assert_eq!(cuts.max_family, 12);
        let total: f64 = cuts.combination.members().iter().map(|m| m.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cut_detection() {
        let q = Quasipartition::identity(3);
        assert!(cut_of(&q).is_err());
        let q = Quasipartition::from_pairs(3, [(0, 1), (1, 0), (2, 0)]);
        assert_eq!(cut_of(&q).unwrap().side(), vec![0, 1]);
    }
}
