//! Distance-variable LP relaxations. For every needed source `s` there is a
//! variable `d(s,v)` per vertex, held below the `x`-shortest-path distance
//! by one relaxation row per edge: `d(s,v) ≤ d(s,w) + x(w,v)`.

use crate::simplex::{LinearProgram, Sense};
use crate::{CutError, CutInstance, FractionalSolution};

/// Default LP accuracy.
pub const DEFAULT_EPS: f64 = 1e-6;

struct DistanceLp {
    lp: LinearProgram,
    /// `slot[s][v]` is the column of `d(s,v)`; `None` on the diagonal and
    /// for sources that are not needed.
    slot: Vec<Vec<Option<usize>>>,
}

fn distance_lp(inst: &CutInstance, sources: &[usize]) -> DistanceLp {
    let g = inst.graph();
    let (n, m) = (g.vertex_count(), g.edge_count());
    let mut slot = vec![vec![None; n]; n];
    let mut next = m;
    for &s in sources {
        for v in (0..n).filter(|&v| v != s) {
            slot[s][v] = Some(next);
            next += 1;
        }
    }
    let mut objective = vec![0.0; next];
    for (e, ed) in g.edges().iter().enumerate() {
        objective[e] = ed.capacity;
    }
    let mut lp = LinearProgram::new(objective);
    for &s in sources {
        for (e, ed) in g.edges().iter().enumerate() {
            let Some(head) = slot[s][ed.head] else {
                continue;
            };
            let mut row = vec![(head, 1.0), (e, -1.0)];
            if let Some(tail) = slot[s][ed.tail] {
                row.push((tail, -1.0));
            }
            lp.add(row, Sense::Le, 0.0);
        }
    }
    DistanceLp { lp, slot }
}

fn lengths(inst: &CutInstance, values: &[f64]) -> Vec<f64> {
    values[..inst.graph().edge_count()].iter().map(|v| v.max(0.0)).collect()
}

/// Fractional multicut: minimise `Σ c(e)x(e)` subject to `d_x(s_i,t_i) ≥ 1`.
pub fn solve_multicut_lp(inst: &CutInstance, eps: f64) -> Result<FractionalSolution, CutError> {
    if inst.pairs().is_empty() {
        return Err(CutError::NoPairs);
    }
    let mut sources: Vec<usize> = inst.pairs().iter().map(|p| p.source).collect();
    sources.sort_unstable();
    sources.dedup();
    let DistanceLp { mut lp, slot } = distance_lp(inst, &sources);
    for p in inst.pairs() {
        let d = slot[p.source][p.target].expect("source slots exist");
        lp.add(vec![(d, 1.0)], Sense::Ge, 1.0);
    }
    let sol = lp.solve()?;
    let mut frac = FractionalSolution::from_lengths(inst, lengths(inst, &sol.values));
    let low = frac.min_pair_distance(inst);
    if low < 1.0 - eps {
        return Err(CutError::Infeasible(1.0 - low));
    }
    if low < 1.0 {
        let x = frac.x.iter().map(|v| v / low).collect();
        frac = FractionalSolution::from_lengths(inst, x);
    }
    Ok(frac)
}

/// Fractional sparsest cut: minimise `Σ c(e)x(e)` subject to
/// `Σ dem(i) d_x(s_i,t_i) ≥ 1`, rescaled so the sum is exactly 1.
pub fn solve_sparsest_cut_lp(inst: &CutInstance, eps: f64) -> Result<FractionalSolution, CutError> {
    if inst.total_demand() <= 0.0 {
        return Err(CutError::ZeroDemand);
    }
    let mut sources: Vec<usize> = inst.pairs().iter().filter(|p| p.amount > 0.0).map(|p| p.source).collect();
    sources.sort_unstable();
    sources.dedup();
    let DistanceLp { mut lp, slot } = distance_lp(inst, &sources);
    let cover = inst
        .pairs()
        .iter()
        .filter(|p| p.amount > 0.0)
        .map(|p| (slot[p.source][p.target].expect("source slots exist"), p.amount))
        .collect();
    lp.add(cover, Sense::Ge, 1.0);
    let sol = lp.solve()?;
    let frac = FractionalSolution::from_lengths(inst, lengths(inst, &sol.values));
    let total = frac.demand_distance(inst);
    if total < 1.0 - eps {
        return Err(CutError::Infeasible(1.0 - total));
    }
    if !total.is_finite() {
        return Ok(frac);
    }
    let x = frac.x.iter().map(|v| v / total).collect();
    Ok(FractionalSolution::from_lengths(inst, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcut_core::WeightedDigraph;

    #[test]
    fn single_edge_multicut() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 3.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        let f = solve_multicut_lp(&inst, DEFAULT_EPS).unwrap();
        assert!((f.x[0] - 1.0).abs() < 1e-9);
        assert!((f.objective - 3.0).abs() < 1e-9);
    }

    #[test]
    fn two_parallel_paths() {
        let mut g = WeightedDigraph::new(4);
        for (a, b) in [(0, 1), (1, 3), (0, 2), (2, 3)] {
            g.add_edge(a, b, 1.0).unwrap();
        }
        let inst = CutInstance::new(g, vec![(0, 3, 1.0)]).unwrap();
        let f = solve_multicut_lp(&inst, DEFAULT_EPS).unwrap();
        assert!((f.objective - 2.0).abs() < 1e-9);
        assert!(f.min_pair_distance(&inst) >= 1.0 - 1e-9);
    }

    #[test]
    fn unreachable_pair_costs_nothing() {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(2, 1, 1.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 2, 1.0)]).unwrap();
        let f = solve_multicut_lp(&inst, DEFAULT_EPS).unwrap();
        assert_eq!(f.objective, 0.0);
    }

    #[test]
    fn single_edge_sparsest() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 5.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        let f = solve_sparsest_cut_lp(&inst, DEFAULT_EPS).unwrap();
        assert!((f.x[0] - 1.0).abs() < 1e-9);
        assert!((f.objective - 5.0).abs() < 1e-9);
        assert!((f.demand_distance(&inst) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn requires_pairs_and_demand() {
        let g = WeightedDigraph::new(2);
        let inst = CutInstance::new(g.clone(), vec![]).unwrap();
        assert_eq!(solve_multicut_lp(&inst, DEFAULT_EPS), Err(CutError::NoPairs));
        let inst = CutInstance::new(g, vec![(0, 1, 0.0)]).unwrap();
        assert_eq!(solve_sparsest_cut_lp(&inst, DEFAULT_EPS), Err(CutError::ZeroDemand));
    }
}
