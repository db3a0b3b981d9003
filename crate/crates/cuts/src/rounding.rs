use qcut_core::{bound_check, QuasimetricSpace, Quasipartition};
use qcut_sampling::{ExplicitDistribution, QuasipartitionDistribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::{CutError, CutInstance, CutSolution, FractionalSolution};

/// Members to evaluate with their weights: the support of an explicit law,
/// or `samples` independent draws at weight `1/samples`.
pub fn candidates(dist: &QuasipartitionDistribution) -> Vec<(Quasipartition, f64)> {
    match dist {
        QuasipartitionDistribution::Explicit(law) => law.support().to_vec(),
        QuasipartitionDistribution::Sampler { config, .. } => {
            let w = 1.0 / config.samples as f64;
            (0..config.samples as u64)
                .into_par_iter()
                .map(|i| (dist.draw(i).expect("sampler draws"), w))
                .collect()
        }
    }
}

/// Empirical law of the evaluated members.
pub fn empirical_law(dist: &QuasipartitionDistribution) -> Result<ExplicitDistribution, CutError> {
    match dist {
        QuasipartitionDistribution::Explicit(law) => Ok(law.clone()),
        _ => Ok(ExplicitDistribution::new(candidates(dist))?),
    }
}

/// Edges `(u,v)` with `(u,v) ∉ Q`.
pub fn edges_outside(inst: &CutInstance, q: &Quasipartition) -> Vec<usize> {
    inst.graph()
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !q.contains(e.tail, e.head))
        .map(|(i, _)| i)
        .collect()
}

/// Largest `Pr[(x,y) ∉ Q] · r / d(x,y)` over pairs at finite distance; a
/// separated pair at distance zero makes it infinite.
pub fn support_beta(law: &ExplicitDistribution, dist: &QuasimetricSpace, r: f64) -> f64 {
    let n = law.size();
    let sep = law.separation();
    let mut beta: f64 = 0.0;
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let (p, d) = (sep[x * n + y], dist.get(x, y));
            if p <= 1e-12 || !d.is_finite() {
                continue;
            }
            beta = beta.max(if d > 0.0 { p * r / d } else { f64::INFINITY });
        }
    }
    beta
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticutRounding {
    pub best: CutSolution,
    /// Weighted mean cost over the evaluated members.
    pub mean_cost: f64,
    pub candidates: usize,
}

fn check_size(inst: &CutInstance, q: &Quasipartition) -> Result<(), CutError> {
    if q.size() != inst.vertex_count() {
        return Err(CutError::SizeMismatch {
            expected: inst.vertex_count(),
            found: q.size(),
        });
    }
    Ok(())
}

/// Removes `E ∖ Q` for every member, which must be `(1−eps)`-bounded for
/// `d_x`, and keeps the cheapest.
pub fn round_multicut(
    inst: &CutInstance,
    frac: &FractionalSolution,
    dist: &QuasipartitionDistribution,
    eps: f64,
) -> Result<MulticutRounding, CutError> {
    let radius = 1.0 - eps;
    let members = candidates(dist);
    let solved: Vec<(CutSolution, f64)> = members
        .par_iter()
        .map(|(q, w)| {
            check_size(inst, q)?;
            let report = bound_check(q, &frac.dist, radius)?;
            if !report.bounded {
                return Err(CutError::UnboundedQuasipartition {
                    found: report.max_distance,
                    radius,
                });
            }
            let sol = inst.evaluate(&edges_outside(inst, q))?;
            if let Some(i) = (0..inst.pairs().len()).find(|i| !sol.separated.contains(i)) {
                return Err(CutError::InvalidMulticut(i));
            }
            Ok((sol, *w))
        })
        .collect::<Result<_, _>>()?;
    let mean_cost = solved.iter().map(|(s, w)| s.cost * w).sum();
    let best = solved
        .iter()
        .map(|(s, _)| s)
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .ok_or(CutError::EmptyDistribution)?
        .clone();
    Ok(MulticutRounding {
        best,
        mean_cost,
        candidates: solved.len(),
    })
}

/// Which rule produced a sparsest-cut candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SparsestCase {
    /// Union of strongly connected components closed under successors.
    Balanced,
    /// Distance ball around the one big component.
    Ball,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsestRounding {
    pub best: CutSolution,
    pub case: SparsestCase,
    pub candidates: usize,
    pub balanced_members: usize,
    pub ball_members: usize,
    /// Members keeping a pair beyond `1/(4n²)` under `d_x`.
    pub unbounded_members: usize,
}

/// Edges leaving `side`.
fn out_cut(inst: &CutInstance, side: &[bool]) -> Vec<usize> {
    inst.graph()
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| side[e.tail] && !side[e.head])
        .map(|(i, _)| i)
        .collect()
}

/// Strongly connected components of `reach`, sinks first.
fn components_sinks_first(reach: &Quasipartition) -> Vec<Vec<usize>> {
    let n = reach.size();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if comp[v] == usize::MAX {
            let members: Vec<usize> = (v..n).filter(|&u| reach.contains(v, u) && reach.contains(u, v)).collect();
            for &u in &members {
                comp[u] = out.len();
            }
            out.push(members);
        }
    }
    // a component reaching another reaches strictly more vertices
    let reach_count = |c: &Vec<usize>| (0..n).filter(|&u| reach.contains(c[0], u)).count();
    out.sort_by_key(reach_count);
    out
}

/// Cuts derived from one member: successor-closed prefixes of the
/// component order when every component has fewer than `2n/3` vertices,
/// otherwise out- and in-balls of `d_x` around the big component.
fn member_cuts(inst: &CutInstance, frac: &FractionalSolution, q: &Quasipartition) -> Result<(SparsestCase, Vec<Vec<usize>>), CutError> {
    let n = inst.vertex_count();
    let reach = inst.reachability(&edges_outside(inst, q))?;
    let comps = components_sinks_first(&reach);
    let mut cuts = Vec::new();
    match comps.iter().find(|c| 3 * c.len() >= 2 * n) {
        None => {
            let mut side = vec![false; n];
            for c in &comps[..comps.len() - 1] {
                c.iter().for_each(|&v| side[v] = true);
                cuts.push(out_cut(inst, &side));
            }
            Ok((SparsestCase::Balanced, cuts))
        }
        Some(big) => {
            for inward in [false, true] {
                let reach_of = |v: usize| {
                    big.iter()
                        .map(|&u| if inward { frac.dist.get(v, u) } else { frac.dist.get(u, v) })
                        .fold(f64::INFINITY, f64::min)
                };
                let radius: Vec<f64> = (0..n).map(reach_of).collect();
                let mut levels: Vec<f64> = radius.iter().copied().filter(|d| d.is_finite()).collect();
                levels.sort_by(f64::total_cmp);
                levels.dedup();
                for rho in levels {
                    let ball: Vec<bool> = radius.iter().map(|&d| d <= rho).collect();
                    if ball.iter().all(|&b| b) {
                        continue;
                    }
                    let side = if inward { ball.iter().map(|b| !b).collect() } else { ball };
                    cuts.push(out_cut(inst, &side));
                }
            }
            Ok((SparsestCase::Ball, cuts))
        }
    }
}

/// Case, boundedness and best cut of one support member.
type MemberOutcome = (SparsestCase, bool, Option<(SparsestCase, CutSolution)>);

/// Rounds a uniform-demand sparsest-cut LP through the members of `dist`.
pub fn round_sparsest_cut(
    inst: &CutInstance,
    frac: &FractionalSolution,
    dist: &QuasipartitionDistribution,
) -> Result<SparsestRounding, CutError> {
    if !inst.is_uniform() {
        return Err(CutError::NotUniform);
    }
    let n = inst.vertex_count();
    let radius = 1.0 / (4.0 * (n * n) as f64);
    let members = candidates(dist);
    let per_member: Vec<MemberOutcome> = members
        .par_iter()
        .map(|(q, _)| {
            check_size(inst, q)?;
            let bounded = bound_check(q, &frac.dist, radius)?.bounded;
            let (case, cuts) = member_cuts(inst, frac, q)?;
            let mut best: Option<CutSolution> = None;
            for cut in cuts {
                let sol = inst.evaluate(&cut)?;
                let better = match (&sol.sparsity, best.as_ref().and_then(|b| b.sparsity)) {
                    (Some(_), None) => true,
                    (Some(a), Some(b)) => *a < b,
                    _ => false,
                };
                if better {
                    best = Some(sol);
                }
            }
            Ok((case, bounded, best.map(|b| (case, b))))
        })
        .collect::<Result<_, CutError>>()?;
    let (best, case) = per_member
        .iter()
        .filter_map(|(_, _, b)| b.as_ref())
        .min_by(|a, b| a.1.sparsity.unwrap().total_cmp(&b.1.sparsity.unwrap()))
        .map(|(c, s)| (s.clone(), *c))
        .ok_or(CutError::EmptyDistribution)?;
    let count = |want| per_member.iter().filter(|(c, _, _)| *c == want).count();
    Ok(SparsestRounding {
        best,
        case,
        candidates: per_member.len(),
        balanced_members: count(SparsestCase::Balanced),
        ball_members: count(SparsestCase::Ball),
        unbounded_members: per_member.iter().filter(|(_, b, _)| !b).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{solve_multicut_lp, DEFAULT_EPS};
    use qcut_core::WeightedDigraph;

    #[test]
    fn components_come_sinks_first() {
        // 0 ↔ 1 → 2 ↔ 3
        let q = Quasipartition::from_pairs(4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]);
        assert_eq!(components_sinks_first(&q), vec![vec![2, 3], vec![0, 1]]);
    }

    #[test]
    fn single_edge_multicut_rounds_to_the_edge() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 3.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        let frac = solve_multicut_lp(&inst, DEFAULT_EPS).unwrap();
        let law = ExplicitDistribution::new(vec![(Quasipartition::identity(2), 1.0)]).unwrap();
        let r = round_multicut(&inst, &frac, &QuasipartitionDistribution::Explicit(law), DEFAULT_EPS).unwrap();
        assert_eq!(r.best.edges, vec![0]);
        assert_eq!(r.best.cost, 3.0);
    }

    #[test]
    fn unbounded_member_is_rejected() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(0, 1, 1.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        let frac = solve_multicut_lp(&inst, DEFAULT_EPS).unwrap();
        let law = ExplicitDistribution::new(vec![(Quasipartition::full(2), 1.0)]).unwrap();
        assert!(matches!(
            round_multicut(&inst, &frac, &QuasipartitionDistribution::Explicit(law), DEFAULT_EPS),
            Err(CutError::UnboundedQuasipartition { .. })
        ));
    }

    #[test]
    fn two_vertex_sparsest() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 2.0).unwrap();
        g.add_edge_with_capacity(1, 0, 1.0, 5.0).unwrap();
        let inst = CutInstance::uniform(g);
        let frac = FractionalSolution::from_lengths(&inst, vec![0.5, 0.5]);
        let law = ExplicitDistribution::new(vec![(Quasipartition::identity(2), 1.0)]).unwrap();
        let r = round_sparsest_cut(&inst, &frac, &QuasipartitionDistribution::Explicit(law)).unwrap();
        assert_eq!(r.best.sparsity, Some(2.0));
        assert_eq!(r.case, SparsestCase::Balanced);
    }

    #[test]
    fn beta_of_a_point_mass() {
        let dist = QuasimetricSpace::from_rows(vec![vec![0.0, 2.0], vec![4.0, 0.0]]).unwrap();
        let q = Quasipartition::from_pairs(2, [(1, 0)]);
        let law = ExplicitDistribution::new(vec![(q, 1.0)]).unwrap();
        assert_eq!(support_beta(&law, &dist, 1.0), 0.5);
    }
}
