//! Exact optima by depth-first search over keep/remove choices per edge,
//! tracking reachability as one bitset row per vertex.

use crate::{CutError, CutInstance, CutSolution};

pub const MULTICUT_EDGE_LIMIT: usize = 20;
pub const SPARSEST_VERTEX_LIMIT: usize = 8;
const BITSET_LIMIT: usize = 64;

#[derive(Clone)]
struct Reach(Vec<u64>);

impl Reach {
    fn new(n: usize) -> Self {
        Self((0..n).map(|v| 1u64 << v).collect())
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.0[u] >> v & 1 == 1
    }

    fn with(&self, u: usize, v: usize) -> Self {
        let mut next = self.clone();
        if !self.has(u, v) {
            let add = self.0[v];
            for row in next.0.iter_mut() {
                if *row >> u & 1 == 1 {
                    *row |= add;
                }
            }
        }
        next
    }
}

fn guard(what: &'static str, found: usize, limit: usize) -> Result<(), CutError> {
    if found > limit {
        return Err(CutError::TooLarge { what, found, limit });
    }
    Ok(())
}

/// Cheapest edge set leaving no terminal pair connected.
pub fn brute_force_multicut(inst: &CutInstance) -> Result<CutSolution, CutError> {
    let g = inst.graph();
    guard("edge count", g.edge_count(), MULTICUT_EDGE_LIMIT)?;
    guard("vertex count", g.vertex_count(), BITSET_LIMIT)?;
    struct Search<'a> {
        inst: &'a CutInstance,
        best: Option<(f64, Vec<usize>)>,
        removed: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, e: usize, reach: Reach, cost: f64) {
            if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
                return;
            }
            let g = self.inst.graph();
            if e == g.edge_count() {
                self.best = Some((cost, self.removed.clone()));
                return;
            }
            let ed = g.edge(e);
            let kept = reach.with(ed.tail, ed.head);
            if self.inst.pairs().iter().all(|p| !kept.has(p.source, p.target)) {
                self.go(e + 1, kept, cost);
            }
            self.removed.push(e);
            self.go(e + 1, reach, cost + ed.capacity);
            self.removed.pop();
        }
    }
    let mut s = Search {
        inst,
        best: None,
        removed: Vec::new(),
    };
    let start = Reach::new(g.vertex_count());
    s.go(0, start, 0.0);
    let (_, edges) = s.best.expect("removing every edge separates all pairs");
    inst.evaluate(&edges)
}

/// Edge set minimising capacity over separated demand. Only edge sets equal
/// to the complement of their own reachability closure are visited, since
/// any other set costs more and separates the same pairs as its closed part.
pub fn brute_force_sparsest_cut(inst: &CutInstance) -> Result<CutSolution, CutError> {
    let g = inst.graph();
    guard("vertex count", g.vertex_count(), SPARSEST_VERTEX_LIMIT)?;
    if inst.total_demand() <= 0.0 {
        return Err(CutError::ZeroDemand);
    }
    struct Search<'a> {
        inst: &'a CutInstance,
        best: Option<(f64, Vec<usize>)>,
        removed: Vec<usize>,
    }
    impl Search<'_> {
        fn open_demand(&self, reach: &Reach) -> f64 {
            self.inst
                .pairs()
                .iter()
                .filter(|p| !reach.has(p.source, p.target))
                .map(|p| p.amount)
                .sum()
        }

        fn go(&mut self, e: usize, reach: Reach, cost: f64) {
            let open = self.open_demand(&reach);
            if open <= 0.0 || self.best.as_ref().is_some_and(|(b, _)| cost >= *b * open) {
                return;
            }
            let g = self.inst.graph();
            if e == g.edge_count() {
                self.best = Some((cost / open, self.removed.clone()));
                return;
            }
            let ed = g.edge(e);
            if reach.has(ed.tail, ed.head) {
                self.go(e + 1, reach, cost);
                return;
            }
            let kept = reach.with(ed.tail, ed.head);
            if self.removed.iter().all(|&r| !kept.has(g.edge(r).tail, g.edge(r).head)) {
                self.go(e + 1, kept, cost);
            }
            self.removed.push(e);
            self.go(e + 1, reach, cost + ed.capacity);
            self.removed.pop();
        }
    }
    let mut s = Search {
        inst,
        best: None,
        removed: Vec::new(),
    };
    s.go(0, Reach::new(g.vertex_count()), 0.0);
    let (_, edges) = s.best.expect("removing every edge separates positive demand");
    inst.evaluate(&edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcut_core::WeightedDigraph;

    #[test]
    fn single_edge() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 3.0).unwrap();
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        let s = brute_force_multicut(&inst).unwrap();
        assert_eq!((s.edges.clone(), s.cost), (vec![0], 3.0));
        let s = brute_force_sparsest_cut(&inst).unwrap();
        assert_eq!(s.sparsity, Some(3.0));
    }

    #[test]
    fn cheapest_edge_on_each_path() {
        let mut g = WeightedDigraph::new(6);
        for (a, b, c) in [(0, 1, 4.0), (1, 2, 1.0), (3, 4, 2.0), (4, 5, 5.0)] {
            g.add_edge_with_capacity(a, b, 1.0, c).unwrap();
        }
        let inst = CutInstance::new(g, vec![(0, 2, 1.0), (3, 5, 1.0)]).unwrap();
        let s = brute_force_multicut(&inst).unwrap();
        assert_eq!(s.edges, vec![1, 2]);
        assert_eq!(s.cost, 3.0);
    }

    #[test]
    fn bidirected_edge_sparsest() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge_with_capacity(0, 1, 1.0, 2.0).unwrap();
        g.add_edge_with_capacity(1, 0, 1.0, 7.0).unwrap();
        let s = brute_force_sparsest_cut(&CutInstance::uniform(g)).unwrap();
        assert_eq!(s.edges, vec![0]);
        assert_eq!(s.sparsity, Some(2.0));
    }

    #[test]
    fn directed_cycle_sparsest_removes_one_edge() {
        // one edge of C_n leaves a path, separating n(n-1)/2 ordered pairs
        let n = 6;
        let mut g = WeightedDigraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1.0).unwrap();
        }
        let s = brute_force_sparsest_cut(&CutInstance::uniform(g)).unwrap();
        assert_eq!(s.edges.len(), 1);
        assert_eq!(s.demand, 15.0);
    }

    /// Plain enumeration over all edge subsets.
    fn exhaustive(inst: &CutInstance, multicut: bool) -> f64 {
        let m = inst.graph().edge_count();
        let mut best = f64::INFINITY;
        for mask in 0u32..1 << m {
            let edges: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
            let s = inst.evaluate(&edges).unwrap();
            let value = if multicut {
                if s.separates_all(inst) { s.cost } else { f64::INFINITY }
            } else {
                s.sparsity.unwrap_or(f64::INFINITY)
            };
            best = best.min(value);
        }
        best
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(3..=5);
            let mut g = WeightedDigraph::new(n);
            for _ in 0..rng.gen_range(n..=10) {
                let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if a != b {
                    g.add_edge_with_capacity(a, b, 1.0, rng.gen_range(1..=5) as f64).unwrap();
                }
            }
            let pairs = vec![(0, n - 1, 1.0), (1, 0, 1.0)];
            let inst = CutInstance::new(g.clone(), pairs).unwrap();
            let want = exhaustive(&inst, true);
            assert!((brute_force_multicut(&inst).unwrap().cost - want).abs() < 1e-9);
            let inst = CutInstance::uniform(g);
            let want = exhaustive(&inst, false);
            let got = brute_force_sparsest_cut(&inst).unwrap().sparsity.unwrap();
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn size_guards() {
        let mut g = WeightedDigraph::new(9);
        g.add_edge(0, 1, 1.0).unwrap();
        assert!(matches!(
            brute_force_sparsest_cut(&CutInstance::uniform(g)),
            Err(CutError::TooLarge { limit: 8, .. })
        ));
        let mut g = WeightedDigraph::new(2);
        for _ in 0..21 {
            g.add_edge(0, 1, 1.0).unwrap();
        }
        let inst = CutInstance::new(g, vec![(0, 1, 1.0)]).unwrap();
        assert!(matches!(brute_force_multicut(&inst), Err(CutError::TooLarge { limit: 20, .. })));
    }
}
