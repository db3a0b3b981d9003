//! Directed generalisation of the three-round ball-chopping scheme: each
//! round picks a centre per weakly connected component and removes every
//! edge whose tail lies within and head beyond some threshold `z + i·r`.

use qcut_core::quasimetric::dijkstra_with;
use qcut_core::{bound_check, shortest_path_quasimetric, transitive_closure, BoundReport, Quasipartition, WeightedDigraph};
use qcut_sampling::threshold::crosses;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Whether a chopped edge takes its reverse twins with it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// Arcs are removed one at a time.
    Directed,
    /// Removing `(u,v)` also removes every `(v,u)`, as for undirected links.
    Undirected,
}

/// How each component chooses its centre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PickPolicy {
    /// Lowest vertex id.
    Smallest,
    /// Uniform over the component.
    Random,
    /// Round `i` picks `sequence[i]` when it lies in the component, and the
    /// lowest vertex id otherwise.
    Sequence(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KprOutcome {
    pub quasipartition: Quasipartition,
    pub report: BoundReport,
    /// Edges removed, in removal order.
    pub removed: Vec<usize>,
    /// Centres chosen per round.
    pub centres: Vec<Vec<usize>>,
}

impl KprOutcome {
    pub fn bounded(&self) -> bool {
        self.report.bounded
    }
}

/// Weakly connected components over the live edges, each sorted.
fn components(g: &WeightedDigraph, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut nbrs = vec![Vec::new(); n];
    for (ed, _) in g.edges().iter().zip(alive).filter(|(_, a)| **a) {
        nbrs[ed.tail].push(ed.head);
        nbrs[ed.head].push(ed.tail);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let (mut comp, mut stack) = (vec![s], vec![s]);
        while let Some(u) = stack.pop() {
            for &v in &nbrs[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Runs `rounds` rounds at radius `r`, then closes the surviving edges.
pub fn kpr_generalized<R: Rng + ?Sized>(
    g: &WeightedDigraph,
    r: f64,
    policy: &PickPolicy,
    orientation: Orientation,
    rounds: usize,
    rng: &mut R,
) -> Result<KprOutcome, qcut_core::CoreError> {
    let n = g.vertex_count();
    let mut alive = vec![true; g.edge_count()];
    let mut removed = Vec::new();
    let mut centres = Vec::with_capacity(rounds);
    let mut twins = vec![Vec::new(); g.edge_count()];
    if orientation == Orientation::Undirected {
        let inn = g.in_adjacency();
        for (e, ed) in g.edges().iter().enumerate() {
            twins[e] = inn[ed.tail].iter().copied().filter(|&f| g.edge(f).tail == ed.head).collect();
        }
    }
    for round in 0..rounds {
        let mut adj = vec![Vec::new(); n];
        for (e, ed) in g.edges().iter().enumerate() {
            if alive[e] {
                adj[ed.tail].push(e);
            }
        }
        let mut picked = Vec::new();
        for comp in components(g, &alive) {
            let z = rng.gen_range(0.0..r);
            let x = match policy {
                PickPolicy::Smallest => comp[0],
                PickPolicy::Random => comp[rng.gen_range(0..comp.len())],
                PickPolicy::Sequence(seq) => match seq.get(round) {
                    Some(v) if comp.binary_search(v).is_ok() => *v,
                    _ => comp[0],
                },
            };
            picked.push(x);
            let d = dijkstra_with(g, &adj, x, false);
            for &u in &comp {
                for &e in &adj[u] {
                    let head = g.edge(e).head;
                    if crosses(d[u], d[head], z, r) {
                        for f in std::iter::once(e).chain(twins[e].iter().copied()) {
                            if std::mem::replace(&mut alive[f], false) {
                                removed.push(f);
                            }
                        }
                    }
                }
            }
        }
        centres.push(picked);
    }
    let mut rel = vec![false; n * n];
    for (e, ed) in g.edges().iter().enumerate() {
        if alive[e] {
            rel[ed.tail * n + ed.head] = true;
        }
    }
    let quasipartition = transitive_closure(n, &rel)?;
    let report = bound_check(&quasipartition, &shortest_path_quasimetric(g), r)?;
    Ok(KprOutcome {
        quasipartition,
        report,
        removed,
        centres,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_path_is_chopped_every_radius() {
        let mut g = WeightedDigraph::new(6);
        for v in 1..6 {
            g.add_bidirected(v - 1, v, 1.0, 1.0).unwrap();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = kpr_generalized(&g, 2.0, &PickPolicy::Smallest, Orientation::Directed, 1, &mut rng).unwrap();
        // from vertex 0 every forward edge spanning a threshold goes; the
        // backward edges only go when their tail is nearer than their head
        assert!(out.removed.iter().all(|&e| g.edge(e).tail < g.edge(e).head));
        assert_eq!(out.centres, vec![vec![0]]);
    }

    #[test]
    fn undirected_chop_takes_the_twin() {
        let mut g = WeightedDigraph::new(3);
        g.add_bidirected(0, 1, 1.0, 1.0).unwrap();
        g.add_bidirected(1, 2, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = kpr_generalized(&g, 5.0, &PickPolicy::Smallest, Orientation::Undirected, 1, &mut rng).unwrap();
        // one threshold in [0, 5) falls in exactly one of [0, 1), [1, 2)
        assert!(out.removed.len() <= 2);
        for pair in out.removed.chunks(2) {
            assert_eq!(g.edge(pair[0]).tail, g.edge(pair[1]).head);
        }
    }

    #[test]
    fn centre_that_reaches_nothing_removes_nothing() {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(0, 1, 5.0).unwrap();
        g.add_edge(1, 2, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = kpr_generalized(&g, 1.0, &PickPolicy::Sequence(vec![2]), Orientation::Directed, 1, &mut rng).unwrap();
        assert!(out.removed.is_empty());
        assert!(!out.bounded());
        assert_eq!(out.report.max_distance, 10.0);
    }

    #[test]
    fn zero_rounds_keep_everything() {
        let mut g = WeightedDigraph::new(2);
        g.add_bidirected(0, 1, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = kpr_generalized(&g, 0.5, &PickPolicy::Random, Orientation::Directed, 0, &mut rng).unwrap();
        assert_eq!(out.quasipartition, Quasipartition::full(2));
    }
}
