use qcut_core::{DirectedCutMetric, WeightedDigraph};
use qcut_sampling::TreeInstance;

use crate::{ConvexCombination, EmbedError, Member};

/// One cut per edge `(a, b)` with weight `w/W`; the side is `a`'s component
/// once the tree link between `a` and `b` is dropped.
pub fn tree_cut_distribution(g: &WeightedDigraph) -> Result<ConvexCombination, EmbedError> {
    let t = TreeInstance::new(g)?;
    let n = g.vertex_count();
    let nb = g.undirected_neighbors();
    let members = g
        .edges()
        .iter()
        .map(|e| {
            let mut side = vec![false; n];
            side[e.tail] = true;
            let mut stack = vec![e.tail];
            while let Some(u) = stack.pop() {
                for &v in &nb[u] {
                    let link = (u == e.tail && v == e.head) || (u == e.head && v == e.tail);
                    if !link && !side[v] {
                        side[v] = true;
                        stack.push(v);
                    }
                }
            }
            (Member::Cut(DirectedCutMetric::from_indicator(side)), e.weight / t.total_weight())
        })
        .collect();
    ConvexCombination::new(n, members)
}
