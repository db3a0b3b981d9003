use std::collections::HashMap;

use qcut_core::{bound_check, shortest_path_quasimetric, Quasipartition};
use qcut_decompositions::paths::PathTree;
use qcut_decompositions::{EdgeKind, PathOfCliques};
use rand::Rng;

use crate::threshold::{cells, crosses, dedup_sorted, residues};
use crate::{ExplicitDistribution, SamplingError};

/// Step of the pathwidth sampler that first removed an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PwStep {
    /// Level-set cut in the given left-to-right sweep.
    Forward(usize),
    /// Level-set cut in the given right-to-left sweep.
    Backward(usize),
    /// Edges of length at least the radius.
    Long,
}

/// One iteration of a sweep: the surviving graph, the distances from the
/// chosen source inside it and the shortest path whose horizontal edges are
/// deleted afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub source: usize,
    pub target: usize,
    pub dist: Vec<f64>,
    pub alive: Vec<usize>,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PwOutcome {
    pub z: f64,
    pub host: Quasipartition,
    pub removed_at: Vec<Option<PwStep>>,
}

impl PwOutcome {
    /// Host edges kept before the closure.
    pub fn kept_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.removed_at
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(e, _)| e)
    }

    pub fn project(&self, pc: &PathOfCliques) -> Quasipartition {
        self.host.restrict(pc.embedding())
    }
}

/// Pathwidth sampler; the sweeps do not depend on the random offset and are
/// computed once. Iterations with no reachable source are `None`.
#[derive(Debug, Clone)]
pub struct PathwidthSampler<'a> {
    pc: &'a PathOfCliques,
    r: f64,
    forward: Vec<Option<Sweep>>,
    backward: Vec<Option<Sweep>>,
    edge_dist: Vec<f64>,
}

fn run_sweeps(pc: &PathOfCliques, backward: bool) -> Vec<Option<Sweep>> {
    let g = pc.host();
    let k = pc.clique_size();
    let cl = pc.cliques();
    let (from, to) = match (cl.first(), cl.last()) {
        (Some(a), Some(b)) if backward => (b, a),
        (Some(a), Some(b)) => (a, b),
        _ => return Vec::new(),
    };
    let mut from = from.clone();
    from.sort_unstable();
    let mut to = to.clone();
    to.sort_unstable();
    let mut alive = vec![true; g.edge_count()];
    let mut out = Vec::with_capacity(k * k);
    for _ in 0..k * k {
        let found = from.iter().find_map(|&s| {
            let tree = PathTree::build(g, s, false, |e| alive[e]);
            let t = to.iter().copied().find(|&t| tree.dist[t].is_finite())?;
            Some((s, t, tree))
        });
        let Some((source, target, tree)) = found else {
            out.push(None);
            continue;
        };
        let path = tree.path(g, target).expect("target is reachable");
        let live = (0..g.edge_count()).filter(|&e| alive[e]).collect();
        for &e in &path {
            if pc.edge_kind(e) != EdgeKind::Vertical {
                alive[e] = false;
            }
        }
        out.push(Some(Sweep {
            source,
            target,
            dist: tree.dist,
            alive: live,
            path,
        }));
    }
    out
}

impl<'a> PathwidthSampler<'a> {
    pub fn new(pc: &'a PathOfCliques, r: f64) -> Result<Self, SamplingError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(SamplingError::BadRadius(r));
        }
        let g = pc.host();
        let dist = shortest_path_quasimetric(g);
        Ok(Self {
            pc,
            r,
            forward: run_sweeps(pc, false),
            backward: run_sweeps(pc, true),
            edge_dist: g.edges().iter().map(|e| dist.get(e.tail, e.head)).collect(),
        })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn forward(&self) -> &[Option<Sweep>] {
        &self.forward
    }

    pub fn backward(&self) -> &[Option<Sweep>] {
        &self.backward
    }

    /// Horizontal host edges on no sweep path.
    pub fn uncovered_horizontal(&self) -> Vec<usize> {
        let mut covered = vec![false; self.pc.host().edge_count()];
        for sw in self.forward.iter().chain(&self.backward).flatten() {
            for &e in &sw.path {
                covered[e] = true;
            }
        }
        (0..covered.len())
            .filter(|&e| !covered[e] && self.pc.edge_kind(e) != EdgeKind::Vertical)
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PwOutcome {
        self.run(rng.gen::<f64>() * self.r)
    }

    pub fn run(&self, z: f64) -> PwOutcome {
        let g = self.pc.host();
        let mut removed: Vec<Option<PwStep>> = vec![None; g.edge_count()];
        let tagged = self
            .forward
            .iter()
            .enumerate()
            .map(|(i, s)| (PwStep::Forward(i), s))
            .chain(self.backward.iter().enumerate().map(|(i, s)| (PwStep::Backward(i), s)));
        for (step, sw) in tagged {
            let Some(sw) = sw else { continue };
            for &e in &sw.alive {
                let ed = g.edge(e);
                if crosses(sw.dist[ed.tail], sw.dist[ed.head], z, self.r) {
                    removed[e].get_or_insert(step);
                }
            }
        }
        for (e, slot) in removed.iter_mut().enumerate() {
            if slot.is_none() && self.edge_dist[e] >= self.r {
                *slot = Some(PwStep::Long);
            }
        }
        let kept = (0..g.edge_count())
            .filter(|&e| removed[e].is_none())
            .map(|e| (g.edge(e).tail, g.edge(e).head));
        PwOutcome {
            z,
            host: Quasipartition::from_pairs(g.vertex_count(), kept),
            removed_at: removed,
        }
    }

    fn residues_of(sweeps: &[Option<Sweep>], r: f64) -> (Vec<usize>, Vec<f64>) {
        let mut all = Vec::new();
        let counts = sweeps
            .iter()
            .map(|sw| match sw {
                Some(sw) => {
                    let res = residues(sw.dist.iter().copied(), r);
                    all.extend(&res);
                    res.len()
                }
                None => 0,
            })
            .collect();
        dedup_sorted(&mut all);
        (counts, all)
    }
}

/// Breakpoint accounting for the exact support.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    /// Distinct offsets at which each sweep's cut changes.
    pub forward_breakpoints: Vec<usize>,
    pub backward_breakpoints: Vec<usize>,
    /// Distinct breakpoints over all forward (resp. backward) sweeps.
    pub forward_total: usize,
    pub backward_total: usize,
    /// `(host vertices − 1) · k²`.
    pub bound: usize,
    pub cells: usize,
}

impl SupportReport {
    pub fn within_bound(&self) -> bool {
        self.forward_total <= self.bound && self.backward_total <= self.bound
    }
}

/// Exact law of the host relation, by sweeping the offset over the cells
/// between breakpoints.
pub fn enumerate_pathwidth_support(
    pc: &PathOfCliques,
    r: f64,
) -> Result<(ExplicitDistribution, SupportReport), SamplingError> {
    let s = PathwidthSampler::new(pc, r)?;
    let (forward_breakpoints, fwd) = PathwidthSampler::residues_of(&s.forward, r);
    let (backward_breakpoints, bwd) = PathwidthSampler::residues_of(&s.backward, r);
    let mut points = fwd.clone();
    points.extend(&bwd);
    let grid = cells(&points, r);
    let mut mass: HashMap<Quasipartition, f64> = HashMap::new();
    let mut order = Vec::new();
    for &(lo, hi) in &grid {
        let q = s.run((lo + hi) / 2.0).host;
        let slot = mass.entry(q.clone()).or_insert_with(|| {
            order.push(q);
            0.0
        });
        *slot += (hi - lo) / r;
    }
    let atoms = order
        .into_iter()
        .map(|q| {
            let p = mass[&q];
            (q, p)
        })
        .collect();
    let k = pc.clique_size();
    let report = SupportReport {
        forward_breakpoints,
        backward_breakpoints,
        forward_total: fwd.len(),
        backward_total: bwd.len(),
        bound: pc.host().vertex_count().saturating_sub(1) * k * k,
        cells: grid.len(),
    };
    Ok((ExplicitDistribution::new(atoms)?, report))
}

/// One draw of the pathwidth sampler, projected to source vertices.
pub fn sample_pathwidth<R: Rng + ?Sized>(
    pc: &PathOfCliques,
    r: f64,
    rng: &mut R,
) -> Result<Quasipartition, SamplingError> {
    Ok(PathwidthSampler::new(pc, r)?.sample(rng).project(pc))
}

/// Smallest `alpha` in `0..=max_alpha` such that every member of the exact
/// support with `r = delta / 2^(alpha·k²)` is `delta`-bounded on the host.
pub fn calibrate_alpha(pc: &PathOfCliques, delta: f64, max_alpha: u32) -> Result<Option<u32>, SamplingError> {
    let k = pc.clique_size() as i32;
    let dist = shortest_path_quasimetric(pc.host());
    for alpha in 0..=max_alpha {
        let r = delta / 2f64.powi(alpha as i32 * k * k);
        let (law, _) = enumerate_pathwidth_support(pc, r)?;
        let mut ok = true;
        for (q, _) in law.support() {
            ok &= bound_check(q, &dist, delta)?.bounded;
        }
        if ok {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}
