use std::collections::{BTreeSet, HashMap};

use qcut_core::{shortest_path_quasimetric, Quasipartition, WeightedDigraph};
use rand::Rng;

use crate::threshold::{cells, crosses, crosses_once, dedup_sorted, residues};
use crate::{ExplicitDistribution, SamplingError};

/// Ring edge `pos → pos+1` (clockwise) or `pos+1 → pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingEdge {
    pub pos: usize,
    pub clockwise: bool,
}

/// Edge on a meet-point path with its spans from the arc end and to the meet-point.
type ArcSpan = (RingEdge, (f64, f64), (f64, f64));

/// Short-pair arcs and the meet-points of their end vertices, as ring positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Arcs {
    /// Source set in clockwise order.
    pub sources: Vec<usize>,
    /// Sink set in clockwise order.
    pub sinks: Vec<usize>,
    pub first: usize,
    pub last: usize,
    pub first_meet: usize,
    pub last_meet: usize,
}

/// Directed cycle with ring distances, possibly subdivided at meet-points.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleInstance {
    /// Ring position → source vertex; `None` for subdivision vertices.
    ring: Vec<Option<usize>>,
    position: Vec<usize>,
    cw: Vec<f64>,
    ccw: Vec<f64>,
    cw_prefix: Vec<f64>,
    ccw_prefix: Vec<f64>,
    delta: f64,
    arcs: Option<Arcs>,
}

/// Where a meet-point falls on the unsubdivided ring.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Meet {
    Vertex(usize),
    Inside { edge: usize, lambda: f64 },
}

fn prefix(w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    for &x in w {
        out.push(out.last().unwrap() + x);
    }
    out
}

fn ring_order(g: &WeightedDigraph) -> Result<Vec<usize>, SamplingError> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(SamplingError::NotACycle(format!("{n} vertices")));
    }
    if let Some(e) = g.edges().iter().find(|e| e.tail == e.head) {
        return Err(SamplingError::NotACycle(format!("loop at {}", e.tail)));
    }
    let nb = g.undirected_neighbors();
    if let Some(v) = (0..n).find(|&v| nb[v].len() != 2) {
        return Err(SamplingError::NotACycle(format!("vertex {v} has {} neighbours", nb[v].len())));
    }
    let mut order = vec![0, nb[0][0].min(nb[0][1])];
    while order.len() < n {
        let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
        let next = if nb[cur][0] == prev { nb[cur][1] } else { nb[cur][0] };
        if next == 0 {
            return Err(SamplingError::NotACycle("underlying graph is disconnected".into()));
        }
        order.push(next);
    }
    Ok(order)
}

/// Arc start of a cyclic membership mask, or `None` if not one arc.
fn arc_start(mask: &[bool]) -> Option<usize> {
    let n = mask.len();
    let starts: Vec<usize> = (0..n).filter(|&i| mask[i] && !mask[(i + n - 1) % n]).collect();
    match starts.as_slice() {
        [s] => Some(*s),
        _ => None,
    }
}

impl CycleInstance {
    pub fn new(g: &WeightedDigraph) -> Result<Self, SamplingError> {
        let order = ring_order(g)?;
        let n = order.len();
        let dist = shortest_path_quasimetric(g);
        for u in 0..n {
            for v in 0..n {
                if !dist.get(u, v).is_finite() {
                    return Err(SamplingError::Unreachable(u, v));
                }
            }
        }
        let cw: Vec<f64> = (0..n).map(|i| dist.get(order[i], order[(i + 1) % n])).collect();
        let ccw: Vec<f64> = (0..n).map(|i| dist.get(order[(i + 1) % n], order[i])).collect();
        let mut inst = Self::from_ring(order.iter().map(|&v| Some(v)).collect(), cw, ccw, dist.diameter());
        let Some((first, last, sources, sinks)) = inst.short_pair_arcs()? else {
            return Ok(inst);
        };
        let meets = [inst.meet(first), inst.meet(last)];
        let mut inside: Vec<(usize, f64)> = meets
            .iter()
            .filter_map(|m| match *m {
                Meet::Inside { edge, lambda } => Some((edge, lambda)),
                Meet::Vertex(_) => None,
            })
            .collect();
        inside.sort_by(|a, b| a.partial_cmp(b).unwrap());
        inside.dedup();
        let mut ring = Vec::new();
        let (mut cw2, mut ccw2) = (Vec::new(), Vec::new());
        let mut new_pos = vec![0; n];
        let mut aux_pos = HashMap::new();
        for i in 0..n {
            new_pos[i] = ring.len();
            ring.push(inst.ring[i]);
            let mut at = 0.0;
            for (j, &(_, lambda)) in inside.iter().enumerate().filter(|(_, p)| p.0 == i) {
                cw2.push((lambda - at) * inst.cw[i]);
                ccw2.push((lambda - at) * inst.ccw[i]);
                at = lambda;
                aux_pos.insert(j, ring.len());
                ring.push(None);
            }
            cw2.push((1.0 - at) * inst.cw[i]);
            ccw2.push((1.0 - at) * inst.ccw[i]);
        }
        let place = |m: Meet| match m {
            Meet::Vertex(p) => new_pos[p],
            Meet::Inside { edge, lambda } => {
                let j = inside.iter().position(|&p| p == (edge, lambda)).unwrap();
                aux_pos[&j]
            }
        };
        let arcs = Arcs {
            sources,
            sinks,
            first: new_pos[first],
            last: new_pos[last],
            first_meet: place(meets[0]),
            last_meet: place(meets[1]),
        };
        let delta = inst.delta;
        inst = Self::from_ring(ring, cw2, ccw2, delta);
        inst.arcs = Some(arcs);
        Ok(inst)
    }

    fn from_ring(ring: Vec<Option<usize>>, cw: Vec<f64>, ccw: Vec<f64>, delta: f64) -> Self {
        let mut position = vec![0; ring.iter().flatten().count()];
        for (p, v) in ring.iter().enumerate() {
            if let Some(v) = v {
                position[*v] = p;
            }
        }
        Self {
            cw_prefix: prefix(&cw),
            ccw_prefix: prefix(&ccw),
            ring,
            position,
            cw,
            ccw,
            delta,
            arcs: None,
        }
    }

    /// Short pairs `u ≠ v` with both ring distances below a tenth of the
    /// diameter; returns the arc ends and the source and sink sets.
    #[allow(clippy::type_complexity)]
    fn short_pair_arcs(&self) -> Result<Option<(usize, usize, Vec<usize>, Vec<usize>)>, SamplingError> {
        let n = self.len();
        let cut = self.delta / 10.0;
        let (mut src, mut snk) = (vec![false; n], vec![false; n]);
        for u in 0..n {
            for v in 0..n {
                if u != v && self.cw_dist(u, v) < cut && self.ccw_dist(u, v) < cut {
                    src[u] = true;
                    snk[v] = true;
                }
            }
        }
        if !src.contains(&true) {
            return Ok(None);
        }
        if let Some(p) = (0..n).find(|&p| src[p] && snk[p]) {
            return Err(SamplingError::Overlap(self.ring[p].unwrap()));
        }
        let first = arc_start(&src).ok_or(SamplingError::NotConsecutive("source"))?;
        let sink_first = arc_start(&snk).ok_or(SamplingError::NotConsecutive("sink"))?;
        let walk = |start: usize, mask: &[bool]| -> Vec<usize> {
            (0..n)
                .map(|s| (start + s) % n)
                .take_while(|&p| mask[p])
                .collect()
        };
        let a = walk(first, &src);
        let b = walk(sink_first, &snk);
        let last = *a.last().unwrap();
        let name = |v: Vec<usize>| v.into_iter().map(|p| self.ring[p].unwrap()).collect();
        Ok(Some((first, last, name(a), name(b))))
    }

    /// Point other than `a` equidistant from `a` both ways round.
    fn meet(&self, a: usize) -> Meet {
        let n = self.len();
        let total_ccw = *self.ccw_prefix.last().unwrap();
        let mut f_prev = -total_ccw;
        let mut acc = 0.0;
        for s in 1..=n {
            let e = (a + s - 1) % n;
            acc += self.cw[e] + self.ccw[e];
            let f = acc - total_ccw;
            if qcut_core::approx_eq(f, 0.0) {
                return Meet::Vertex((a + s) % n);
            }
            if f > 0.0 {
                return Meet::Inside {
                    edge: e,
                    lambda: -f_prev / (self.cw[e] + self.ccw[e]),
                };
            }
            f_prev = f;
        }
        Meet::Vertex(a)
    }

    /// Ring positions including subdivision vertices.
    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.position.len()
    }

    pub fn source_at(&self, pos: usize) -> Option<usize> {
        self.ring[pos]
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn diameter(&self) -> f64 {
        self.delta
    }

    pub fn arcs(&self) -> Option<&Arcs> {
        self.arcs.as_ref()
    }

    pub fn weight(&self, e: RingEdge) -> f64 {
        if e.clockwise {
            self.cw[e.pos]
        } else {
            self.ccw[e.pos]
        }
    }

    /// `(tail, head)` ring positions.
    pub fn ends(&self, e: RingEdge) -> (usize, usize) {
        let next = (e.pos + 1) % self.len();
        if e.clockwise {
            (e.pos, next)
        } else {
            (next, e.pos)
        }
    }

    /// Clockwise length from `a` to `b`.
    pub fn cw_dist(&self, a: usize, b: usize) -> f64 {
        let p = &self.cw_prefix;
        if a <= b {
            p[b] - p[a]
        } else {
            p[self.len()] - p[a] + p[b]
        }
    }

    /// Counter-clockwise length from `a` to `b`.
    pub fn ccw_dist(&self, a: usize, b: usize) -> f64 {
        let p = &self.ccw_prefix;
        if b <= a {
            p[a] - p[b]
        } else {
            p[self.len()] - p[b] + p[a]
        }
    }

    /// Edges cut by the rotation thresholds at offset `z1`.
    fn rotation_cuts(&self, z1: f64) -> Vec<RingEdge> {
        let step = self.delta / 10.0;
        let mut out = Vec::new();
        for (e, (lo, hi)) in self.rotation_spans() {
            if crosses(lo, hi, z1, step) {
                out.push(e);
            }
        }
        out
    }

    /// Distance span from the start vertex for every ring edge; a wrapping
    /// edge ends at the full rotation length.
    fn rotation_spans(&self) -> Vec<(RingEdge, (f64, f64))> {
        let n = self.len();
        let mut out = Vec::with_capacity(2 * n);
        for pos in 0..n {
            let lo = self.cw_prefix[pos];
            out.push((RingEdge { pos, clockwise: true }, (lo, lo + self.cw[pos])));
            let lo = self.ccw_dist(0, (pos + 1) % n);
            out.push((RingEdge { pos, clockwise: false }, (lo, lo + self.ccw[pos])));
        }
        out
    }

    /// Edges of the two paths from `a` to `b`, with `(u,v)` spans measured
    /// from `a` and to `b`.
    fn arc_spans(&self, a: usize, b: usize) -> Vec<ArcSpan> {
        let n = self.len();
        let mut out = Vec::new();
        let mut p = a;
        while p != b {
            let e = RingEdge { pos: p, clockwise: true };
            let (u, v) = self.ends(e);
            out.push((e, (self.cw_dist(a, u), self.cw_dist(a, v)), (self.cw_dist(v, b), self.cw_dist(u, b))));
            p = v;
        }
        let mut p = a;
        while p != b {
            let e = RingEdge {
                pos: (p + n - 1) % n,
                clockwise: false,
            };
            let (u, v) = self.ends(e);
            out.push((e, (self.ccw_dist(a, u), self.ccw_dist(a, v)), (self.ccw_dist(v, b), self.ccw_dist(u, b))));
            p = v;
        }
        out
    }

    fn all_arc_spans(&self) -> Vec<ArcSpan> {
        match &self.arcs {
            None => Vec::new(),
            Some(a) => {
                let mut out = self.arc_spans(a.first, a.first_meet);
                out.extend(self.arc_spans(a.last, a.last_meet));
                out
            }
        }
    }

    /// Edges cut by the single threshold `z3` on the meet-point paths.
    fn arc_cuts(&self, z3: f64) -> Vec<RingEdge> {
        self.all_arc_spans()
            .into_iter()
            .filter(|(_, from, to)| crosses_once(from.0, from.1, z3) || crosses_once(to.0, to.1, z3))
            .map(|(e, _, _)| e)
            .collect()
    }

    /// Removed edges for offsets `z1 ∈ [0, Δ/10)` and `z3 ∈ [0, Δ)`.
    pub fn removed(&self, z1: f64, z3: f64) -> Vec<RingEdge> {
        let mut set: BTreeSet<RingEdge> = self.rotation_cuts(z1).into_iter().collect();
        set.extend(self.arc_cuts(z3));
        set.into_iter().collect()
    }

    /// Closure of the ring minus `removed`, on source vertices.
    pub fn closure_without(&self, removed: &[RingEdge]) -> Quasipartition {
        let n = self.len();
        let gone: BTreeSet<RingEdge> = removed.iter().copied().collect();
        let kept = (0..n)
            .flat_map(|pos| [true, false].map(|clockwise| RingEdge { pos, clockwise }))
            .filter(|e| !gone.contains(e))
            .map(|e| self.ends(e));
        Quasipartition::from_pairs(n, kept).restrict(&self.position)
    }

    /// Draws `z1`, an unused `z2`, then `z3`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<RingEdge>, Quasipartition) {
        let z1 = rng.gen::<f64>() * self.delta / 10.0;
        let _z2 = rng.gen::<f64>() * self.delta / 10.0;
        let z3 = rng.gen::<f64>() * self.delta;
        let removed = self.removed(z1, z3);
        let q = self.closure_without(&removed);
        (removed, q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleAtom {
    pub removed: Vec<RingEdge>,
    pub quasipartition: Quasipartition,
    pub mass: f64,
}

/// Exact law of the cycle sampler, one atom per distinct removal set.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLaw {
    pub atoms: Vec<CycleAtom>,
    pub rotation_cells: usize,
    pub arc_cells: usize,
}

impl CycleLaw {
    pub fn distribution(&self) -> Result<ExplicitDistribution, SamplingError> {
        ExplicitDistribution::new(
            self.atoms
                .iter()
                .map(|a| (a.quasipartition.clone(), a.mass))
                .collect(),
        )
    }
}

/// Enumerates the product of offset cells for `z1` and `z3`.
pub fn enumerate_cycle_law(c: &CycleInstance) -> CycleLaw {
    let step = c.delta / 10.0;
    let spans = c.rotation_spans();
    let r1 = residues(spans.iter().flat_map(|(_, (a, b))| [*a, *b]), step);
    let mut r3: Vec<f64> = c
        .all_arc_spans()
        .iter()
        .flat_map(|(_, f, t)| [f.0, f.1, t.0, t.1])
        .collect();
    dedup_sorted(&mut r3);
    let g1 = cells(&r1, step);
    let g3 = cells(&r3, c.delta);
    let cut1: Vec<Vec<RingEdge>> = g1.iter().map(|(lo, hi)| c.rotation_cuts((lo + hi) / 2.0)).collect();
    let cut3: Vec<Vec<RingEdge>> = g3.iter().map(|(lo, hi)| c.arc_cuts((lo + hi) / 2.0)).collect();
    let mut index: HashMap<Vec<RingEdge>, usize> = HashMap::new();
    let mut atoms: Vec<CycleAtom> = Vec::new();
    for (i, (lo1, hi1)) in g1.iter().enumerate() {
        for (j, (lo3, hi3)) in g3.iter().enumerate() {
            let mass = (hi1 - lo1) / step * (hi3 - lo3) / c.delta;
            let mut set: BTreeSet<RingEdge> = cut1[i].iter().copied().collect();
            set.extend(&cut3[j]);
            let removed: Vec<RingEdge> = set.into_iter().collect();
            match index.get(&removed) {
                Some(&k) => atoms[k].mass += mass,
                None => {
                    index.insert(removed.clone(), atoms.len());
                    atoms.push(CycleAtom {
                        quasipartition: c.closure_without(&removed),
                        removed,
                        mass,
                    });
                }
            }
        }
    }
    CycleLaw {
        atoms,
        rotation_cells: g1.len(),
        arc_cells: g3.len(),
    }
}

pub fn sample_cycle<R: Rng + ?Sized>(g: &WeightedDigraph, rng: &mut R) -> Result<Quasipartition, SamplingError> {
    Ok(CycleInstance::new(g)?.sample(rng).1)
}
