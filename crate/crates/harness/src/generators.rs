//! Seeded instance families, each emitted with a structural certificate and
//! checked by code that does not share the generator's bookkeeping.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use qcut_core::WeightedDigraph;
use qcut_decompositions::PathDecomposition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kpr::{kpr_generalized, Orientation, PickPolicy};
use crate::HarnessError;

/// Rounds for which the counterexample must stay unbounded.
pub const KPR_ROUNDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    SeriesParallel,
    Pathwidth(usize),
    Cycle,
    Tree,
    KprCounterexample,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::SeriesParallel => write!(f, "series-parallel"),
            Family::Pathwidth(k) => write!(f, "pathwidth-{k}"),
            Family::Cycle => write!(f, "cycle"),
            Family::Tree => write!(f, "tree"),
            Family::KprCounterexample => write!(f, "kpr-counterexample"),
        }
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "series-parallel" => Ok(Family::SeriesParallel),
            "cycle" => Ok(Family::Cycle),
            "tree" => Ok(Family::Tree),
            "kpr-counterexample" => Ok(Family::KprCounterexample),
            _ => s
                .strip_prefix("pathwidth-")
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .map(Family::Pathwidth)
                .ok_or_else(|| HarnessError::BadSpec(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub weights: (f64, f64),
    pub capacities: (f64, f64),
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            weights: (1.0, 10.0),
            capacities: (1.0, 1.0),
            seed,
        }
    }

    pub fn with_weights(mut self, lo: f64, hi: f64) -> Self {
        self.weights = (lo, hi);
        self
    }

    pub fn with_capacities(mut self, lo: f64, hi: f64) -> Self {
        self.capacities = (lo, hi);
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let min_n = match self.family {
            Family::Cycle => 3,
            Family::KprCounterexample => 5,
            _ => 2,
        };
        if self.n < min_n {
            return Err(HarnessError::BadSpec(format!("{} needs n ≥ {min_n}, got {}", self.family, self.n)));
        }
        for (what, (lo, hi)) in [("weight", self.weights), ("capacity", self.capacities)] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(HarnessError::BadSpec(format!("{what} range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// One step of a series-parallel build: vertex `vertex` joins `anchors`,
/// which are adjacent when there are two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildStep {
    pub vertex: usize,
    pub anchors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Certificate {
    /// Starts from the edge {0, 1}.
    BuildTrace(Vec<BuildStep>),
    Path(#[serde(serialize_with = "serialize_bags")] PathDecomposition),
    /// Vertices in ring order.
    Cycle(Vec<usize>),
    /// `parent[0]` is `None`.
    Tree(Vec<Option<usize>>),
    Counterexample {
        #[serde(serialize_with = "serialize_bags")]
        bags: PathDecomposition,
        picks: Vec<usize>,
        radius: f64,
    },
}

fn serialize_bags<S: serde::Serializer>(pd: &PathDecomposition, s: S) -> Result<S::Ok, S::Error> {
    pd.bags.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generated {
    #[serde(skip)]
    pub graph: WeightedDigraph,
    pub certificate: Certificate,
    pub spec: GeneratorSpec,
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Adds `a→b` and `b→a` with independent weights and capacities.
fn link(g: &mut WeightedDigraph, a: usize, b: usize, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<(), HarnessError> {
    for (t, h) in [(a, b), (b, a)] {
        let w = draw(rng, spec.weights);
        let c = draw(rng, spec.capacities);
        g.add_edge_with_capacity(t, h, w, c)?;
    }
    Ok(())
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut g = WeightedDigraph::new(n);
    let certificate = match spec.family {
        Family::SeriesParallel => {
            link(&mut g, 0, 1, spec, &mut rng)?;
            let mut sides = vec![(0, 1)];
            let mut trace = Vec::with_capacity(n - 2);
            for v in 2..n {
                let (a, b) = sides[rng.gen_range(0..sides.len())];
                let anchors = if rng.gen_bool(0.75) { vec![a, b] } else { vec![a] };
                for &u in &anchors {
                    link(&mut g, u, v, spec, &mut rng)?;
                    sides.push((u, v));
                }
                trace.push(BuildStep { vertex: v, anchors });
            }
            Certificate::BuildTrace(trace)
        }
        Family::Pathwidth(k) => {
            for v in 1..n {
                let lo = v.saturating_sub(k);
                let first = rng.gen_range(lo..v);
                for u in lo..v {
                    if u == first || rng.gen_bool(0.4) {
                        link(&mut g, u, v, spec, &mut rng)?;
                    }
                }
            }
            let bags = (0..n.saturating_sub(k).max(1)).map(|i| (i..(i + k + 1).min(n)).collect()).collect();
            Certificate::Path(PathDecomposition { bags })
        }
        Family::Cycle => {
            for v in 0..n {
                link(&mut g, v, (v + 1) % n, spec, &mut rng)?;
            }
            Certificate::Cycle((0..n).collect())
        }
        Family::Tree => {
            let mut parent = vec![None];
            for v in 1..n {
                let p = rng.gen_range(0..v);
                link(&mut g, p, v, spec, &mut rng)?;
                parent.push(Some(p));
            }
            Certificate::Tree(parent)
        }
        Family::KprCounterexample => {
            // forward edges p→p+1 and p→p+2 at the top weight, every backward
            // edge free: each adversarial centre then chops only the edges into
            // the vertex just above it
            let w = spec.weights.1;
            for v in 0..n - 1 {
                g.add_edge_with_capacity(v, v + 1, w, draw(&mut rng, spec.capacities))?;
                g.add_edge_with_capacity(v + 1, v, 0.0, draw(&mut rng, spec.capacities))?;
                if v + 2 < n {
                    g.add_edge_with_capacity(v, v + 2, 2.0 * w, draw(&mut rng, spec.capacities))?;
                    g.add_edge_with_capacity(v + 2, v, 0.0, draw(&mut rng, spec.capacities))?;
                }
            }
            let bags = PathDecomposition {
                bags: (0..n - 2).map(|i| vec![i, i + 1, i + 2]).collect(),
            };
            let picks = (0..n).rev().collect();
            Certificate::Counterexample { bags, picks, radius: w }
        }
    };
    let out = Generated {
        graph: g,
        certificate,
        spec: spec.clone(),
    };
    check_certificate(&out.graph, &out.certificate)?;
    Ok(out)
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::BadCertificate(msg.into())
}

/// Unordered vertex pairs joined by at least one edge.
fn undirected(g: &WeightedDigraph) -> BTreeSet<(usize, usize)> {
    g.edges().iter().map(|e| (e.tail.min(e.head), e.tail.max(e.head))).collect()
}

fn check_bidirected(g: &WeightedDigraph) -> Result<(), HarnessError> {
    let arcs: BTreeSet<(usize, usize)> = g.edges().iter().map(|e| (e.tail, e.head)).collect();
    match arcs.iter().find(|(t, h)| !arcs.contains(&(*h, *t))) {
        Some((t, h)) => Err(bad(format!("edge {t}->{h} has no reverse"))),
        None => Ok(()),
    }
}

/// Vertex cover, edge cover and contiguity of bag occurrences.
pub fn check_path_decomposition(g: &WeightedDigraph, pd: &PathDecomposition, width: usize) -> Result<(), HarnessError> {
    let n = g.vertex_count();
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0; n];
    for (i, bag) in pd.bags.iter().enumerate() {
        if bag.len() > width + 1 {
            return Err(bad(format!("bag {i} has {} vertices, width {width}", bag.len())));
        }
        for &v in bag {
            if v >= n {
                return Err(bad(format!("bag {i} names vertex {v}")));
            }
            if first[v] != usize::MAX && last[v] + 1 != i {
                return Err(bad(format!("vertex {v} occurs in non-adjacent bags")));
            }
            first[v] = first[v].min(i);
            last[v] = i;
        }
    }
    if let Some(v) = (0..n).find(|&v| first[v] == usize::MAX) {
        return Err(bad(format!("vertex {v} in no bag")));
    }
    for (a, b) in undirected(g) {
        if first[a].max(first[b]) > last[a].min(last[b]) {
            return Err(bad(format!("edge {{{a},{b}}} in no bag")));
        }
    }
    Ok(())
}

pub fn check_certificate(g: &WeightedDigraph, cert: &Certificate) -> Result<(), HarnessError> {
    let n = g.vertex_count();
    match cert {
        Certificate::BuildTrace(trace) => {
            check_bidirected(g)?;
            let mut built = BTreeSet::from([(0, 1)]);
            for (i, step) in trace.iter().enumerate() {
                if step.vertex != i + 2 || step.anchors.is_empty() || step.anchors.len() > 2 {
                    return Err(bad(format!("step {i} malformed")));
                }
                if step.anchors.iter().any(|&a| a >= step.vertex) {
                    return Err(bad(format!("step {i} anchors a later vertex")));
                }
                if let [a, b] = step.anchors[..] {
                    if !built.contains(&(a.min(b), a.max(b))) {
                        return Err(bad(format!("step {i} anchors non-adjacent {a},{b}")));
                    }
                }
                for &a in &step.anchors {
                    built.insert((a, step.vertex));
                }
            }
            if trace.len() + 2 != n || built != undirected(g) {
                return Err(bad("trace does not rebuild the graph"));
            }
            Ok(())
        }
        Certificate::Path(pd) => {
            check_bidirected(g)?;
            check_path_decomposition(g, pd, pd.bags.iter().map(Vec::len).max().unwrap_or(1) - 1)
        }
        Certificate::Cycle(order) => {
            check_bidirected(g)?;
            let distinct: BTreeSet<usize> = order.iter().copied().collect();
            if order.len() != n || distinct.len() != n || order.iter().any(|&v| v >= n) {
                return Err(bad("ring order is not a permutation"));
            }
            let ring: BTreeSet<(usize, usize)> = (0..n)
                .map(|i| {
                    let (a, b) = (order[i], order[(i + 1) % n]);
                    (a.min(b), a.max(b))
                })
                .collect();
            if ring != undirected(g) || g.edge_count() != 2 * n {
                return Err(bad("edges do not form the ring"));
            }
            Ok(())
        }
        Certificate::Tree(parent) => {
            check_bidirected(g)?;
            if parent.len() != n || parent.first() != Some(&None) {
                return Err(bad("parent vector malformed"));
            }
            let mut links = BTreeSet::new();
            for (v, p) in parent.iter().enumerate().skip(1) {
                match p {
                    Some(p) if *p < v => {
                        links.insert((*p, v));
                    }
                    _ => return Err(bad(format!("vertex {v} has no earlier parent"))),
                }
            }
            if links != undirected(g) || g.edge_count() != 2 * (n - 1) {
                return Err(bad("edges do not match the parent vector"));
            }
            Ok(())
        }
        Certificate::Counterexample { bags, picks, radius } => {
            check_bidirected(g)?;
            check_path_decomposition(g, bags, 2)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let out = kpr_generalized(g, *radius, &PickPolicy::Sequence(picks.clone()), Orientation::Directed, KPR_ROUNDS, &mut rng)?;
            if out.bounded() {
                return Err(bad(format!("{KPR_ROUNDS} rounds already give an r-bounded result")));
            }
            Ok(())
        }
    }
}
