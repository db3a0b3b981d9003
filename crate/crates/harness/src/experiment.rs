//! Key-value experiment configs and the runs behind them. Each instance
//! gets its own generator seed and sampling streams, so reports are
//! reproducible apart from timings.

use std::str::FromStr;
use std::time::Instant;

use qcut_core::{bound_check, shortest_path_quasimetric, QuasimetricSpace, WeightedDigraph, TOL};
use qcut_cuts::{
    brute_force_multicut, brute_force_sparsest_cut, pathwidth_law, round_multicut, round_sparsest_cut, solve_multicut_lp,
    solve_sparsest_cut_lp, support_beta, empirical_law, CutInstance, FractionalSolution, Tw2Host, DEFAULT_EPS,
    DEFAULT_MAX_ALPHA, DEFAULT_SAMPLES, MULTICUT_EDGE_LIMIT, SPARSEST_VERTEX_LIMIT,
};
use qcut_decompositions::{embed_path_of_cliques, PathDecomposition};
use qcut_sampling::{
    calibrate_alpha, enumerate_cycle_law, enumerate_pathwidth_support, stream, tree_distribution, CycleInstance,
    PathwidthSampler, QuasipartitionDistribution, Tw2Sampler,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generators::{generate, Certificate, Family, Generated, GeneratorSpec, KPR_ROUNDS};
use crate::kpr::{kpr_generalized, Orientation, PickPolicy};
use crate::HarnessError;

/// Largest sparsest-cut rounding ratio accepted on the shipped corpus.
pub const SPARSEST_RATIO_LIMIT: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Tw2,
    Pathwidth,
    Cycle,
    Tree,
    Multicut,
    Sparsest,
    Kpr,
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tw2" => Algorithm::Tw2,
            "pathwidth" => Algorithm::Pathwidth,
            "cycle" => Algorithm::Cycle,
            "tree" => Algorithm::Tree,
            "multicut" => Algorithm::Multicut,
            "sparsest" => Algorithm::Sparsest,
            "kpr" => Algorithm::Kpr,
            _ => return Err(format!("unknown algorithm {s:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub instances: usize,
    pub algorithm: Algorithm,
    /// Absolute radius; defaults to a quarter of the diameter.
    pub radius: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub weights: (f64, f64),
    pub capacities: (f64, f64),
    pub eps: f64,
    /// Terminal pairs per multicut instance.
    pub pairs: usize,
    /// Chopping rounds for `kpr` on families other than the counterexample.
    pub rounds: usize,
    pub orientation: Orientation,
}

fn range(value: &str) -> Option<(f64, f64)> {
    let mut it = value.split_whitespace().map(str::parse::<f64>);
    let lo = it.next()?.ok()?;
    let hi = match it.next() {
        Some(v) => v.ok()?,
        None => lo,
    };
    it.next().is_none().then_some((lo, hi))
}

impl FromStr for ExperimentConfig {
    type Err = HarnessError;

    /// Lines `key = value`; `#` starts a comment. `family`, `n` and
    /// `algorithm` are required.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (mut family, mut n, mut algorithm) = (None, None, None);
        let mut cfg = ExperimentConfig {
            family: Family::Cycle,
            n: 0,
            instances: 1,
            algorithm: Algorithm::Cycle,
            radius: None,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            weights: (1.0, 10.0),
            capacities: (1.0, 1.0),
            eps: DEFAULT_EPS,
            pairs: 3,
            rounds: KPR_ROUNDS,
            orientation: Orientation::Directed,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| HarnessError::Config { line, msg };
            let (key, value) = body.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || err(format!("bad value {value:?} for {key}"));
            match key {
                "family" => family = Some(value.parse::<Family>().map_err(|e| err(e.to_string()))?),
                "n" => n = Some(value.parse().map_err(|_| bad())?),
                "algorithm" => algorithm = Some(value.parse::<Algorithm>().map_err(err)?),
                "instances" => cfg.instances = value.parse().map_err(|_| bad())?,
                "radius" => cfg.radius = Some(value.parse().map_err(|_| bad())?),
                "samples" => cfg.samples = value.parse().map_err(|_| bad())?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                "weights" => cfg.weights = range(value).ok_or_else(bad)?,
                "capacities" => cfg.capacities = range(value).ok_or_else(bad)?,
                "eps" => cfg.eps = value.parse().map_err(|_| bad())?,
                "pairs" => cfg.pairs = value.parse().map_err(|_| bad())?,
                "rounds" => cfg.rounds = value.parse().map_err(|_| bad())?,
                "orientation" => {
                    cfg.orientation = match value {
                        "directed" => Orientation::Directed,
                        "undirected" => Orientation::Undirected,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        let missing = |k: &str| HarnessError::Config {
            line: 0,
            msg: format!("missing {k}"),
        };
        cfg.family = family.ok_or_else(|| missing("family"))?;
        cfg.n = n.ok_or_else(|| missing("n"))?;
        cfg.algorithm = algorithm.ok_or_else(|| missing("algorithm"))?;
        if cfg.instances == 0 || cfg.samples == 0 {
            return Err(missing("a positive instance and sample count"));
        }
        if !(cfg.eps > 0.0 && cfg.eps < 1.0) || cfg.radius.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
            return Err(HarnessError::Config {
                line: 0,
                msg: "eps must lie in (0, 1) and radius must be positive".into(),
            });
        }
        Ok(cfg)
    }
}

impl ExperimentConfig {
    /// Generator spec for instance `index`.
    pub fn spec(&self, index: usize) -> GeneratorSpec {
        GeneratorSpec::new(self.family, self.n, self.seed.wrapping_add(index as u64))
            .with_weights(self.weights.0, self.weights.1)
            .with_capacities(self.capacities.0, self.capacities.1)
    }
}

/// One verdict: `value` compared against `bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub bound: f64,
}

impl Check {
    pub fn new(name: &str, pass: bool, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            pass,
            value,
            bound,
        }
    }

    /// Passes when `value ≤ bound` up to [`TOL`].
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value <= bound + TOL, value, bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub checks: Vec<Check>,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceReport>,
    pub pass: bool,
    pub millis: f64,
}

/// `bound` plus four binomial standard errors at `samples` draws.
pub fn with_standard_errors(bound: f64, samples: usize) -> f64 {
    let p = bound.clamp(0.0, 1.0);
    bound + 4.0 * (p * (1.0 - p) / samples as f64).sqrt()
}

fn default_radius(cfg: &ExperimentConfig, d: &QuasimetricSpace) -> f64 {
    cfg.radius.unwrap_or(d.diameter() / 4.0)
}

/// Path decomposition carried by the certificate, if any.
pub fn certificate_decomposition(gen: &Generated) -> Option<&PathDecomposition> {
    match &gen.certificate {
        Certificate::Path(pd) => Some(pd),
        Certificate::Counterexample { bags, .. } => Some(bags),
        _ => None,
    }
}

/// Runs `f` on the rounding law over LP lengths: the exact pathwidth law
/// when a path decomposition is certified, treewidth-2 draws otherwise.
pub fn with_rounding_law<T>(
    pd: Option<&PathDecomposition>,
    lengths: &WeightedDigraph,
    bound: f64,
    seed: u64,
    samples: usize,
    f: impl FnOnce(&QuasipartitionDistribution) -> Result<T, HarnessError>,
) -> Result<T, HarnessError> {
    match pd {
        Some(pd) => {
            let law = pathwidth_law(lengths, pd, bound, DEFAULT_MAX_ALPHA)?;
            f(&QuasipartitionDistribution::Explicit(law.law))
        }
        None => {
            let host = Tw2Host::new(lengths)?;
            let dist = host.distribution(bound, seed, samples)?;
            f(&dist)
        }
    }
}

/// `count` distinct ordered pairs with unit demand.
pub fn random_pairs<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<(usize, usize, f64)> {
    let count = count.min(n * (n - 1));
    let mut out: Vec<(usize, usize, f64)> = Vec::with_capacity(count);
    while out.len() < count {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if s != t && !out.iter().any(|p| (p.0, p.1) == (s, t)) {
            out.push((s, t, 1.0));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticutOutcome {
    pub lp: f64,
    pub x: Vec<f64>,
    pub edges: Vec<usize>,
    pub cost: f64,
    pub valid: bool,
    pub beta: f64,
    pub optimum: Option<f64>,
}

pub fn run_multicut(pd: Option<&PathDecomposition>, inst: &CutInstance, eps: f64, seed: u64, samples: usize) -> Result<MulticutOutcome, HarnessError> {
    let frac = solve_multicut_lp(inst, eps)?;
    let bound = 1.0 - eps;
    let (rounded, beta) = with_rounding_law(pd, &inst.reweighted(&frac.x), bound, seed, samples, |dist| {
        let r = round_multicut(inst, &frac, dist, eps)?;
        let beta = support_beta(&empirical_law(dist)?, &frac.dist, bound);
        Ok((r, beta))
    })?;
    let optimum = (inst.graph().edge_count() <= MULTICUT_EDGE_LIMIT)
        .then(|| brute_force_multicut(inst).map(|s| s.cost))
        .transpose()?;
    Ok(MulticutOutcome {
        lp: frac.objective,
        valid: rounded.best.separates_all(inst),
        edges: rounded.best.edges,
        cost: rounded.best.cost,
        x: frac.x,
        beta,
        optimum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsestOutcome {
    pub lp: f64,
    pub x: Vec<f64>,
    pub edges: Vec<usize>,
    pub cost: f64,
    pub demand: f64,
    pub sparsity: Option<f64>,
    pub optimum: Option<f64>,
}

/// Boundedness target for sparsest-cut rounding on `n` vertices.
pub fn sparsest_bound(n: usize) -> f64 {
    1.0 / (4.0 * (n * n) as f64)
}

pub fn run_sparsest(pd: Option<&PathDecomposition>, inst: &CutInstance, eps: f64, seed: u64, samples: usize) -> Result<SparsestOutcome, HarnessError> {
    let frac: FractionalSolution = solve_sparsest_cut_lp(inst, eps)?;
    let bound = sparsest_bound(inst.vertex_count());
    let rounded = with_rounding_law(pd, &inst.reweighted(&frac.x), bound, seed, samples, |dist| {
        Ok(round_sparsest_cut(inst, &frac, dist)?)
    })?;
    let optimum = if inst.vertex_count() <= SPARSEST_VERTEX_LIMIT {
        brute_force_sparsest_cut(inst)?.sparsity
    } else {
        None
    };
    Ok(SparsestOutcome {
        lp: frac.objective,
        x: frac.x,
        edges: rounded.best.edges,
        cost: rounded.best.cost,
        demand: rounded.best.demand,
        sparsity: rounded.best.sparsity,
        optimum,
    })
}

fn tw2_checks(cfg: &ExperimentConfig, g: &WeightedDigraph, stream_seed: u64) -> Result<Vec<Check>, HarnessError> {
    let tw = Tw2Host::new(g)?;
    let h = &tw.host;
    let host = h.host();
    let hd = shortest_path_quasimetric(host);
    let src = shortest_path_quasimetric(g);
    let r = default_radius(cfg, &hd);
    let s = Tw2Sampler::new(h, &tw.complementary, r)?;
    let m = host.edge_count();
    let mut hits = vec![0usize; m];
    let mut worst_bound: f64 = 0.0;
    for i in 0..cfg.samples {
        let out = s.sample(&mut stream(stream_seed, i as u64));
        let rep = bound_check(&out.project(h), &src, 6.0 * r)?;
        worst_bound = worst_bound.max(rep.max_distance / r);
        for (e, c) in hits.iter_mut().enumerate() {
            let ed = host.edge(e);
            *c += usize::from(!out.host.contains(ed.tail, ed.head));
        }
    }
    let (mut witness, mut within): (f64, bool) = (0.0, true);
    for (e, &c) in hits.iter().enumerate() {
        let ed = host.edge(e);
        let d = hd.get(ed.tail, ed.head) / r;
        let f = c as f64 / cfg.samples as f64;
        within &= f <= with_standard_errors(18.0 * d, cfg.samples) + TOL;
        if d > 0.0 {
            witness = witness.max(f / d);
        }
    }
    Ok(vec![
        Check::at_most("6r-bounded", worst_bound, 6.0),
        Check::new("edge-separation-witness", within, witness, 18.0),
    ])
}

fn pathwidth_checks(cfg: &ExperimentConfig, gen: &Generated, stream_seed: u64) -> Result<Vec<Check>, HarnessError> {
    let pd = certificate_decomposition(gen).ok_or_else(|| HarnessError::BadSpec("pathwidth needs a pathwidth family".into()))?;
    let pc = embed_path_of_cliques(&gen.graph, pd)?;
    let host = pc.host();
    let hd = shortest_path_quasimetric(host);
    let k = pc.clique_size();
    let beta = (2 * k * k + 1) as f64;
    let r = default_radius(cfg, &hd);
    let s = PathwidthSampler::new(&pc, r)?;
    let m = host.edge_count();
    let mut hits = vec![0usize; m];
    for i in 0..cfg.samples {
        let out = s.sample(&mut stream(stream_seed, i as u64));
        for (e, c) in hits.iter_mut().enumerate() {
            *c += usize::from(out.removed_at[e].is_some());
        }
    }
    let (mut witness, mut within): (f64, bool) = (0.0, true);
    for (e, &c) in hits.iter().enumerate() {
        let ed = host.edge(e);
        let d = hd.get(ed.tail, ed.head) / r;
        let f = c as f64 / cfg.samples as f64;
        within &= f <= with_standard_errors(beta * d, cfg.samples) + TOL;
        if d > 0.0 {
            witness = witness.max(f / d);
        }
    }
    let delta = hd.diameter();
    let mut checks = vec![Check::new("removal-frequency-witness", within, witness, beta)];
    match calibrate_alpha(&pc, delta, DEFAULT_MAX_ALPHA)? {
        Some(alpha) => {
            let small = delta / 2f64.powi((alpha as usize * k * k) as i32);
            let s = PathwidthSampler::new(&pc, small)?;
            let mut worst: f64 = 0.0;
            for i in 0..cfg.samples {
                let out = s.sample(&mut stream(stream_seed ^ 0x5eed, i as u64));
                worst = worst.max(bound_check(&out.host, &hd, delta)?.max_distance);
            }
            checks.push(Check::at_most("delta-bounded", worst, delta));
        }
        None => checks.push(Check::new("delta-bounded", false, f64::INFINITY, delta)),
    }
    let (_, support) = enumerate_pathwidth_support(&pc, r)?;
    let most = support.forward_breakpoints.iter().chain(&support.backward_breakpoints).copied().max().unwrap_or(0);
    checks.push(Check::new("breakpoints", support.within_bound(), most as f64, support.bound as f64));
    Ok(checks)
}

fn cycle_checks(g: &WeightedDigraph) -> Result<Vec<Check>, HarnessError> {
    let c = CycleInstance::new(g)?;
    let sep = enumerate_cycle_law(&c).distribution()?.separation();
    let d = shortest_path_quasimetric(g);
    let (n, delta) = (g.vertex_count(), c.diameter());
    let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
    for u in 0..n {
        for v in (0..n).filter(|&v| v != u) {
            let (p, duv) = (sep[u * n + v], d.get(u, v));
            if duv > 0.0 {
                lower = lower.min(p * delta / duv);
                upper = upper.max(p * delta / duv);
            }
        }
    }
    Ok(vec![
        Check::new("separation-lower", lower >= 0.5 - TOL, lower, 0.5),
        Check::at_most("separation-upper", upper, 14.0),
    ])
}

fn tree_checks(g: &WeightedDigraph) -> Result<Vec<Check>, HarnessError> {
    let sep = tree_distribution(g)?.separation();
    let d = shortest_path_quasimetric(g);
    let (n, w) = (g.vertex_count(), g.total_weight());
    let mut err: f64 = 0.0;
    for u in 0..n {
        for v in 0..n {
            err = err.max((sep[u * n + v] - d.get(u, v) / w).abs());
        }
    }
    Ok(vec![Check::at_most("separation-equals-d-over-w", err, TOL)])
}

fn kpr_checks(cfg: &ExperimentConfig, gen: &Generated, stream_seed: u64) -> Result<Vec<Check>, HarnessError> {
    let g = &gen.graph;
    let mut rng = stream(stream_seed, 0);
    if let Certificate::Counterexample { picks, radius, .. } = &gen.certificate {
        let policy = PickPolicy::Sequence(picks.clone());
        let three = kpr_generalized(g, *radius, &policy, Orientation::Directed, KPR_ROUNDS, &mut rng)?;
        let all = kpr_generalized(g, *radius, &policy, Orientation::Directed, g.vertex_count(), &mut rng)?;
        return Ok(vec![
            Check::new("unbounded-after-3-rounds", !three.bounded(), three.report.max_distance, *radius),
            Check::at_most("bounded-after-n-rounds", all.report.max_distance, *radius),
        ]);
    }
    let r = default_radius(cfg, &shortest_path_quasimetric(g));
    let out = kpr_generalized(g, r, &PickPolicy::Random, cfg.orientation, cfg.rounds, &mut rng)?;
    Ok(vec![Check::at_most("r-bounded", out.report.max_distance, r)])
}

fn run_instance(cfg: &ExperimentConfig, index: usize) -> Result<InstanceReport, HarnessError> {
    let start = Instant::now();
    let spec = cfg.spec(index);
    let gen = generate(&spec)?;
    let g = &gen.graph;
    let stream_seed = spec.seed;
    let checks = match cfg.algorithm {
        Algorithm::Tw2 => tw2_checks(cfg, g, stream_seed)?,
        Algorithm::Pathwidth => pathwidth_checks(cfg, &gen, stream_seed)?,
        Algorithm::Cycle => cycle_checks(g)?,
        Algorithm::Tree => tree_checks(g)?,
        Algorithm::Kpr => kpr_checks(cfg, &gen, stream_seed)?,
        Algorithm::Multicut => {
            let pairs = random_pairs(g.vertex_count(), cfg.pairs, &mut stream(stream_seed, u64::MAX));
            let inst = CutInstance::new(g.clone(), pairs)?;
            let out = run_multicut(certificate_decomposition(&gen), &inst, cfg.eps, stream_seed, cfg.samples)?;
            let mut checks = vec![
                Check::new("valid-multicut", out.valid, out.cost, out.lp),
                Check::at_most("support-bound", out.cost, out.beta / (1.0 - cfg.eps) * out.lp),
            ];
            if let Some(opt) = out.optimum {
                checks.push(Check::at_most("lp-below-optimum", out.lp, opt * (1.0 + cfg.eps)));
            }
            checks
        }
        Algorithm::Sparsest => {
            let inst = CutInstance::uniform(g.clone());
            let out = run_sparsest(certificate_decomposition(&gen), &inst, cfg.eps, stream_seed, cfg.samples)?;
            let got = out.sparsity.unwrap_or(f64::INFINITY);
            match out.optimum {
                Some(opt) => vec![
                    Check::at_most("lp-below-optimum", out.lp, opt * (1.0 + cfg.eps)),
                    Check::at_most("optimum-below-rounded", opt, got),
                    Check::at_most("rounded-over-optimum", got / opt, SPARSEST_RATIO_LIMIT),
                ],
                None => vec![Check::at_most("lp-below-rounded", out.lp, got)],
            }
        }
    };
    Ok(InstanceReport {
        index,
        seed: spec.seed,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        checks,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let start = Instant::now();
    let instances = (0..cfg.instances)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport {
        pass: instances.iter().all(|r| r.checks.iter().all(|c| c.pass)),
        config: cfg.clone(),
        instances,
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_defaults() {
        let cfg: ExperimentConfig = "# tree law\nfamily = tree\nn = 9\nalgorithm = tree\nweights = 2 5 # per direction\n"
            .parse()
            .unwrap();
        assert_eq!((cfg.family, cfg.n, cfg.algorithm), (Family::Tree, 9, Algorithm::Tree));
        assert_eq!(cfg.weights, (2.0, 5.0));
        assert_eq!((cfg.instances, cfg.samples, cfg.seed), (1, DEFAULT_SAMPLES, 0));
    }

    #[test]
    fn malformed_configs_name_the_line() {
        let e = "family = tree\nn: 4\n".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(e, HarnessError::Config { line: 2, .. }));
        let e = "family = tree\nn = 4\nalgorithm = magic\n".parse::<ExperimentConfig>().unwrap_err();
        assert!(matches!(e, HarnessError::Config { line: 3, .. }));
        assert!("family = tree\nn = 4\n".parse::<ExperimentConfig>().is_err());
        assert!("family = tree\nn = 4\nalgorithm = tree\neps = 2\n".parse::<ExperimentConfig>().is_err());
    }

    #[test]
    fn standard_errors_vanish_at_the_extremes() {
        assert_eq!(with_standard_errors(0.0, 100), 0.0);
        assert_eq!(with_standard_errors(1.5, 100), 1.5);
        assert!((with_standard_errors(0.5, 100) - 0.7).abs() < 1e-12);
    }
}
