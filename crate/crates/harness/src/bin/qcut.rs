use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qcut_core::{bound_check, shortest_path_quasimetric, Quasipartition, WeightedDigraph};
use qcut_cuts::{CutInstance, DEFAULT_EPS, DEFAULT_MAX_ALPHA, DEFAULT_SAMPLES};
use qcut_decompositions::{
    build_complementary, compute_tree_decomposition, embed_hexagon_tree, embed_path_of_cliques, verify_isometry,
    PathDecomposition,
};
use qcut_embeddings::{
    combination_from_distribution, cuts_to_l1, cycle_cut_distribution_unchecked, exact_distortion, tree_cut_distribution,
    ConvexCombination,
};
use qcut_harness::{
    generate, kpr_generalized, lowerbound_dual_check, run_experiment, run_multicut, run_sparsest, standard_candidates,
    ExperimentConfig, Family, GeneratorSpec, HarnessError, Orientation, PickPolicy,
};
use qcut_sampling::{
    calibrate_alpha, enumerate_cycle_law, estimate_lipschitz, stream, tree_distribution, CycleInstance,
    PathwidthSampler, QuasipartitionDistribution, Tw2Sampler,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qcut", about = "Random quasipartitions, directed cut embeddings and cut rounding")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Tw2,
    Pathwidth,
    Cycle,
    Tree,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedKind {
    CycleL1,
    TreeL1,
    Combo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Smallest,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance; the graph goes to --out, the certificate to stdout.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 2, default_values_t = [1.0, 10.0])]
        weights: Vec<f64>,
        #[arg(long, num_args = 2, default_values_t = [1.0, 1.0])]
        capacities: Vec<f64>,
    },
    /// Draw quasipartitions and report separation statistics.
    Sample {
        kind: SampleKind,
        #[arg(long)]
        graph: PathBuf,
        /// Radius; defaults to a quarter of the diameter.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Sets the pathwidth radius to diameter / 2^(alpha·k²); `0` calibrates.
        #[arg(long)]
        alpha: Option<u32>,
        /// Path decomposition: `parent v1 v2 ...` per bag, parent -1 for the first (pathwidth only).
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Build a cut combination and its directed l1 coordinates.
    Embed {
        kind: EmbedKind,
        #[arg(long)]
        graph: PathBuf,
    },
    /// LP relaxation and rounding for directed cut problems.
    Cut {
        #[command(subcommand)]
        problem: CutProblem,
    },
    /// Check that the host embeddings of a graph are isometric.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Run the directed ball-chopping scheme.
    Kpr {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        #[arg(long, value_enum, default_value_t = Policy::Random)]
        policy: Policy,
        /// Centre per round, overriding --policy.
        #[arg(long, value_delimiter = ',')]
        picks: Option<Vec<usize>>,
        /// Remove reverse twins together with each chopped edge.
        #[arg(long)]
        undirected: bool,
    },
    /// Average edge stretch of the shipped cycle-into-tree candidates.
    Lowerbound {
        #[arg(long)]
        n: usize,
    },
    /// Run a key-value experiment config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum CutProblem {
    Multicut {
        #[arg(long)]
        graph: PathBuf,
        /// Lines `s t [dem]`.
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    Sparsest {
        #[arg(long)]
        graph: PathBuf,
        /// Unit demand on every ordered pair; the only supported demand.
        #[arg(long, required = true)]
        uniform: bool,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// JSON document plus an optional flat table for `--format csv`.
struct Output {
    json: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

impl Output {
    fn json(json: Value) -> Self {
        Self { json, table: None }
    }
}

fn read_graph(path: &Path) -> Result<WeightedDigraph, HarnessError> {
    Ok(fs::read_to_string(path)?.parse()?)
}

fn read_decomposition(path: Option<&PathBuf>) -> Result<Option<PathDecomposition>, HarnessError> {
    path.map(|p| Ok(PathDecomposition::from_text(&fs::read_to_string(p)?)?)).transpose()
}

fn relation_json(q: &Quasipartition) -> Value {
    json!(q.run_length_rows())
}

fn sample(
    kind: SampleKind,
    g: &WeightedDigraph,
    r: Option<f64>,
    samples: usize,
    alpha: Option<u32>,
    pd: Option<PathDecomposition>,
    seed: u64,
) -> Result<Output, HarnessError> {
    let src = shortest_path_quasimetric(g);
    let default_r = src.diameter() / 4.0;
    let (draws, radius, extra): (Vec<Quasipartition>, f64, Value) = match kind {
        SampleKind::Tw2 => {
            let h = embed_hexagon_tree(g, &compute_tree_decomposition(g))?.canonicalize().0;
            let cs = build_complementary(&h, h.hexagons()[0].vertices[0])?;
            let r = r.unwrap_or(default_r);
            let s = Tw2Sampler::new(&h, &cs, r)?;
            let draws = (0..samples).map(|i| s.sample(&mut stream(seed, i as u64)).project(&h)).collect();
            (draws, r, json!({ "bound_factor": 6.0 }))
        }
        SampleKind::Pathwidth => {
            let pd = pd.ok_or_else(|| HarnessError::BadSpec("pathwidth sampling needs --decomposition".into()))?;
            let pc = embed_path_of_cliques(g, &pd)?;
            let k = pc.clique_size();
            let delta = shortest_path_quasimetric(pc.host()).diameter();
            let alpha = match alpha {
                Some(0) => calibrate_alpha(&pc, delta, DEFAULT_MAX_ALPHA)?,
                a => a,
            };
            let r = match alpha {
                Some(a) => delta / 2f64.powi((a as usize * k * k) as i32),
                None => r.unwrap_or(default_r),
            };
            let s = PathwidthSampler::new(&pc, r)?;
            let draws = (0..samples).map(|i| s.sample(&mut stream(seed, i as u64)).project(&pc)).collect();
            (draws, r, json!({ "alpha": alpha, "clique_size": k, "diameter": delta }))
        }
        SampleKind::Cycle => {
            let c = CycleInstance::new(g)?;
            let draws = (0..samples).map(|i| c.sample(&mut stream(seed, i as u64)).1).collect();
            let law = enumerate_cycle_law(&c).distribution()?;
            (draws, c.diameter(), json!({ "exact_separation": law.separation(), "support": law.size() }))
        }
        SampleKind::Tree => {
            let t = qcut_sampling::TreeInstance::new(g)?;
            let draws = (0..samples).map(|i| t.sample(&mut stream(seed, i as u64)).1).collect();
            let law = tree_distribution(g)?;
            (draws, t.total_weight(), json!({ "exact_separation": law.separation() }))
        }
    };
    let mut worst: f64 = 0.0;
    for q in &draws {
        worst = worst.max(bound_check(q, &src, radius)?.max_distance);
    }
    let lip = estimate_lipschitz(&QuasipartitionDistribution::Explicit(empirical(&draws)?), &src, radius);
    let rows: Vec<Vec<String>> = lip
        .pairs
        .iter()
        .map(|p| vec![p.x.to_string(), p.y.to_string(), p.distance.to_string(), p.probability.to_string(), p.witness.to_string()])
        .collect();
    let json = json!({
        "radius": radius,
        "samples": draws.len(),
        "relations": draws.iter().map(relation_json).collect::<Vec<_>>(),
        "max_retained_distance": worst,
        "max_witness": lip.max_witness,
        "witnesses": lip.pairs.iter().map(|p| json!({
            "x": p.x, "y": p.y, "distance": p.distance, "probability": p.probability, "witness": p.witness,
        })).collect::<Vec<_>>(),
        "details": extra,
    });
    Ok(Output {
        json,
        table: Some((vec!["x", "y", "distance", "probability", "witness"], rows)),
    })
}

/// Uniform law over observed draws.
fn empirical(draws: &[Quasipartition]) -> Result<qcut_sampling::ExplicitDistribution, HarnessError> {
    let w = 1.0 / draws.len() as f64;
    Ok(qcut_sampling::ExplicitDistribution::new(draws.iter().map(|q| (q.clone(), w)).collect())?)
}

fn combination_report(g: &WeightedDigraph, c: &ConvexCombination, l1: bool) -> Result<Value, HarnessError> {
    let d = shortest_path_quasimetric(g);
    let dist = exact_distortion(&d, |x, y| c.distance(x, y));
    let mut out = json!({
        "combination": c.to_json(),
        "members": c.size(),
        "distortion": dist.distortion,
        "scale": dist.alpha,
    });
    if l1 {
        let e = cuts_to_l1(c)?;
        out["l1"] = json!({ "scale": e.scale(), "coords": e.coords() });
    }
    Ok(out)
}

fn embed(kind: EmbedKind, g: &WeightedDigraph) -> Result<Output, HarnessError> {
    let json = match kind {
        EmbedKind::CycleL1 => {
            let c = CycleInstance::new(g)?;
            let cuts = cycle_cut_distribution_unchecked(&c, &enumerate_cycle_law(&c))?;
            let mut v = combination_report(g, &cuts.combination, true)?;
            v["max_family"] = json!(cuts.max_family);
            v["max_removed"] = json!(cuts.max_removed);
            v
        }
        EmbedKind::TreeL1 => combination_report(g, &tree_cut_distribution(g)?, true)?,
        EmbedKind::Combo => {
            let c = CycleInstance::new(g)?;
            let law = QuasipartitionDistribution::Explicit(enumerate_cycle_law(&c).distribution()?);
            combination_report(g, &combination_from_distribution(&law)?, false)?
        }
    };
    Ok(Output::json(json))
}

fn verify(g: &WeightedDigraph, pd: Option<PathDecomposition>) -> Result<Output, HarnessError> {
    let src = shortest_path_quasimetric(g);
    let mut checks = Vec::new();
    let td = compute_tree_decomposition(g);
    if td.width() <= 2 {
        let h = embed_hexagon_tree(g, &td)?;
        let err = verify_isometry(&src, &shortest_path_quasimetric(h.host()), h.embedding());
        checks.push(json!({ "host": "hexagon-tree", "max_error": err, "pass": err <= 1e-9 }));
        let (c, report) = h.canonicalize();
        let factors = report.factors.iter().all(|f| (0.5..=2.0).contains(f));
        checks.push(json!({
            "host": "canonical-hexagon-tree",
            "distortion": report.distortion,
            "pass": c.is_canonical() && factors && report.distortion <= 2.0 + 1e-9,
        }));
    }
    if let Some(pd) = pd {
        let pc = embed_path_of_cliques(g, &pd)?;
        let err = verify_isometry(&src, &shortest_path_quasimetric(pc.host()), pc.embedding());
        checks.push(json!({ "host": "path-of-cliques", "max_error": err, "pass": err <= 1e-9 }));
    }
    Ok(Output::json(json!({ "treewidth_bound": td.width(), "checks": checks })))
}

fn run(cli: &Cli) -> Result<Output, HarnessError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Gen {
            family,
            n,
            weights,
            capacities,
        } => {
            let spec = GeneratorSpec::new(family.parse::<Family>()?, *n, seed)
                .with_weights(weights[0], weights[1])
                .with_capacities(capacities[0], capacities[1]);
            let gen = generate(&spec)?;
            let text = gen.graph.to_text();
            Ok(Output::json(json!({ "graph": text, "certificate": gen.certificate, "spec": gen.spec })))
        }
        Command::Sample {
            kind,
            graph,
            r,
            samples,
            alpha,
            decomposition,
        } => sample(*kind, &read_graph(graph)?, *r, *samples, *alpha, read_decomposition(decomposition.as_ref())?, seed),
        Command::Embed { kind, graph } => embed(*kind, &read_graph(graph)?),
        Command::Cut { problem } => match problem {
            CutProblem::Multicut {
                graph,
                pairs,
                eps,
                decomposition,
                samples,
            } => {
                let pairs = CutInstance::parse_pairs(&fs::read_to_string(pairs)?)?;
                let inst = CutInstance::new(read_graph(graph)?, pairs)?;
                let pd = read_decomposition(decomposition.as_ref())?;
                Ok(Output::json(serde_json::to_value(run_multicut(pd.as_ref(), &inst, *eps, seed, *samples)?)?))
            }
            CutProblem::Sparsest {
                graph,
                eps,
                decomposition,
                samples,
                ..
            } => {
                let inst = CutInstance::uniform(read_graph(graph)?);
                let pd = read_decomposition(decomposition.as_ref())?;
                Ok(Output::json(serde_json::to_value(run_sparsest(pd.as_ref(), &inst, *eps, seed, *samples)?)?))
            }
        },
        Command::Verify { graph, decomposition } => verify(&read_graph(graph)?, read_decomposition(decomposition.as_ref())?),
        Command::Kpr {
            graph,
            r,
            rounds,
            policy,
            picks,
            undirected,
        } => {
            let g = read_graph(graph)?;
            let policy = match (picks, policy) {
                (Some(p), _) => PickPolicy::Sequence(p.clone()),
                (None, Policy::Smallest) => PickPolicy::Smallest,
                (None, Policy::Random) => PickPolicy::Random,
            };
            let orientation = if *undirected { Orientation::Undirected } else { Orientation::Directed };
            let out = kpr_generalized(&g, *r, &policy, orientation, *rounds, &mut stream(seed, 0))?;
            Ok(Output::json(json!({
                "bounded": out.bounded(),
                "max_retained_distance": out.report.max_distance,
                "radius": r,
                "offending": out.report.offending.first(),
                "removed": out.removed,
                "centres": out.centres,
                "relation": relation_json(&out.quasipartition),
            })))
        }
        Command::Lowerbound { n } => {
            let reports = lowerbound_dual_check(*n, &standard_candidates(*n, seed)?)?;
            let rows = reports
                .iter()
                .map(|r| vec![r.name.clone(), r.host_vertices.to_string(), r.average_stretch.to_string(), r.bound.to_string()])
                .collect();
            Ok(Output {
                json: serde_json::to_value(&reports)?,
                table: Some((vec!["candidate", "host_vertices", "average_stretch", "bound"], rows)),
            })
        }
        Command::Experiment { config } => {
            let cfg: ExperimentConfig = fs::read_to_string(config)?.parse()?;
            let report = run_experiment(&cfg)?;
            let rows = report
                .instances
                .iter()
                .flat_map(|i| {
                    i.checks.iter().map(move |c| {
                        vec![i.index.to_string(), i.seed.to_string(), c.name.clone(), c.pass.to_string(), c.value.to_string(), c.bound.to_string()]
                    })
                })
                .collect();
            Ok(Output {
                json: serde_json::to_value(&report)?,
                table: Some((vec!["instance", "seed", "check", "pass", "value", "bound"], rows)),
            })
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<(), HarnessError> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    match (cli.format, out.table) {
        (Format::Csv, Some((header, rows))) => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&header)?;
            for row in rows {
                w.write_record(&row)?;
            }
            w.flush()?;
        }
        (Format::Csv, None) => return Err(HarnessError::BadSpec("this command has no tabular output".into())),
        (Format::Json, _) => {
            serde_json::to_writer_pretty(&mut sink, &out.json)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli).and_then(|out| emit(&cli, out)) {
        eprintln!("qcut: {e}");
        std::process::exit(1);
    }
}
