//! Bounded quasipartition laws over LP lengths for the structured classes:
//! the exact pathwidth support, and Monte Carlo treewidth-2 draws.

use qcut_core::WeightedDigraph;
use qcut_decompositions::{
    build_complementary, compute_tree_decomposition, embed_hexagon_tree, embed_path_of_cliques, ComplementaryStructure,
    HexagonTree, PathDecomposition,
};
use qcut_sampling::{
    calibrate_alpha, enumerate_pathwidth_support, ExplicitDistribution, QuasipartitionDistribution, SamplerConfig,
    Tw2Sampler,
};

use crate::CutError;

/// Monte Carlo draws when no exact law is available.
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_MAX_ALPHA: u32 = 12;
/// Treewidth-2 draws are `6r`-bounded on the canonical host, whose
/// distances are within a factor 2 of the source.
pub const TW2_RADIUS_DIVISOR: f64 = 12.0;

#[derive(Debug, Clone, PartialEq)]
pub struct PathwidthLaw {
    /// Law on source vertices.
    pub law: ExplicitDistribution,
    pub alpha: u32,
    pub radius: f64,
}

/// Exact law of the pathwidth sampler on `g`, with the radius shrunk by the
/// smallest `2^(alpha·k²)` that makes every member `bound`-bounded.
pub fn pathwidth_law(
    g: &WeightedDigraph,
    pd: &PathDecomposition,
    bound: f64,
    max_alpha: u32,
) -> Result<PathwidthLaw, CutError> {
    let pc = embed_path_of_cliques(g, pd)?;
    let alpha = calibrate_alpha(&pc, bound, max_alpha)?.ok_or(CutError::NoCalibration(max_alpha))?;
    let k = pc.clique_size() as i32;
    let radius = bound / 2f64.powi(alpha as i32 * k * k);
    let (host_law, _) = enumerate_pathwidth_support(&pc, radius)?;
    let atoms = host_law
        .support()
        .iter()
        .map(|(q, p)| (q.restrict(pc.embedding()), *p))
        .collect();
    Ok(PathwidthLaw {
        law: ExplicitDistribution::new(atoms)?,
        alpha,
        radius,
    })
}

/// Canonical hexagon host with its complementary paths.
#[derive(Debug, Clone)]
pub struct Tw2Host {
    pub host: HexagonTree,
    pub complementary: ComplementaryStructure,
}

impl Tw2Host {
    pub fn new(g: &WeightedDigraph) -> Result<Self, CutError> {
        let td = compute_tree_decomposition(g);
        if td.width() > 2 {
            return Err(CutError::WidthTooLarge(td.width()));
        }
        let host = embed_hexagon_tree(g, &td)?.canonicalize().0;
        let complementary = build_complementary(&host, host.hexagons()[0].vertices[0])?;
        Ok(Self { host, complementary })
    }

    /// Sampler whose draws, projected to source vertices, aim to be
    /// `bound`-bounded.
    pub fn distribution(&self, bound: f64, seed: u64, samples: usize) -> Result<QuasipartitionDistribution<'_>, CutError> {
        let radius = bound / TW2_RADIUS_DIVISOR;
        let sampler = Tw2Sampler::new(&self.host, &self.complementary, radius)?;
        let config = SamplerConfig::new(radius, seed, samples)?;
        Ok(QuasipartitionDistribution::sampler(config, move |rng| {
            sampler.sample(rng).project(&self.host)
        }))
    }
}
