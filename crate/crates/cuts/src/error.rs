use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error(transparent)]
    Core(#[from] qcut_core::CoreError),
    #[error(transparent)]
    Sampling(#[from] qcut_sampling::SamplingError),
    #[error(transparent)]
    Decomp(#[from] qcut_decompositions::DecompError),
    #[error("no alpha up to {0} makes the pathwidth law bounded")]
    NoCalibration(u32),
    #[error("graph has treewidth {0} > 2")]
    WidthTooLarge(usize),
    #[error("terminal pair {0} has equal endpoints")]
    DegeneratePair(usize),
    #[error("terminal pair {index} uses vertex {vertex} outside 0..{n}")]
    PairOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("demand of pair {0} must be finite and non-negative, got {1}")]
    BadDemand(usize, f64),
    #[error("instance has no terminal pairs")]
    NoPairs,
    #[error("pairs file line {0}: expected `s t [dem]`, got {1:?}")]
    BadPairsLine(usize, String),
    #[error("total demand is zero")]
    ZeroDemand,
    #[error("demands are not uniform over all ordered pairs")]
    NotUniform,
    #[error("edge {0} is not in the graph")]
    NoSuchEdge(usize),
    #[error("linear program is infeasible (residual {0})")]
    Infeasible(f64),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex stopped after {0} pivots")]
    IterationLimit(usize),
    #[error("quasipartition keeps a pair at distance {found} > {radius}")]
    UnboundedQuasipartition { found: f64, radius: f64 },
    #[error("quasipartition size {found} does not match {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("rounded cut leaves terminal pair {0} connected")]
    InvalidMulticut(usize),
    #[error("distribution has no members")]
    EmptyDistribution,
    #[error("{what} exceeds the brute-force limit ({found} > {limit})")]
    TooLarge { what: &'static str, found: usize, limit: usize },
}
