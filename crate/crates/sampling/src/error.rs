use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error(transparent)]
    Core(#[from] qcut_core::CoreError),
    #[error(transparent)]
    Decomp(#[from] qcut_decompositions::DecompError),
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("sample budget must be at least 1")]
    NoSamples,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("total edge weight is zero")]
    ZeroWeight,
    #[error("vertex {0} cannot reach vertex {1}")]
    Unreachable(usize, usize),
    #[error("short-pair {0} set is not a consecutive arc")]
    NotConsecutive(&'static str),
    #[error("short-pair source and sink sets intersect at vertex {0}")]
    Overlap(usize),
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
}
