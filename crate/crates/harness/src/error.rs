use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] qcut_core::CoreError),
    #[error(transparent)]
    Decomp(#[from] qcut_decompositions::DecompError),
    #[error(transparent)]
    Sampling(#[from] qcut_sampling::SamplingError),
    #[error(transparent)]
    Embed(#[from] qcut_embeddings::EmbedError),
    #[error(transparent)]
    Cut(#[from] qcut_cuts::CutError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid generator spec: {0}")]
    BadSpec(String),
    #[error("certificate check failed: {0}")]
    BadCertificate(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("host is not a tree: {0}")]
    NotATree(String),
    #[error("candidate contracts ({x},{y}): host distance {host} < cycle distance {cycle}")]
    Contracting { x: usize, y: usize, host: f64, cycle: f64 },
    #[error("candidate {index} has average stretch {stretch} < {bound}")]
    StretchBelowBound { index: usize, stretch: f64, bound: f64 },
}
