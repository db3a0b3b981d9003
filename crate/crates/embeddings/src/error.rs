use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error(transparent)]
    Core(#[from] qcut_core::CoreError),
    #[error(transparent)]
    Sampling(#[from] qcut_sampling::SamplingError),
    #[error("a sampler handle has no exact law; enumerate the support first")]
    NeedsExplicit,
    #[error("weights must be non-negative and sum to 1, got {0}")]
    BadWeights(f64),
    #[error("members have {found} points, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("support member removes {0} edges, more than {max}", max = crate::MAX_REMOVED)]
    TooManyRemoved(usize),
    #[error("member {0} is not a directed cut metric")]
    NotACut(usize),
    #[error("relation is not a directed cut")]
    RelationNotACut,
}
