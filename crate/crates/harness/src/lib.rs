//! Instance generators, the directed ball-chopping demonstration, the
//! cycle-into-trees dual check, and config-driven experiments.

pub mod error;
pub mod experiment;
pub mod generators;
pub mod kpr;
pub mod lowerbound;

pub use error::HarnessError;
pub use experiment::{
    certificate_decomposition, random_pairs, run_experiment, run_multicut, run_sparsest, sparsest_bound,
    with_rounding_law, with_standard_errors, Algorithm, Check, ExperimentConfig, ExperimentReport, InstanceReport,
    MulticutOutcome, SparsestOutcome, SPARSEST_RATIO_LIMIT,
};
pub use generators::{
    check_certificate, check_path_decomposition, generate, BuildStep, Certificate, Family, Generated, GeneratorSpec,
    KPR_ROUNDS,
};
pub use kpr::{kpr_generalized, KprOutcome, Orientation, PickPolicy};
pub use lowerbound::{
    binary_candidate, cycle_distance, flat_star_candidate, graded_star_candidate, lowerbound_dual_check,
    path_candidate, random_candidate, standard_candidates, CandidateReport, TreeEmbeddingCandidate,
};
