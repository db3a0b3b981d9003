//! Random quasipartitions of bounded radius: samplers for treewidth-2 hosts,
//! paths of cliques, directed cycles and directed trees, exact enumeration of
//! their laws where the randomness is a handful of thresholds, and Lipschitz
//! estimation.

pub mod config;
pub mod cycle;
pub mod distribution;
pub mod error;
pub mod lipschitz;
pub mod pathwidth;
pub mod threshold;
pub mod tree;
pub mod tw2;

pub use config::{stream, SamplerConfig};

pub use distribution::{total_variation, ExplicitDistribution, QuasipartitionDistribution};
pub use cycle::{enumerate_cycle_law, sample_cycle, Arcs, CycleAtom, CycleInstance, CycleLaw, RingEdge};
pub use error::SamplingError;
pub use lipschitz::{estimate_lipschitz, wilson_interval, LipschitzReport, PairEstimate};
pub use pathwidth::{
    calibrate_alpha, enumerate_pathwidth_support, sample_pathwidth, PathwidthSampler, PwStep, SupportReport,
};
pub use tree::{sample_tree, tree_distribution, TreeInstance};
pub use tw2::{sample_tw2, Tw2Outcome, Tw2Sampler, Tw2Step};
