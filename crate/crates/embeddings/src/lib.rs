//! Turns quasipartition distributions into convex combinations of 0-1
//! quasimetrics or directed cut metrics, realizes cut combinations as
//! directed l1 coordinates and measures distortion exactly.

pub mod combination;
pub mod cycle;
pub mod distortion;
pub mod error;
pub mod tree;

pub use combination::{combination_from_distribution, cuts_to_l1, ConvexCombination, Member};
pub use cycle::{cut_family, cycle_cut_distribution, cycle_cut_distribution_unchecked, CycleCuts, MAX_REMOVED};
pub use distortion::{exact_distortion, Distortion};
pub use error::EmbedError;
pub use tree::tree_cut_distribution;
