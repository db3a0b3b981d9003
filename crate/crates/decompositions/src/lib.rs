//! Host graphs for structured digraphs: trees of hexagons for treewidth-2
//! inputs (with canonicalization into tight/slack form and complementary
//! paths), and paths of cliques for bounded-pathwidth inputs.

pub mod cliques;
pub mod complementary;
pub mod error;
pub mod hexagon;
pub mod isometry;
pub mod paths;
pub mod treedec;

pub use cliques::{embed_path_of_cliques, EdgeKind, PathOfCliques};
pub use complementary::{build_complementary, ComplementaryStructure, Inconsistency, LeafPaths, SharedKind};
pub use error::DecompError;
pub use hexagon::{embed_hexagon_tree, CanonicalReport, ChildPath, Hexagon, HexagonTree, PathClass};
pub use isometry::{multiplicative_distortion, verify_isometry};
pub use treedec::{compute_tree_decomposition, PathDecomposition, TreeDecomposition};
