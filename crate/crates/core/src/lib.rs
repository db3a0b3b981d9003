//! Shared vocabulary for directed cut algorithms: weighted digraphs, their
//! shortest-path quasimetrics, quasipartitions, directed cut metrics and the
//! directed l1 distance.
//!
//! ```
//! use qcut_core::{WeightedDigraph, shortest_path_quasimetric};
//!
//! let g: WeightedDigraph = "3 3\n0 1 1\n1 2 1\n2 0 1\n".parse().unwrap();
//! let q = shortest_path_quasimetric(&g);
//! assert_eq!(q.get(0, 1), 1.0);
//! assert_eq!(q.get(1, 0), 2.0);
//! ```

pub mod error;
pub mod graph;
pub mod l1;
pub mod metrics;
pub mod quasimetric;
pub mod quasipartition;

pub use error::CoreError;
pub use graph::{Edge, WeightedDigraph};
pub use l1::{directed_l1_distance, evaluate_embedding, DirectedL1Embedding, DistortionReport};
pub use metrics::{directed_cut_from_set, zero_one_from_quasipartition, DirectedCutMetric, ZeroOneQuasimetric};
pub use quasimetric::{
    dijkstra, shortest_path_quasimetric, validate_quasimetric, QuasimetricSpace, Violation,
};
pub use quasipartition::{bound_check, transitive_closure, BoundReport, Quasipartition};

/// Absolute tolerance for distance comparisons.
pub const TOL: f64 = 1e-9;

/// `a <= b` up to [`TOL`], scaled for large magnitudes.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + TOL * b.abs().max(1.0)
}

/// `a == b` up to [`TOL`], scaled for large magnitudes.
pub fn approx_eq(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1.0)
}
