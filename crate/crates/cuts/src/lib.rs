//! Directed multicut and uniform sparsest cut: LP relaxations in
//! distance-variable form, rounding through random quasipartitions, and
//! exact brute-force oracles for small instances.

pub mod brute;
pub mod error;
pub mod instance;
pub mod laws;
pub mod lp;
pub mod rounding;
pub mod simplex;

pub use brute::{brute_force_multicut, brute_force_sparsest_cut, MULTICUT_EDGE_LIMIT, SPARSEST_VERTEX_LIMIT};
pub use error::CutError;
pub use instance::{CutInstance, CutSolution, Demand, FractionalSolution};
pub use laws::{pathwidth_law, PathwidthLaw, Tw2Host, DEFAULT_MAX_ALPHA, DEFAULT_SAMPLES};
pub use lp::{solve_multicut_lp, solve_sparsest_cut_lp, DEFAULT_EPS};
pub use rounding::{
    candidates, edges_outside, empirical_law, round_multicut, round_sparsest_cut, support_beta, MulticutRounding, SparsestCase,
    SparsestRounding,
};
pub use simplex::{LinearProgram, LpSolution, Sense, LP_TOL};
