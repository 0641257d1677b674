//! Exact and approximate solvers for SCSS and DSN, treewidth tools and the
//! weight-model transformations.

pub mod bnb;
pub mod dst;
pub mod transform;
pub mod treewidth;
pub mod twdp;

pub use bnb::{decide_dsn, decide_scss, exact_dsn, exact_scss, exhaustive_dsn, exhaustive_scss, BnbOptions, Decision};
pub use dst::{dreyfus_wagner_dst, scss_two_approx};
pub use transform::{min_vertex_count, split_vertex_weights, vertex_weight_exhaustive, vertexize, SplitInstance, VertexWeightedInstance, Vertexized};
pub use treewidth::{treewidth_exact_small, treewidth_upper, TreeDecomposition, EXACT_TREEWIDTH_LIMIT};
pub use twdp::scss_treewidth_dp;

use crate::graph::{EdgeSolution, GraphError, Weight};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub solution: EdgeSolution,
    pub weight: Weight,
    pub optimal: bool,
    pub nodes_explored: u64,
    /// Best proven lower bound on the optimum (equal to `weight` when optimal).
    pub lower_bound: Weight,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("instance is infeasible")]
    Infeasible,
    #[error("timed out after {nodes} nodes (incumbent {incumbent:?}, lower bound {lower_bound})")]
    Timeout { incumbent: Option<Weight>, lower_bound: Weight, nodes: u64 },
    #[error("no solution of weight at most {bound}")]
    NoneWithin { bound: Weight, nodes: u64 },
    #[error("instance too large for this method: {0}")]
    TooLarge(String),
    #[error("invalid tree decomposition: {0}")]
    BadDecomposition(String),
    #[error("LP failure: {0}")]
    Lp(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
