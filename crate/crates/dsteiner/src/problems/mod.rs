//! Source problems of the reductions, with brute-force solvers used as ground truth.

pub mod gridtiling;
pub mod psi;

pub use gridtiling::{
    check_assignment, denormalize_assignment, normalize_gridtiling, parse_gridtiling, plant_gridtiling,
    serialize_gridtiling, solve_gridtiling, GridTilingAssignment, GridTilingError, GridTilingInstance, Pair,
    PlantAnswer,
};
pub use psi::{
    check_psi_assignment, parse_psi, random_psi, serialize_psi, solve_psi, PsiAssignment, PsiError, PsiInstance,
};
