//! Directed Steiner problems.
//!
//! Exact and approximate solvers for Strongly Connected Steiner Subgraph
//! (SCSS) and Directed Steiner Network (DSN), the structure of minimal SCSS
//! solutions, and generators for the hardness reductions from Grid Tiling and
//! Partitioned Subgraph Isomorphism.

pub mod graph;
pub mod harness;
pub mod problems;
pub mod reductions;
pub mod solvers;
pub mod structure;
