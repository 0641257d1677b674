//! Structure of edge-minimal SCSS solutions.
//!
//! A minimal solution `M` with root terminal `r` is the union of an
//! in-arborescence and an out-arborescence at `r`. Removing the set `W`
//! (terminals, branching points, endpoints of shared paths that carry one)
//! leaves components of treewidth at most 2.

pub mod decompose;
pub mod tw2;
pub mod verify;
pub mod wset;

pub use decompose::{decompose, essential_paths, is_minimal, minimalize, shared_paths, ArborescencePair, EssentialPath, Side, SharedPath};
pub use tw2::{subdivide, treewidth_le_2};
pub use verify::{verify_structure, ComponentReport, StructureReport};
pub use wset::{build_w_set, w_components, WComponent, WKind, WSet};

use crate::graph::{GraphError, VertexId};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("edge set is not a feasible solution")]
    Infeasible,
    #[error("edge set is not minimal: arc {0} is redundant")]
    NotMinimal(usize),
    #[error("vertex {0} is not a terminal")]
    NotTerminal(VertexId),
    #[error("arborescence union differs from the solution")]
    UnionMismatch,
    #[error("shared component is not a directed path: {0}")]
    NotAPath(String),
    #[error("|W| = {size} exceeds 9k = {bound}")]
    BoundViolated { size: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
