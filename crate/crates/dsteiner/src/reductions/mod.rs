//! Gadgets and the three hardness reductions.
//!
//! * Grid Tiling → SCSS on planar graphs ([`compose_scss`])
//! * Partitioned Subgraph Isomorphism → SCSS ([`reduce_psi_to_scss`])
//! * Grid Tiling → DSN on planar DAGs ([`reduce_gt_to_dsn`])
//!
//! Every reduction keeps a provenance string per produced vertex and arc
//! and can build the witness solution for a YES certificate of its source.

pub mod compose;
pub mod connector;
pub mod dsn;
pub mod main_gadget;
pub mod psi;

pub use compose::{check_gadget_interface, compose_scss, plant_composable, scss_witness, w_star, GadgetId, GadgetReport, InterfaceReport, ScssComposition};
pub use connector::{
    build_connector, c_star, connector_canonical, connector_connectedness, connector_represents, ConnectorArc, ConnectorGadget,
};
pub use dsn::{b_star, dsn_witness, reduce_gt_to_dsn, DsnReduction};
pub use main_gadget::{build_main, m_star, main_canonical, main_connectedness, main_represents, BorderPolicy, MainArc, MainGadget};
pub use psi::{psi_budget, psi_witness, reduce_psi_to_scss, PsiReduction};

use crate::graph::{Instance, Weight};
use crate::problems::Pair;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{0}")]
    BadSize(String),
    #[error("{0}")]
    IndexOutOfRange(String),
    #[error("pair {0:?} violates the border rule of the main gadget")]
    BorderPair(Pair),
    #[error("pair {0:?} is not in the represented set")]
    PairNotInSet(Pair),
    #[error("arc {0} does not belong to the gadget")]
    ForeignArc(usize),
    #[error("edge set violates the connectedness property")]
    NotConnected,
    #[error("grid tiling instance is not normalized: {0}")]
    Unnormalized(String),
    #[error("pattern graph is disconnected")]
    DisconnectedPattern,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

/// A produced instance with its budget and provenance, independent of which
/// reduction built it.
#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub reduction: &'static str,
    pub instance: Instance,
    pub budget: Weight,
    /// Per vertex: gadget id and construction coordinate, e.g. `HCG[1,2] v_3^4`.
    pub vertex_provenance: Vec<String>,
    /// Per arc: gadget id and arc family.
    pub arc_provenance: Vec<String>,
    /// Named parameters of the source instance and the construction.
    pub parameters: Vec<(String, String)>,
}

impl ReductionArtifact {
    /// Sidecar text: parameters, budget, terminal count, provenance table.
    pub fn metadata(&self) -> String {
        let mut out = String::new();
        writeln!(out, "reduction {}", self.reduction).unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "param {k} {v}").unwrap();
        }
        writeln!(out, "budget {}", self.budget).unwrap();
        let (kind, count) = match &self.instance {
            Instance::Scss(i) => ("terminals", i.k()),
            Instance::Dsn(i) => ("demands", i.k()),
        };
        writeln!(out, "{kind} {count}").unwrap();
        let g = self.instance.graph();
        writeln!(out, "vertices {}", g.vertex_count()).unwrap();
        writeln!(out, "arcs {}", g.arc_count()).unwrap();
        for (v, p) in self.vertex_provenance.iter().enumerate() {
            writeln!(out, "vertex {v} {p}").unwrap();
        }
        for (a, p) in self.arc_provenance.iter().enumerate() {
            writeln!(out, "arc {a} {p}").unwrap();
        }
        out
    }
}
