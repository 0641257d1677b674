//! Optimality oracles for the two gadgets.
//!
//! The disjunctive connectedness conditions become four concrete demands by
//! adding weight-0 super-sources and super-sinks; the auxiliary arcs are
//! stripped before any representation check.

use crate::graph::{ArcId, DsnInstance, EdgeSolution, VertexId, Weight, WeightedDigraph};
use crate::reductions::{connector_represents, main_represents, ConnectorGadget, MainGadget};
use crate::solvers::{exact_dsn, BnbOptions, SolveError};
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub minimum: Weight,
    pub target: Weight,
    /// Distinct optima found, each with what it represents (`None` if nothing).
    pub optima: Vec<(EdgeSolution, Option<String>)>,
    pub nodes: u64,
}

impl OracleOutcome {
    pub fn all_represent(&self) -> bool {
        self.optima.iter().all(|(_, r)| r.is_some())
    }
}

struct Augmented {
    instance: DsnInstance,
    /// Gadget arc id for each copied arc; `None` for auxiliary arcs.
    origin: Vec<Option<ArcId>>,
}

/// Copies `g` minus `excluded`, adds one super-source per entry of `sources`
/// (arcs into each listed vertex) and one super-sink per entry of `sinks`.
/// Demand endpoints index `Src(i)`, `Snk(i)` or a gadget vertex.
fn augment(g: &WeightedDigraph, excluded: &[ArcId], sources: &[Vec<VertexId>], sinks: &[Vec<VertexId>], demands: &[(End, End)]) -> Augmented {
    let mut h = WeightedDigraph::with_vertices(g.vertex_count());
    let mut origin = Vec::new();
    for (a, arc) in g.arcs().iter().enumerate() {
        if !excluded.contains(&a) {
            h.add_arc(arc.tail, arc.head, arc.weight).expect("copied vertices");
            origin.push(Some(a));
        }
    }
    let src: Vec<VertexId> = sources
        .iter()
        .map(|vs| {
            let s = h.add_vertex();
            for &v in vs {
                h.add_arc(s, v, 0).expect("fresh vertex");
                origin.push(None);
            }
            s
        })
        .collect();
    let snk: Vec<VertexId> = sinks
        .iter()
        .map(|vs| {
            let t = h.add_vertex();
            for &v in vs {
                h.add_arc(v, t, 0).expect("fresh vertex");
                origin.push(None);
            }
            t
        })
        .collect();
    let end = |e: End| match e {
        End::Src(i) => src[i],
        End::Snk(i) => snk[i],
        End::V(v) => v,
    };
    let demands = demands.iter().map(|&(a, b)| (end(a), end(b))).collect();
    Augmented { instance: DsnInstance::new(h, demands).expect("valid demands"), origin }
}

#[derive(Debug, Clone, Copy)]
enum End {
    Src(usize),
    Snk(usize),
    V(VertexId),
}

fn search(
    gadget_graph: &WeightedDigraph,
    target: Weight,
    build: &dyn Fn(&[ArcId]) -> Augmented,
    represents: &dyn Fn(&EdgeSolution) -> Option<String>,
    timeout: Option<Duration>,
) -> Result<OracleOutcome, SolveError> {
    let start = Instant::now();
    let remaining = || timeout.map(|t| t.saturating_sub(start.elapsed()));
    let project = |aug: &Augmented, sol: &EdgeSolution| {
        EdgeSolution::new(gadget_graph, sol.arcs().iter().filter_map(|&a| aug.origin[a])).expect("gadget arcs")
    };
    let base = build(&[]);
    let first = exact_dsn(&base.instance, &BnbOptions { timeout: remaining(), ..BnbOptions::default() })?;
    let minimum = first.weight;
    let mut nodes = first.nodes_explored;
    let first_sol = project(&base, &first.solution);
    let mut optima = vec![(first_sol.clone(), represents(&first_sol))];
    // more optima: forbid each positive arc of the first one in turn
    for &a in first_sol.arcs() {
        if gadget_graph.arc(a).weight == 0 {
            continue;
        }
        let aug = build(&[a]);
        let opts = BnbOptions { upper_bound: Some(minimum), timeout: remaining(), ..BnbOptions::default() };
        match exact_dsn(&aug.instance, &opts) {
            Ok(r) => {
                nodes += r.nodes_explored;
                let sol = project(&aug, &r.solution);
                if r.weight == minimum && !optima.iter().any(|(s, _)| *s == sol) {
                    let rep = represents(&sol);
                    optima.push((sol, rep));
                }
            }
            Err(SolveError::NoneWithin { nodes: k, .. }) => nodes += k,
            Err(SolveError::Infeasible) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(OracleOutcome { minimum, target, optima, nodes })
}

/// Minimum weight over edge sets with the connector connectedness property,
/// with the arcs in `excluded` deleted from the gadget.
pub fn connector_oracle(g: &ConnectorGadget, excluded: &[ArcId], timeout: Option<Duration>) -> Result<OracleOutcome, SolveError> {
    let build = |extra: &[ArcId]| {
        let ex: Vec<ArcId> = excluded.iter().chain(extra).copied().collect();
        augment(
            &g.graph,
            &ex,
            std::slice::from_ref(&g.sources),
            std::slice::from_ref(&g.sinks),
            &[(End::Src(0), End::V(g.p)), (End::Src(0), End::V(g.q)), (End::V(g.p), End::Snk(0)), (End::V(g.q), End::Snk(0))],
        )
    };
    let represents = |sol: &EdgeSolution| connector_represents(g, sol).ok().flatten().map(|i| i.to_string());
    search(&g.graph, g.target, &build, &represents, timeout)
}

pub fn main_oracle(g: &MainGadget, excluded: &[ArcId], timeout: Option<Duration>) -> Result<OracleOutcome, SolveError> {
    let lt: Vec<VertexId> = g.left.iter().chain(&g.top).copied().collect();
    let rb: Vec<VertexId> = g.right.iter().chain(&g.bottom).copied().collect();
    let build = |extra: &[ArcId]| {
        let ex: Vec<ArcId> = excluded.iter().chain(extra).copied().collect();
        augment(
            &g.graph,
            &ex,
            &[g.left.clone(), g.top.clone(), lt.clone()],
            &[rb.clone(), g.right.clone(), g.bottom.clone()],
            &[(End::Src(0), End::Snk(0)), (End::Src(1), End::Snk(0)), (End::Src(2), End::Snk(1)), (End::Src(2), End::Snk(2))],
        )
    };
    let represents = |sol: &EdgeSolution| main_represents(g, sol).ok().flatten().map(|(i, j)| format!("({i},{j})"));
    search(&g.graph, g.target, &build, &represents, timeout)
}
