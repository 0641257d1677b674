//! Weighted directed multigraphs, instance types and solution validation.

mod format;
pub mod generate;
mod planarity;
mod undirected;

pub use format::{parse_instance, parse_solution, serialize_instance, serialize_solution, Instance};
pub use generate::{random_digraph, random_planar_digraph, random_terminals};
pub use planarity::{is_planar, planarity_check};
pub use undirected::UndirectedGraph;

use std::collections::VecDeque;
use thiserror::Error;

pub type VertexId = usize;
pub type ArcId = usize;
pub type Weight = u64;

/// Largest weight accepted by the text format and the builders.
pub const MAX_WEIGHT: Weight = i64::MAX as Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("arc id {0} does not belong to the host graph")]
    UnknownArc(ArcId),
    #[error("weight {0} exceeds 2^63-1")]
    WeightTooLarge(u128),
    #[error("instance needs at least one terminal or demand")]
    Empty,
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(VertexId),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Weight,
}

/// A directed multigraph with nonnegative integer arc weights.
///
/// Vertices are dense ids `0..vertex_count()`. Each vertex may carry a label,
/// which the gadget builders use to record construction coordinates such as
/// `v_3^7`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedDigraph {
    labels: Vec<Option<String>>,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl WeightedDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.labels.push(None);
        self.out_arcs.push(Vec::new());
        self.in_arcs.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_labeled_vertex(&mut self, label: impl Into<String>) -> VertexId {
        let v = self.add_vertex();
        self.labels[v] = Some(label.into());
        v
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.labels[v] = Some(label.into());
        Ok(())
    }

    pub fn add_arc(&mut self, tail: VertexId, head: VertexId, weight: Weight) -> Result<ArcId, GraphError> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if weight > MAX_WEIGHT {
            return Err(GraphError::WeightTooLarge(weight as u128));
        }
        let id = self.arcs.len();
        self.arcs.push(Arc { tail, head, weight });
        self.out_arcs[tail].push(id);
        self.in_arcs[head].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn arc(&self, a: ArcId) -> Arc {
        self.arcs[a]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v]
    }

    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.in_arcs[v]
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v).and_then(|l| l.as_deref())
    }

    /// Display name: the label if any, else the numeric id.
    pub fn name(&self, v: VertexId) -> String {
        match self.label(v) {
            Some(l) => l.to_string(),
            None => v.to_string(),
        }
    }

    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    /// First arc from `tail` to `head`, if any.
    pub fn find_arc(&self, tail: VertexId, head: VertexId) -> Option<ArcId> {
        self.out_arcs
            .get(tail)?
            .iter()
            .copied()
            .find(|&a| self.arcs[a].head == head)
    }

    pub fn total_weight(&self) -> Weight {
        self.arcs.iter().fold(0, |s: Weight, a| s.saturating_add(a.weight))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// The graph with every arc reversed. Arc ids are preserved.
    pub fn reversed(&self) -> WeightedDigraph {
        let mut g = WeightedDigraph::with_vertices(self.vertex_count());
        g.labels = self.labels.clone();
        for a in &self.arcs {
            g.add_arc(a.head, a.tail, a.weight).expect("same vertex set");
        }
        g
    }

    /// Returns a topological order, or `None` when the graph has a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let mut indeg: Vec<usize> = self.in_arcs.iter().map(|a| a.len()).collect();
        let mut queue: VecDeque<VertexId> = self.vertices().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertex_count());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &a in &self.out_arcs[v] {
                let h = self.arcs[a].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push_back(h);
                }
            }
        }
        (order.len() == self.vertex_count()).then_some(order)
    }

    /// Single-source shortest path distances over the arcs allowed by `mask`
    /// (all arcs when `None`). Unreachable vertices get `None`.
    pub fn dijkstra(&self, source: VertexId, mask: Option<&[bool]>) -> Vec<Option<Weight>> {
        self.dijkstra_dir(source, mask, false)
    }

    /// Distances *to* `target` from every vertex.
    pub fn dijkstra_to(&self, target: VertexId, mask: Option<&[bool]>) -> Vec<Option<Weight>> {
        self.dijkstra_dir(target, mask, true)
    }

    fn dijkstra_dir(&self, s: VertexId, mask: Option<&[bool]>, backward: bool) -> Vec<Option<Weight>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut dist: Vec<Option<Weight>> = vec![None; self.vertex_count()];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0);
        heap.push(Reverse((0, s)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v] != Some(d) {
                continue;
            }
            let adj = if backward { &self.in_arcs[v] } else { &self.out_arcs[v] };
            for &a in adj {
                if mask.is_some_and(|m| !m[a]) {
                    continue;
                }
                let arc = self.arcs[a];
                let u = if backward { arc.tail } else { arc.head };
                let nd = d.saturating_add(arc.weight);
                if dist[u].is_none_or(|old| nd < old) {
                    dist[u] = Some(nd);
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        dist
    }

    /// Vertices reachable from `s` (forward) or reaching `s` (backward) over allowed arcs.
    pub fn reach_set(&self, s: VertexId, mask: Option<&[bool]>, backward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            let adj = if backward { &self.in_arcs[v] } else { &self.out_arcs[v] };
            for &a in adj {
                if mask.is_some_and(|m| !m[a]) {
                    continue;
                }
                let arc = self.arcs[a];
                let u = if backward { arc.tail } else { arc.head };
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

/// A set of arcs of a host graph together with its total weight.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSolution {
    arcs: Vec<ArcId>,
    weight: Weight,
}

impl EdgeSolution {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a solution from arc ids; duplicates are merged.
    pub fn new(graph: &WeightedDigraph, arcs: impl IntoIterator<Item = ArcId>) -> Result<Self, GraphError> {
        let mut v: Vec<ArcId> = arcs.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        let mut weight: Weight = 0;
        for &a in &v {
            if a >= graph.arc_count() {
                return Err(GraphError::UnknownArc(a));
            }
            weight = weight.saturating_add(graph.arc(a).weight);
        }
        Ok(Self { arcs: v, weight })
    }

    pub fn all(graph: &WeightedDigraph) -> Self {
        Self::new(graph, 0..graph.arc_count()).expect("all arcs exist")
    }

    pub fn from_mask(graph: &WeightedDigraph, mask: &[bool]) -> Self {
        Self::new(graph, mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)).expect("mask sized to graph")
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, a: ArcId) -> bool {
        self.arcs.binary_search(&a).is_ok()
    }

    pub fn mask(&self, graph: &WeightedDigraph) -> Vec<bool> {
        let mut m = vec![false; graph.arc_count()];
        for &a in &self.arcs {
            m[a] = true;
        }
        m
    }

    pub fn union(&self, graph: &WeightedDigraph, other: &EdgeSolution) -> EdgeSolution {
        EdgeSolution::new(graph, self.arcs.iter().chain(other.arcs.iter()).copied()).expect("arcs from same host")
    }

    pub fn without(&self, graph: &WeightedDigraph, arc: ArcId) -> EdgeSolution {
        EdgeSolution::new(graph, self.arcs.iter().copied().filter(|&a| a != arc)).expect("arcs from same host")
    }

    /// Vertices touched by at least one arc.
    pub fn vertices(&self, graph: &WeightedDigraph) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = self.arcs.iter().flat_map(|&a| [graph.arc(a).tail, graph.arc(a).head]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Fails on arc ids outside `graph`.
    pub fn check(&self, graph: &WeightedDigraph) -> Result<(), GraphError> {
        match self.arcs.iter().find(|&&a| a >= graph.arc_count()) {
            Some(&a) => Err(GraphError::UnknownArc(a)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScssInstance {
    pub graph: WeightedDigraph,
    pub terminals: Vec<VertexId>,
}

impl ScssInstance {
    pub fn new(graph: WeightedDigraph, terminals: Vec<VertexId>) -> Result<Self, GraphError> {
        if terminals.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = vec![false; graph.vertex_count()];
        for &t in &terminals {
            graph.check_vertex(t)?;
            if seen[t] {
                return Err(GraphError::DuplicateTerminal(t));
            }
            seen[t] = true;
        }
        Ok(Self { graph, terminals })
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    /// The equivalent DSN instance: demands `(r, t)` and `(t, r)` for the first
    /// terminal `r` and every other terminal `t`.
    pub fn as_dsn(&self) -> DsnInstance {
        let r = self.terminals[0];
        let mut demands = Vec::new();
        for &t in &self.terminals[1..] {
            demands.push((r, t));
            demands.push((t, r));
        }
        DsnInstance { graph: self.graph.clone(), demands }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsnInstance {
    pub graph: WeightedDigraph,
    pub demands: Vec<(VertexId, VertexId)>,
}

impl DsnInstance {
    pub fn new(graph: WeightedDigraph, demands: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        if demands.is_empty() {
            return Err(GraphError::Empty);
        }
        for &(s, t) in &demands {
            graph.check_vertex(s)?;
            graph.check_vertex(t)?;
        }
        Ok(Self { graph, demands })
    }

    pub fn k(&self) -> usize {
        self.demands.len()
    }
}

/// Is there a directed `u -> v` path using only arcs of `allowed`?
pub fn reachable(graph: &WeightedDigraph, allowed: &EdgeSolution, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
    graph.check_vertex(u)?;
    graph.check_vertex(v)?;
    allowed.check(graph)?;
    if u == v {
        return Ok(true);
    }
    let mask = allowed.mask(graph);
    Ok(graph.reach_set(u, Some(&mask), false)[v])
}

/// Mask-based SCSS feasibility: every terminal reaches and is reached from the first one.
pub fn scss_feasible_mask(graph: &WeightedDigraph, terminals: &[VertexId], mask: &[bool]) -> bool {
    let Some(&r) = terminals.first() else { return true };
    let fwd = graph.reach_set(r, Some(mask), false);
    if !terminals.iter().all(|&t| fwd[t]) {
        return false;
    }
    let bwd = graph.reach_set(r, Some(mask), true);
    terminals.iter().all(|&t| bwd[t])
}

pub fn dsn_feasible_mask(graph: &WeightedDigraph, demands: &[(VertexId, VertexId)], mask: &[bool]) -> bool {
    let mut sources: Vec<VertexId> = demands.iter().map(|d| d.0).collect();
    sources.sort_unstable();
    sources.dedup();
    sources.into_iter().all(|s| {
        let seen = graph.reach_set(s, Some(mask), false);
        demands.iter().filter(|d| d.0 == s).all(|d| seen[d.1])
    })
}

/// Checks that every ordered terminal pair is connected inside `sol`.
pub fn validate_scss(instance: &ScssInstance, sol: &EdgeSolution) -> Result<bool, GraphError> {
    sol.check(&instance.graph)?;
    Ok(scss_feasible_mask(&instance.graph, &instance.terminals, &sol.mask(&instance.graph)))
}

pub fn validate_dsn(instance: &DsnInstance, sol: &EdgeSolution) -> Result<bool, GraphError> {
    sol.check(&instance.graph)?;
    Ok(dsn_feasible_mask(&instance.graph, &instance.demands, &sol.mask(&instance.graph)))
}
