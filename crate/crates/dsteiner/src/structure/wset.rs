//! The vertex set `W` and the components left after deleting it.

use super::decompose::{shared_paths, ArborescencePair, Side};
use super::StructureError;
use crate::graph::{ArcId, EdgeSolution, VertexId, WeightedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WKind {
    Terminal,
    Branching,
    /// Endpoint of a shared path that carries a terminal or branching point.
    SharedEndpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WSet {
    /// Sorted; `kinds[i]` is the first reason `vertices[i]` was added.
    pub vertices: Vec<VertexId>,
    pub kinds: Vec<WKind>,
}

impl WSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn count(&self, kind: WKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Terminals, branching points of both arborescences, then endpoints of
/// shared paths that contain one of those. Fails if `|W| > 9k`.
pub fn build_w_set(g: &WeightedDigraph, pair: &ArborescencePair, terminals: &[VertexId]) -> Result<WSet, StructureError> {
    let n = g.vertex_count();
    let mut kind: Vec<Option<WKind>> = vec![None; n];
    for &t in terminals {
        kind[t] = Some(WKind::Terminal);
    }
    for side in [Side::In, Side::Out] {
        for b in pair.branching_points(g, side) {
            kind[b].get_or_insert(WKind::Branching);
        }
    }
    let special: Vec<bool> = kind.iter().map(Option::is_some).collect();
    for path in shared_paths(g, pair)? {
        if path.vertices.iter().any(|&v| special[v]) {
            for v in [path.vertices[0], *path.vertices.last().expect("non-empty path")] {
                kind[v].get_or_insert(WKind::SharedEndpoint);
            }
        }
    }
    let vertices: Vec<VertexId> = (0..n).filter(|&v| kind[v].is_some()).collect();
    let kinds = vertices.iter().map(|&v| kind[v].expect("filtered")).collect();
    let w = WSet { vertices, kinds };
    let bound = 9 * terminals.len();
    if w.len() > bound {
        return Err(StructureError::BoundViolated { size: w.len(), bound });
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WComponent {
    pub vertices: Vec<VertexId>,
    /// Arcs of `M` with both ends in the component.
    pub arcs: Vec<ArcId>,
}

/// Connected components of the undirected graph `M - W`.
pub fn w_components(g: &WeightedDigraph, m: &EdgeSolution, w: &[VertexId]) -> Vec<WComponent> {
    let n = g.vertex_count();
    let mut in_m = vec![false; n];
    for v in m.vertices(g) {
        in_m[v] = true;
    }
    for &x in w {
        in_m[x] = false;
    }
    let mut adj: Vec<Vec<(VertexId, ArcId)>> = vec![Vec::new(); n];
    for &a in m.arcs() {
        let arc = g.arc(a);
        if in_m[arc.tail] && in_m[arc.head] {
            adj[arc.tail].push((arc.head, a));
            adj[arc.head].push((arc.tail, a));
        }
    }
    let mut comp_of = vec![usize::MAX; n];
    let mut out: Vec<WComponent> = Vec::new();
    for s in 0..n {
        if !in_m[s] || comp_of[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp_of[s] = id;
        let mut vertices = vec![s];
        let mut arcs = Vec::new();
        let mut i = 0;
        while i < vertices.len() {
            let x = vertices[i];
            i += 1;
            for &(y, a) in &adj[x] {
                if g.arc(a).tail == x {
                    arcs.push(a);
                }
                if comp_of[y] == usize::MAX {
                    comp_of[y] = id;
                    vertices.push(y);
                }
            }
        }
        vertices.sort_unstable();
        arcs.sort_unstable();
        arcs.dedup();
        out.push(WComponent { vertices, arcs });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ScssInstance;
    use crate::structure::decompose;

    #[test]
    fn star_w_is_terminals_and_centre() {
        let k = 5;
        let mut g = WeightedDigraph::with_vertices(k + 1);
        for t in 1..=k {
            g.add_arc(0, t, 1).unwrap();
            g.add_arc(t, 0, 1).unwrap();
        }
        let inst = ScssInstance::new(g, (1..=k).collect()).unwrap();
        let m = EdgeSolution::all(&inst.graph);
        let pair = decompose(&inst, &m, 1).unwrap();
        let w = build_w_set(&inst.graph, &pair, &inst.terminals).unwrap();
        assert_eq!(w.vertices, (0..=k).collect::<Vec<_>>());
        assert_eq!(w.count(WKind::Terminal), k);
        assert!(w_components(&inst.graph, &m, &w.vertices).is_empty());
    }

    #[test]
    fn bidirected_path_keeps_only_terminals() {
        let mut g = WeightedDigraph::with_vertices(5);
        for v in 0..4 {
            g.add_arc(v, v + 1, 1).unwrap();
            g.add_arc(v + 1, v, 1).unwrap();
        }
        let inst = ScssInstance::new(g, vec![0, 4]).unwrap();
        let m = EdgeSolution::all(&inst.graph);
        let pair = decompose(&inst, &m, 0).unwrap();
        let w = build_w_set(&inst.graph, &pair, &inst.terminals).unwrap();
        assert_eq!(w.vertices, vec![0, 4]);
        let comps = w_components(&inst.graph, &m, &w.vertices);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![1, 2, 3]);
        assert_eq!(comps[0].arcs.len(), 4);
        assert_eq!(w_components(&inst.graph, &m, &[]).len(), 1);
    }
}
