//! Minimalization, arborescence decomposition, essential and shared paths.

use super::StructureError;
use crate::graph::{scss_feasible_mask, ArcId, EdgeSolution, ScssInstance, VertexId, WeightedDigraph};
use std::collections::VecDeque;

/// Deletes arcs in ascending id order while the set stays feasible, until
/// no single deletion is possible.
pub fn minimalize(instance: &ScssInstance, sol: &EdgeSolution) -> Result<EdgeSolution, StructureError> {
    sol.check(&instance.graph)?;
    let g = &instance.graph;
    let mut mask = sol.mask(g);
    if !scss_feasible_mask(g, &instance.terminals, &mask) {
        return Err(StructureError::Infeasible);
    }
    loop {
        let mut changed = false;
        for a in 0..g.arc_count() {
            if mask[a] {
                mask[a] = false;
                if scss_feasible_mask(g, &instance.terminals, &mask) {
                    changed = true;
                } else {
                    mask[a] = true;
                }
            }
        }
        if !changed {
            return Ok(EdgeSolution::from_mask(g, &mask));
        }
    }
}

/// `Ok(())` if feasible and no single arc can be dropped.
pub fn is_minimal(instance: &ScssInstance, sol: &EdgeSolution) -> Result<(), StructureError> {
    sol.check(&instance.graph)?;
    let g = &instance.graph;
    let mut mask = sol.mask(g);
    if !scss_feasible_mask(g, &instance.terminals, &mask) {
        return Err(StructureError::Infeasible);
    }
    for &a in sol.arcs() {
        mask[a] = false;
        if scss_feasible_mask(g, &instance.terminals, &mask) {
            return Err(StructureError::NotMinimal(a));
        }
        mask[a] = true;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArborescencePair {
    pub root: VertexId,
    /// Every non-root vertex has exactly one arc towards `root`.
    pub a_in: Vec<ArcId>,
    /// Every non-root vertex has exactly one arc from the `root` side.
    pub a_out: Vec<ArcId>,
}

impl ArborescencePair {
    pub fn arcs(&self, side: Side) -> &[ArcId] {
        match side {
            Side::In => &self.a_in,
            Side::Out => &self.a_out,
        }
    }

    /// In-degree at least 2 in `A_in`, out-degree at least 2 in `A_out`.
    pub fn branching_points(&self, g: &WeightedDigraph, side: Side) -> Vec<VertexId> {
        let mut deg = vec![0usize; g.vertex_count()];
        for &a in self.arcs(side) {
            let arc = g.arc(a);
            match side {
                Side::In => deg[arc.head] += 1,
                Side::Out => deg[arc.tail] += 1,
            }
        }
        (0..g.vertex_count()).filter(|&v| deg[v] >= 2).collect()
    }

    pub fn vertices(&self, g: &WeightedDigraph, side: Side) -> Vec<bool> {
        let mut on = vec![false; g.vertex_count()];
        on[self.root] = true;
        for &a in self.arcs(side) {
            on[g.arc(a).tail] = true;
            on[g.arc(a).head] = true;
        }
        on
    }
}

/// Breadth-first arborescence inside `mask`, then non-terminal leaves pruned.
fn arborescence(g: &WeightedDigraph, mask: &[bool], root: VertexId, is_terminal: &[bool], side: Side) -> Vec<ArcId> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<ArcId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let adj = match side {
            Side::Out => g.out_arcs(v),
            Side::In => g.in_arcs(v),
        };
        for &a in adj {
            if !mask[a] {
                continue;
            }
            let u = match side {
                Side::Out => g.arc(a).head,
                Side::In => g.arc(a).tail,
            };
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(a);
                queue.push_back(u);
            }
        }
    }
    // children count towards the leaves
    let mut kids = vec![0usize; n];
    let toward_root = |a: ArcId| match side {
        Side::Out => g.arc(a).tail,
        Side::In => g.arc(a).head,
    };
    for a in parent.iter().flatten() {
        kids[toward_root(*a)] += 1;
    }
    let mut alive: Vec<bool> = parent.iter().map(Option::is_some).collect();
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| alive[v] && kids[v] == 0 && !is_terminal[v]).collect();
    while let Some(v) = stack.pop() {
        alive[v] = false;
        let p = toward_root(parent[v].expect("alive vertices have parents"));
        kids[p] -= 1;
        if p != root && kids[p] == 0 && !is_terminal[p] {
            stack.push(p);
        }
    }
    let mut arcs: Vec<ArcId> = (0..n).filter(|&v| alive[v]).map(|v| parent[v].expect("alive")).collect();
    arcs.sort_unstable();
    arcs
}

/// Splits a minimal solution into in- and out-arborescences rooted at `root`.
pub fn decompose(instance: &ScssInstance, m: &EdgeSolution, root: VertexId) -> Result<ArborescencePair, StructureError> {
    let g = &instance.graph;
    if !instance.terminals.contains(&root) {
        return Err(StructureError::NotTerminal(root));
    }
    m.check(g)?;
    let mask = m.mask(g);
    if !scss_feasible_mask(g, &instance.terminals, &mask) {
        return Err(StructureError::Infeasible);
    }
    let mut is_terminal = vec![false; g.vertex_count()];
    for &t in &instance.terminals {
        is_terminal[t] = true;
    }
    let a_out = arborescence(g, &mask, root, &is_terminal, Side::Out);
    let a_in = arborescence(g, &mask, root, &is_terminal, Side::In);
    let mut union: Vec<ArcId> = a_in.iter().chain(&a_out).copied().collect();
    union.sort_unstable();
    union.dedup();
    if union != m.arcs() {
        return Err(StructureError::UnionMismatch);
    }
    Ok(ArborescencePair { root, a_in, a_out })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialPath {
    pub side: Side,
    pub arcs: Vec<ArcId>,
    /// `arcs.len() + 1` vertices in path order.
    pub vertices: Vec<VertexId>,
}

/// Maximal paths of one arborescence between terminals and its branching points.
pub fn essential_paths(g: &WeightedDigraph, pair: &ArborescencePair, terminals: &[VertexId], side: Side) -> Vec<EssentialPath> {
    let n = g.vertex_count();
    let mut key = vec![false; n];
    for &t in terminals {
        key[t] = true;
    }
    key[pair.root] = true;
    for b in pair.branching_points(g, side) {
        key[b] = true;
    }
    let mut next: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for &a in pair.arcs(side) {
        next[g.arc(a).tail].push(a);
    }
    let on = pair.vertices(g, side);
    let mut out = Vec::new();
    for u in 0..n {
        if !key[u] || !on[u] {
            continue;
        }
        for &first in &next[u] {
            let mut arcs = vec![first];
            let mut vertices = vec![u, g.arc(first).head];
            let mut v = g.arc(first).head;
            while !key[v] {
                let a = next[v][0];
                arcs.push(a);
                v = g.arc(a).head;
                vertices.push(v);
            }
            out.push(EssentialPath { side, arcs, vertices });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedPath {
    /// Path order; a single vertex when no shared arc is involved.
    pub vertices: Vec<VertexId>,
    pub arcs: Vec<ArcId>,
}

/// Components of the intersection of the two arborescences, each checked to be a directed path.
pub fn shared_paths(g: &WeightedDigraph, pair: &ArborescencePair) -> Result<Vec<SharedPath>, StructureError> {
    let n = g.vertex_count();
    let on_in = pair.vertices(g, Side::In);
    let on_out = pair.vertices(g, Side::Out);
    let mut in_out = vec![false; g.arc_count()];
    for &a in &pair.a_in {
        in_out[a] = true;
    }
    let shared: Vec<ArcId> = pair.a_out.iter().copied().filter(|&a| in_out[a]).collect();
    let mut succ: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    let mut pred: Vec<Vec<ArcId>> = vec![Vec::new(); n];
    for &a in &shared {
        succ[g.arc(a).tail].push(a);
        pred[g.arc(a).head].push(a);
    }
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if !(on_in[v] && on_out[v]) || done[v] {
            continue;
        }
        // undirected sweep of the component
        let mut comp = vec![v];
        done[v] = true;
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &a in succ[x].iter().chain(&pred[x]) {
                for y in [g.arc(a).tail, g.arc(a).head] {
                    if !done[y] {
                        done[y] = true;
                        comp.push(y);
                    }
                }
            }
        }
        let bad = |why: &str| StructureError::NotAPath(format!("{why} at {}", g.name(v)));
        if comp.iter().any(|&x| succ[x].len() > 1 || pred[x].len() > 1) {
            return Err(bad("degree above one"));
        }
        let starts: Vec<VertexId> = comp.iter().copied().filter(|&x| pred[x].is_empty()).collect();
        let [start] = starts[..] else { return Err(bad("no unique start")) };
        let mut vertices = vec![start];
        let mut arcs = Vec::new();
        let mut x = start;
        while let Some(&a) = succ[x].first() {
            arcs.push(a);
            x = g.arc(a).head;
            vertices.push(x);
        }
        if vertices.len() != comp.len() {
            return Err(bad("cycle"));
        }
        out.push(SharedPath { vertices, arcs });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_chord() -> ScssInstance {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 1).unwrap();
        g.add_arc(1, 2, 1).unwrap();
        g.add_arc(2, 0, 1).unwrap();
        g.add_arc(0, 2, 1).unwrap();
        ScssInstance::new(g, vec![0, 1, 2]).unwrap()
    }

    pub(crate) fn bidirected_star(k: usize) -> ScssInstance {
        let mut g = WeightedDigraph::with_vertices(k + 1);
        for t in 1..=k {
            g.add_arc(0, t, 1).unwrap();
            g.add_arc(t, 0, 1).unwrap();
        }
        ScssInstance::new(g, (1..=k).collect()).unwrap()
    }

    #[test]
    fn chord_is_dropped() {
        let inst = triangle_chord();
        let m = minimalize(&inst, &EdgeSolution::all(&inst.graph)).unwrap();
        assert_eq!(m.arcs(), &[0, 1, 2]);
        assert_eq!(minimalize(&inst, &m).unwrap(), m);
        assert!(is_minimal(&inst, &m).is_ok());
        assert_eq!(is_minimal(&inst, &EdgeSolution::all(&inst.graph)), Err(StructureError::NotMinimal(3)));
    }

    #[test]
    fn triangle_decomposition_covers_all_arcs() {
        let inst = triangle_chord();
        let m = EdgeSolution::new(&inst.graph, [0, 1, 2]).unwrap();
        for r in 0..3 {
            let pair = decompose(&inst, &m, r).unwrap();
            assert_eq!(pair.a_in.len(), 2);
            assert_eq!(pair.a_out.len(), 2);
            let paths = shared_paths(&inst.graph, &pair).unwrap();
            assert!(paths.iter().all(|p| p.vertices.len() == p.arcs.len() + 1));
        }
    }

    #[test]
    fn star_splits_by_direction() {
        let inst = bidirected_star(4);
        let m = EdgeSolution::all(&inst.graph);
        let pair = decompose(&inst, &m, 1).unwrap();
        assert!(pair.a_out.iter().all(|&a| inst.graph.arc(a).tail == 0 || inst.graph.arc(a).tail == 1 && inst.graph.arc(a).head == 0));
        assert_eq!(pair.a_out.len(), 4);
        assert_eq!(pair.a_in.len(), 4);
        let ess = essential_paths(&inst.graph, &pair, &inst.terminals, Side::In);
        assert_eq!(ess.len(), 4);
        let mut covered: Vec<ArcId> = ess.iter().flat_map(|p| p.arcs.clone()).collect();
        covered.sort_unstable();
        assert_eq!(covered, pair.a_in);
    }

    #[test]
    fn single_path_is_one_essential_and_one_shared() {
        // bidirected path 0 - 1 - 2 with terminals at the ends
        let mut g = WeightedDigraph::with_vertices(3);
        for (u, v) in [(0, 1), (1, 2)] {
            g.add_arc(u, v, 1).unwrap();
            g.add_arc(v, u, 1).unwrap();
        }
        let inst = ScssInstance::new(g, vec![0, 2]).unwrap();
        let pair = decompose(&inst, &EdgeSolution::all(&inst.graph), 0).unwrap();
        assert_eq!(essential_paths(&inst.graph, &pair, &inst.terminals, Side::In).len(), 1);
        let shared = shared_paths(&inst.graph, &pair).unwrap();
        // the arborescences share vertices but no arcs
        assert!(shared.iter().all(|p| p.arcs.is_empty()));
        assert_eq!(shared.len(), 3);
    }

    #[test]
    fn not_terminal_root() {
        let inst = bidirected_star(2);
        assert_eq!(decompose(&inst, &EdgeSolution::all(&inst.graph), 0), Err(StructureError::NotTerminal(0)));
    }
}
