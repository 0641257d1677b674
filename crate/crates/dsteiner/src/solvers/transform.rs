//! Moving between edge weights, vertex weights and vertex counts.

use super::{exact_dsn, BnbOptions, SolveError};
use crate::graph::{dsn_feasible_mask, DsnInstance, EdgeSolution, Instance, ScssInstance, VertexId, Weight, WeightedDigraph};
use std::time::Duration;

/// A subdivided, vertex-unweighted copy of an edge-weighted instance.
#[derive(Debug, Clone)]
pub struct Vertexized {
    pub instance: Instance,
    /// `C·n + n` vertices
    pub budget: usize,
    /// Vertex count of the source graph.
    pub n: usize,
    /// Internal vertices of each source arc, in path order.
    pub arc_paths: Vec<Vec<VertexId>>,
}

/// Replaces each arc of weight `ℓ` by a path through `n·ℓ` new vertices,
/// where `n` is the source vertex count. Every produced arc has weight 0.
pub fn vertexize(instance: &Instance, budget: Weight) -> Vertexized {
    let src = instance.graph();
    let n = src.vertex_count();
    let mut g = WeightedDigraph::with_vertices(n);
    for v in src.vertices() {
        g.set_label(v, src.name(v)).expect("vertex exists");
    }
    let mut arc_paths = Vec::with_capacity(src.arc_count());
    for (a, arc) in src.arcs().iter().enumerate() {
        let inner: Vec<VertexId> = (0..n * arc.weight as usize).map(|i| g.add_labeled_vertex(format!("a{a}.{i}"))).collect();
        let mut prev = arc.tail;
        for &x in &inner {
            g.add_arc(prev, x, 0).expect("fresh vertex");
            prev = x;
        }
        g.add_arc(prev, arc.head, 0).expect("vertex exists");
        arc_paths.push(inner);
    }
    let instance = match instance {
        Instance::Scss(i) => Instance::Scss(ScssInstance::new(g, i.terminals.clone()).expect("terminals kept")),
        Instance::Dsn(i) => Instance::Dsn(DsnInstance::new(g, i.demands.clone()).expect("demands kept")),
    };
    Vertexized { instance, budget: budget as usize * n + n, n, arc_paths }
}

/// An instance whose cost sits on vertices; arc weights are ignored.
#[derive(Debug, Clone)]
pub struct VertexWeightedInstance {
    pub instance: Instance,
    pub vertex_weight: Vec<Weight>,
}

impl VertexWeightedInstance {
    /// Every vertex costs 1.
    pub fn unit(instance: Instance) -> Self {
        let n = instance.graph().vertex_count();
        Self { instance, vertex_weight: vec![1; n] }
    }

    /// Cost of the vertex set spanned by `arcs` plus all terminals.
    pub fn cost_of(&self, arcs: &EdgeSolution) -> Weight {
        let g = self.instance.graph();
        let mut used = vec![false; g.vertex_count()];
        for v in arcs.vertices(g).into_iter().chain(self.instance.required_vertices()) {
            used[v] = true;
        }
        used.iter().zip(&self.vertex_weight).filter(|(u, _)| **u).map(|(_, w)| w).sum()
    }
}

#[derive(Debug, Clone)]
pub struct SplitInstance {
    pub instance: Instance,
    /// Weight of the terminals, which every solution pays.
    pub offset: Weight,
    /// `(u⁻, u⁺)` for each non-terminal source vertex; terminals map to themselves twice.
    pub halves: Vec<(VertexId, VertexId)>,
    /// The subdivision vertex of each source arc.
    pub dummies: Vec<VertexId>,
}

/// Edge-weighted equivalent of a vertex-weighted instance.
///
/// Each arc is first subdivided by a weight-0 vertex; then each non-terminal
/// `u` of weight `W` becomes `u⁻ → u⁺` with weight `W`, in-arcs entering `u⁻`
/// and out-arcs leaving `u⁺`. All other arcs weigh 0.
pub fn split_vertex_weights(vw: &VertexWeightedInstance) -> SplitInstance {
    let src = vw.instance.graph();
    let required = vw.instance.required_vertices();
    let mut is_req = vec![false; src.vertex_count()];
    for &t in &required {
        is_req[t] = true;
    }
    let mut g = WeightedDigraph::with_vertices(src.vertex_count());
    let mut halves = Vec::with_capacity(src.vertex_count());
    for u in src.vertices() {
        if is_req[u] {
            g.set_label(u, src.name(u)).expect("vertex exists");
            halves.push((u, u));
        } else {
            g.set_label(u, format!("{}-", src.name(u))).expect("vertex exists");
            let plus = g.add_labeled_vertex(format!("{}+", src.name(u)));
            g.add_arc(u, plus, vw.vertex_weight[u]).expect("vertices exist");
            halves.push((u, plus));
        }
    }
    let mut dummies = Vec::with_capacity(src.arc_count());
    for (a, arc) in src.arcs().iter().enumerate() {
        let d = g.add_labeled_vertex(format!("d{a}"));
        g.add_arc(halves[arc.tail].1, d, 0).expect("vertices exist");
        g.add_arc(d, halves[arc.head].0, 0).expect("vertices exist");
        dummies.push(d);
    }
    let instance = match &vw.instance {
        Instance::Scss(i) => Instance::Scss(ScssInstance::new(g, i.terminals.clone()).expect("terminals kept")),
        Instance::Dsn(i) => Instance::Dsn(DsnInstance::new(g, i.demands.clone()).expect("demands kept")),
    };
    let offset = required.iter().map(|&t| vw.vertex_weight[t]).sum();
    SplitInstance { instance, offset, halves, dummies }
}

/// Fewest vertices of any feasible subgraph (terminals included), by exact
/// search on the unit-weight split instance.
pub fn min_vertex_count(instance: &Instance, timeout: Option<Duration>) -> Result<usize, SolveError> {
    let split = split_vertex_weights(&VertexWeightedInstance::unit(instance.clone()));
    let r = exact_dsn(&split.instance.to_dsn(), &BnbOptions { timeout, ..BnbOptions::default() })?;
    Ok((r.weight + split.offset) as usize)
}

/// Cheapest feasible vertex set by enumerating all supersets of the terminals.
pub fn vertex_weight_exhaustive(vw: &VertexWeightedInstance) -> Result<Weight, SolveError> {
    let g = vw.instance.graph();
    let n = g.vertex_count();
    if n > 22 {
        return Err(SolveError::TooLarge(format!("{n} vertices")));
    }
    let dsn = vw.instance.to_dsn();
    let req: u32 = vw.instance.required_vertices().iter().fold(0, |m, &t| m | 1 << t);
    let mut best: Option<Weight> = None;
    for x in 0u32..(1 << n) {
        if x & req != req {
            continue;
        }
        let w: Weight = (0..n).filter(|v| x >> v & 1 == 1).map(|v| vw.vertex_weight[v]).sum();
        if best.is_some_and(|b| w >= b) {
            continue;
        }
        let mask: Vec<bool> = g.arcs().iter().map(|a| x >> a.tail & 1 == 1 && x >> a.head & 1 == 1).collect();
        if dsn_feasible_mask(g, &dsn.demands, &mask) {
            best = Some(w);
        }
    }
    best.ok_or(SolveError::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::exact_scss;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_arc_rule() {
        let mut g = WeightedDigraph::with_vertices(2);
        g.add_arc(0, 1, 2).unwrap();
        let inst = Instance::Dsn(DsnInstance::new(g, vec![(0, 1)]).unwrap());
        let vz = vertexize(&inst, 2);
        assert_eq!(vz.arc_paths[0].len(), 4);
        assert_eq!(vz.budget, 6);
        assert_eq!(min_vertex_count(&vz.instance, None).unwrap(), 6);
        assert_eq!(vertexize(&inst, 1).budget, 4);
    }

    #[test]
    fn zero_weight_arcs_get_no_vertices() {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 0).unwrap();
        g.add_arc(1, 2, 3).unwrap();
        let inst = Instance::Dsn(DsnInstance::new(g, vec![(0, 2)]).unwrap());
        let vz = vertexize(&inst, 3);
        assert!(vz.arc_paths[0].is_empty());
        assert_eq!(vz.instance.graph().vertex_count(), 3 + 9);
    }

    #[test]
    fn split_single_nonterminal() {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 0).unwrap();
        g.add_arc(1, 2, 0).unwrap();
        let inst = Instance::Dsn(DsnInstance::new(g, vec![(0, 2)]).unwrap());
        let vw = VertexWeightedInstance { instance: inst, vertex_weight: vec![0, 5, 0] };
        let split = split_vertex_weights(&vw);
        let sg = split.instance.graph();
        let (um, up) = split.halves[1];
        let inner = sg.find_arc(um, up).unwrap();
        assert_eq!(sg.arc(inner).weight, 5);
        assert!(sg.arcs().iter().enumerate().all(|(a, x)| a == inner || x.weight == 0));
        let r = exact_dsn(&split.instance.to_dsn(), &BnbOptions::default()).unwrap();
        assert_eq!(r.weight + split.offset, 5);
        assert_eq!(vertex_weight_exhaustive(&vw).unwrap(), 5);

        let zero = VertexWeightedInstance { vertex_weight: vec![0; 3], ..vw };
        let split = split_vertex_weights(&zero);
        assert_eq!(exact_dsn(&split.instance.to_dsn(), &BnbOptions::default()).unwrap().weight, 0);
    }

    #[test]
    fn split_matches_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..40 {
            let mut g = WeightedDigraph::with_vertices(6);
            for _ in 0..12 {
                let (u, v) = (rng.gen_range(0..6), rng.gen_range(0..6));
                if u != v && g.find_arc(u, v).is_none() {
                    g.add_arc(u, v, 0).unwrap();
                }
            }
            let inst = Instance::Scss(ScssInstance::new(g, vec![0, 3]).unwrap());
            let vw = VertexWeightedInstance { instance: inst, vertex_weight: (0..6).map(|_| rng.gen_range(0..5)).collect() };
            let split = split_vertex_weights(&vw);
            match vertex_weight_exhaustive(&vw) {
                Ok(w) => assert_eq!(exact_dsn(&split.instance.to_dsn(), &BnbOptions::default()).unwrap().weight + split.offset, w),
                Err(e) => assert_eq!(exact_dsn(&split.instance.to_dsn(), &BnbOptions::default()).unwrap_err(), e),
            }
        }
    }

    #[test]
    fn vertexize_decisions_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut done = 0;
        while done < 5 {
            let mut g = WeightedDigraph::with_vertices(4);
            for _ in 0..7 {
                let (u, v) = (rng.gen_range(0..4), rng.gen_range(0..4));
                if u != v && g.find_arc(u, v).is_none() {
                    g.add_arc(u, v, rng.gen_range(0..3)).unwrap();
                }
            }
            let inst = ScssInstance::new(g, vec![0, 2]).unwrap();
            let Ok(opt) = exact_scss(&inst, &BnbOptions::default()) else { continue };
            let count = min_vertex_count(&vertexize(&Instance::Scss(inst.clone()), 0).instance, None).unwrap();
            for c in opt.weight.saturating_sub(1)..=opt.weight {
                let vz = vertexize(&Instance::Scss(inst.clone()), c);
                assert_eq!(opt.weight <= c, count <= vz.budget, "C = {c}");
            }
            done += 1;
        }
    }
}
