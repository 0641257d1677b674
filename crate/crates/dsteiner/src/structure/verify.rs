//! End-to-end structural check of one minimal solution.

use super::decompose::{decompose, essential_paths, is_minimal, shared_paths, EssentialPath, Side};
use super::tw2::treewidth_le_2;
use super::wset::{build_w_set, w_components, WKind};
use super::StructureError;
use crate::graph::{EdgeSolution, ScssInstance, UndirectedGraph, VertexId};
use crate::solvers::{treewidth_exact_small, treewidth_upper, EXACT_TREEWIDTH_LIMIT};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub vertices: usize,
    pub arcs: usize,
    pub tw_le_2: bool,
    /// Essential paths of `A_in` / `A_out` with an arc inside the component.
    pub essential_in: usize,
    pub essential_out: usize,
    /// Shared paths meeting the component.
    pub shared_paths: usize,
    /// For components carrying one path of each side: does the out-path
    /// visit their common pieces in the reverse order of the in-path?
    pub order_reversed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    pub k: usize,
    pub root: VertexId,
    pub solution_arcs: usize,
    pub solution_vertices: usize,
    pub shared_paths: usize,
    pub w_size: usize,
    pub w_terminals: usize,
    pub w_branching: usize,
    pub w_shared: usize,
    pub components: Vec<ComponentReport>,
    /// Treewidth of the underlying graph of `M`, exact when `treewidth_exact`.
    pub treewidth: usize,
    pub treewidth_exact: bool,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// `tw / √k`
    pub fn tw_ratio(&self) -> f64 {
        self.treewidth as f64 / (self.k as f64).sqrt()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {} root {} arcs {} vertices {}", self.k, self.root, self.solution_arcs, self.solution_vertices)?;
        writeln!(
            f,
            "W {} (bound {}): terminals {} branching {} shared-endpoints {}",
            self.w_size,
            9 * self.k,
            self.w_terminals,
            self.w_branching,
            self.w_shared
        )?;
        writeln!(f, "shared paths {}", self.shared_paths)?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                f,
                "component {i}: vertices {} arcs {} tw<=2 {} essential {}+{} shared {} reversed {}",
                c.vertices,
                c.arcs,
                c.tw_le_2,
                c.essential_in,
                c.essential_out,
                c.shared_paths,
                c.order_reversed.map_or("-".to_string(), |b| b.to_string())
            )?;
        }
        let kind = if self.treewidth_exact { "exact" } else { "upper" };
        writeln!(f, "treewidth {} ({kind}) ratio {:.3}", self.treewidth, self.tw_ratio())?;
        if self.passes() {
            writeln!(f, "verdict PASS")
        } else {
            for v in &self.violations {
                writeln!(f, "violation {v}")?;
            }
            writeln!(f, "verdict FAIL")
        }
    }
}

/// Maximal runs of consecutive common vertices of `p` and `q`, in `p`'s
/// order, each given by its index range in `p`.
fn common_runs(p: &EssentialPath, q: &EssentialPath) -> Vec<(usize, usize)> {
    let in_q = |v: VertexId| q.vertices.contains(&v);
    let shares_arc = |i: usize| q.arcs.contains(&p.arcs[i]);
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, &v) in p.vertices.iter().enumerate() {
        if !in_q(v) {
            continue;
        }
        match runs.last_mut() {
            Some((_, end)) if *end + 1 == i && shares_arc(*end) => *end = i,
            _ => runs.push((i, i)),
        }
    }
    runs
}

/// Does `q` meet the common runs of `p` and `q` in reverse order?
fn reversed_order(p: &EssentialPath, q: &EssentialPath) -> bool {
    let runs = common_runs(p, q);
    let pos_in_q: Vec<usize> =
        runs.iter().map(|&(s, _)| q.vertices.iter().position(|&v| v == p.vertices[s]).expect("common vertex")).collect();
    pos_in_q.windows(2).all(|w| w[0] > w[1])
}

/// Re-validates minimality, decomposes at `root` and checks every structural property.
pub fn verify_structure(instance: &ScssInstance, m: &EdgeSolution, root: VertexId) -> Result<StructureReport, StructureError> {
    let g = &instance.graph;
    is_minimal(instance, m)?;
    let pair = decompose(instance, m, root)?;
    let shared = shared_paths(g, &pair)?;
    let w = build_w_set(g, &pair, &instance.terminals)?;
    let ess_in = essential_paths(g, &pair, &instance.terminals, Side::In);
    let ess_out = essential_paths(g, &pair, &instance.terminals, Side::Out);
    let mut violations = Vec::new();

    for (side, ess, arcs) in [("in", &ess_in, &pair.a_in), ("out", &ess_out, &pair.a_out)] {
        let mut covered: Vec<usize> = ess.iter().flat_map(|p| p.arcs.iter().copied()).collect();
        covered.sort_unstable();
        if covered != **arcs {
            violations.push(format!("essential paths of A_{side} do not partition it"));
        }
    }

    let mut components = Vec::new();
    for (ci, comp) in w_components(g, m, &w.vertices).iter().enumerate() {
        let mut pos = vec![usize::MAX; g.vertex_count()];
        for (i, &v) in comp.vertices.iter().enumerate() {
            pos[v] = i;
        }
        let und = UndirectedGraph::from_edges(comp.vertices.len(), comp.arcs.iter().map(|&a| (pos[g.arc(a).tail], pos[g.arc(a).head])));
        let tw_le_2 = treewidth_le_2(&und);
        let touching = |ess: &[EssentialPath]| -> Vec<usize> {
            (0..ess.len()).filter(|&i| ess[i].arcs.iter().any(|a| comp.arcs.contains(a))).collect()
        };
        let tin = touching(&ess_in);
        let tout = touching(&ess_out);
        let shared_hit = shared.iter().filter(|s| s.vertices.iter().any(|&v| pos[v] != usize::MAX)).count();
        let order_reversed = match (tin.as_slice(), tout.as_slice()) {
            ([p], [q]) if shared_hit >= 2 => Some(reversed_order(&ess_in[*p], &ess_out[*q])),
            _ => None,
        };
        if !tw_le_2 {
            violations.push(format!("component {ci} has treewidth above 2"));
        }
        if tin.len() > 1 || tout.len() > 1 {
            violations.push(format!("component {ci} meets {} + {} essential paths", tin.len(), tout.len()));
        }
        if order_reversed == Some(false) {
            violations.push(format!("component {ci} visits shared paths in the same order"));
        }
        components.push(ComponentReport {
            vertices: comp.vertices.len(),
            arcs: comp.arcs.len(),
            tw_le_2,
            essential_in: tin.len(),
            essential_out: tout.len(),
            shared_paths: shared_hit,
            order_reversed,
        });
    }

    let verts = m.vertices(g);
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        pos[v] = i;
    }
    let und = UndirectedGraph::from_edges(verts.len(), m.arcs().iter().map(|&a| (pos[g.arc(a).tail], pos[g.arc(a).head])));
    let (treewidth, treewidth_exact) = if verts.len() <= EXACT_TREEWIDTH_LIMIT.min(22) {
        (treewidth_exact_small(&und).expect("within limit").width(), true)
    } else {
        (treewidth_upper(&und).0, false)
    };

    Ok(StructureReport {
        k: instance.k(),
        root,
        solution_arcs: m.len(),
        solution_vertices: verts.len(),
        shared_paths: shared.len(),
        w_size: w.len(),
        w_terminals: w.count(WKind::Terminal),
        w_branching: w.count(WKind::Branching),
        w_shared: w.count(WKind::SharedEndpoint),
        components,
        treewidth,
        treewidth_exact,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDigraph;
    use crate::structure::minimalize;

    /// Two interleaved paths: `Q = r x1 x2 a y1 y2 t`, `P = t b y1 y2 c x1 x2 d r`.
    fn interleaved() -> (ScssInstance, EdgeSolution) {
        let names = ["r", "t", "x1", "x2", "y1", "y2", "a", "b", "c", "d"];
        let mut g = WeightedDigraph::new();
        for n in names {
            g.add_labeled_vertex(n);
        }
        let v = |s: &str| names.iter().position(|&x| x == s).unwrap();
        let q = ["r", "x1", "x2", "a", "y1", "y2", "t"];
        let p = ["t", "b", "y1", "y2", "c", "x1", "x2", "d", "r"];
        for path in [&q[..], &p[..]] {
            for w in path.windows(2) {
                if g.find_arc(v(w[0]), v(w[1])).is_none() {
                    g.add_arc(v(w[0]), v(w[1]), 1).unwrap();
                }
            }
        }
        let inst = ScssInstance::new(g, vec![v("r"), v("t")]).unwrap();
        let m = EdgeSolution::all(&inst.graph);
        (inst, m)
    }

    #[test]
    fn interleaved_pair_passes() {
        let (inst, m) = interleaved();
        assert_eq!(minimalize(&inst, &m).unwrap(), m);
        let rep = verify_structure(&inst, &m, 0).unwrap();
        assert!(rep.passes(), "{rep}");
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].order_reversed, Some(true));
        assert!(rep.components[0].shared_paths >= 2);
        assert!(rep.treewidth <= 2);
    }

    #[test]
    fn triangle_passes() {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 1).unwrap();
        g.add_arc(1, 2, 1).unwrap();
        g.add_arc(2, 0, 1).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1, 2]).unwrap();
        let rep = verify_structure(&inst, &EdgeSolution::all(&inst.graph), 0).unwrap();
        assert!(rep.passes());
        assert!(rep.components.is_empty());
    }

    #[test]
    fn non_minimal_input_is_rejected() {
        let (inst, _) = interleaved();
        let mut g = inst.graph.clone();
        g.add_arc(0, 1, 1).unwrap();
        let inst2 = ScssInstance::new(g, inst.terminals.clone()).unwrap();
        let all = EdgeSolution::all(&inst2.graph);
        assert!(matches!(verify_structure(&inst2, &all, 0), Err(StructureError::NotMinimal(_))));
    }
}
