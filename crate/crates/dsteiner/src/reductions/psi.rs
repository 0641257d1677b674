//! Partitioned Subgraph Isomorphism → unit-weight SCSS.
//!
//! Vertex classes `B, C, H, D, A, F` and arc families `E_1..E_7`.

use super::{ReductionArtifact, ReductionError};
use crate::graph::{ArcId, EdgeSolution, Instance, ScssInstance, VertexId, Weight, WeightedDigraph};
use crate::problems::{check_psi_assignment, PsiAssignment, PsiInstance};
use std::collections::HashMap;

/// `3ℓ + 10|E_G|`
pub fn psi_budget(psi: &PsiInstance) -> Weight {
    (3 * psi.l + 10 * psi.pattern_edges.len()) as Weight
}

#[derive(Debug, Clone)]
pub struct PsiReduction {
    pub source: PsiInstance,
    pub instance: ScssInstance,
    pub budget: Weight,
    /// `b_i` for pattern vertex `i` (0-based)
    pub b: Vec<VertexId>,
    /// `c_v`, `h_v` for host vertex `v`
    pub c: Vec<VertexId>,
    pub h: Vec<VertexId>,
    /// `d_vu`, `a_vu` for each oriented host edge `(v,u)`
    pub d: HashMap<(usize, usize), VertexId>,
    pub a: HashMap<(usize, usize), VertexId>,
    /// `f_ij` for each oriented pattern edge `(i,j)`
    pub f: HashMap<(usize, usize), VertexId>,
    /// `E_1..E_7` tag per arc
    pub family: Vec<u8>,
    pub vertex_provenance: Vec<String>,
}

impl PsiReduction {
    pub fn arc(&self, t: VertexId, h: VertexId) -> ArcId {
        self.instance.graph.find_arc(t, h).expect("arc of the construction")
    }

    pub fn artifact(&self) -> ReductionArtifact {
        ReductionArtifact {
            reduction: "psi-scss",
            instance: Instance::Scss(self.instance.clone()),
            budget: self.budget,
            vertex_provenance: self.vertex_provenance.clone(),
            arc_provenance: self.family.iter().map(|f| format!("E{f}")).collect(),
            parameters: vec![
                ("l".into(), self.source.l.to_string()),
                ("pattern_edges".into(), self.source.pattern_edges.len().to_string()),
                ("host_vertices".into(), self.source.host_vertex_count().to_string()),
                ("host_edges".into(), self.source.host_edges.len().to_string()),
            ],
        }
    }
}

pub fn reduce_psi_to_scss(psi: &PsiInstance) -> Result<PsiReduction, ReductionError> {
    if !psi.pattern_connected() {
        return Err(ReductionError::DisconnectedPattern);
    }
    let mut g = WeightedDigraph::new();
    let mut prov = Vec::new();
    let mut vertex = |g: &mut WeightedDigraph, label: String| {
        prov.push(label.clone());
        g.add_labeled_vertex(label)
    };
    let b: Vec<VertexId> = (1..=psi.l).map(|i| vertex(&mut g, format!("b_{i}"))).collect();
    let hn = psi.host_vertex_count();
    let c: Vec<VertexId> = (0..hn).map(|v| vertex(&mut g, format!("c_{v}"))).collect();
    let h: Vec<VertexId> = (0..hn).map(|v| vertex(&mut g, format!("h_{v}"))).collect();
    let oriented_host: Vec<(usize, usize)> = psi.host_edges.iter().flat_map(|&(x, y)| [(x, y), (y, x)]).collect();
    let mut d = HashMap::new();
    let mut a = HashMap::new();
    for &(v, u) in &oriented_host {
        d.insert((v, u), vertex(&mut g, format!("d_{v},{u}")));
        a.insert((v, u), vertex(&mut g, format!("a_{v},{u}")));
    }
    let mut f = HashMap::new();
    for &(i, j) in &psi.pattern_edges {
        for (x, y) in [(i, j), (j, i)] {
            f.insert((x, y), vertex(&mut g, format!("f_{},{}", x + 1, y + 1)));
        }
    }

    let mut family = Vec::new();
    let mut arc = |g: &mut WeightedDigraph, t: VertexId, hd: VertexId, fam: u8| {
        g.add_arc(t, hd, 1).expect("vertices exist");
        family.push(fam);
    };
    for v in 0..hn {
        arc(&mut g, c[v], b[psi.host_class[v]], 1);
    }
    for v in 0..hn {
        arc(&mut g, b[psi.host_class[v]], h[v], 2);
    }
    for v in 0..hn {
        arc(&mut g, h[v], c[v], 3);
    }
    for &(v, u) in &oriented_host {
        arc(&mut g, c[v], d[&(v, u)], 4);
    }
    for &(v, u) in &oriented_host {
        arc(&mut g, a[&(v, u)], h[u], 5);
    }
    for &(v, u) in &oriented_host {
        arc(&mut g, d[&(v, u)], a[&(v, u)], 6);
    }
    let mut fkeys: Vec<(usize, usize)> = f.keys().copied().collect();
    fkeys.sort_unstable();
    for (i, j) in fkeys {
        for &(v, u) in &oriented_host {
            if psi.host_class[v] == i && psi.host_class[u] == j {
                arc(&mut g, f[&(i, j)], d[&(v, u)], 7);
                arc(&mut g, a[&(v, u)], f[&(i, j)], 7);
            }
        }
    }

    let mut terminals = b.clone();
    let mut fs: Vec<(&(usize, usize), &VertexId)> = f.iter().collect();
    fs.sort_unstable();
    terminals.extend(fs.into_iter().map(|(_, &v)| v));
    let instance = ScssInstance::new(g, terminals).expect("distinct terminals");
    Ok(PsiReduction { source: psi.clone(), instance, budget: psi_budget(psi), b, c, h, d, a, f, family, vertex_provenance: prov })
}

/// The set `M' = M_1 ∪ … ∪ M_5` of `3ℓ + 10|E_G|` arcs.
pub fn psi_witness(red: &PsiReduction, phi: &PsiAssignment) -> Result<EdgeSolution, ReductionError> {
    check_psi_assignment(&red.source, phi).map_err(ReductionError::InvalidCertificate)?;
    let mut arcs = Vec::new();
    for i in 0..red.source.l {
        let v = phi.phi[i];
        arcs.push(red.arc(red.h[v], red.c[v]));
        arcs.push(red.arc(red.b[i], red.h[v]));
        arcs.push(red.arc(red.c[v], red.b[i]));
    }
    for &(x, y) in &red.source.pattern_edges {
        for (i, j) in [(x, y), (y, x)] {
            let (v, u) = (phi.phi[i], phi.phi[j]);
            let (dv, av) = (red.d[&(v, u)], red.a[&(v, u)]);
            arcs.push(red.arc(red.c[v], dv));
            arcs.push(red.arc(dv, av));
            arcs.push(red.arc(av, red.h[u]));
            arcs.push(red.arc(red.f[&(i, j)], dv));
            arcs.push(red.arc(av, red.f[&(i, j)]));
        }
    }
    Ok(EdgeSolution::new(&red.instance.graph, arcs).expect("construction arcs"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_scss;
    use crate::problems::{random_psi, solve_psi};

    /// g_1 − g_2; host v − u − w with H_1 = {v, w}, H_2 = {u}.
    fn three_vertex_host() -> PsiInstance {
        // host ids: v = 0, u = 1, w = 2
        PsiInstance::new(2, vec![(0, 1)], vec![0, 1, 0], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn three_vertex_host_counts() {
        let psi = three_vertex_host();
        let red = reduce_psi_to_scss(&psi).unwrap();
        assert_eq!(red.budget, 16);
        assert_eq!(red.f.len(), 2);
        assert_eq!(red.instance.k(), 2 + 2);
        assert_eq!(red.instance.graph.vertex_count(), 2 + 2 * 3 + 4 * 2 + 2);
        assert!(red.instance.graph.arcs().iter().all(|a| a.weight == 1));
        // f_12 reaches d_vu and d_wu; f_21 reaches d_uv and d_uw
        let f12 = red.f[&(0, 1)];
        let heads: Vec<String> =
            red.instance.graph.out_arcs(f12).iter().map(|&a| red.instance.graph.name(red.instance.graph.arc(a).head)).collect();
        assert_eq!(heads, ["d_0,1", "d_2,1"]);
    }

    #[test]
    fn three_vertex_host_witness() {
        let red = reduce_psi_to_scss(&three_vertex_host()).unwrap();
        let w = psi_witness(&red, &PsiAssignment { phi: vec![0, 1] }).unwrap();
        assert_eq!(w.len(), 16);
        assert_eq!(w.weight(), 16);
        assert!(validate_scss(&red.instance, &w).unwrap());
        let g = &red.instance.graph;
        for &fv in red.f.values() {
            let touching = w.arcs().iter().filter(|&&x| red.family[x] >= 6 && {
                let a = g.arc(x);
                a.tail == fv || a.head == fv || (red.family[x] == 6 && g.find_arc(fv, a.tail).is_some_and(|y| w.contains(y)))
            });
            assert_eq!(touching.count(), 3);
        }
        for &bv in &red.b {
            let black = w.arcs().iter().filter(|&&x| {
                let a = g.arc(x);
                red.family[x] <= 3 && (a.tail == bv || a.head == bv || (red.family[x] == 3 && g.find_arc(bv, a.tail).is_some_and(|y| w.contains(y))))
            });
            assert_eq!(black.count(), 3);
        }
    }

    #[test]
    fn invalid_phi_and_disconnected_pattern() {
        let red = reduce_psi_to_scss(&three_vertex_host()).unwrap();
        assert!(psi_witness(&red, &PsiAssignment { phi: vec![1, 0] }).is_err());
        let disc = PsiInstance::new(3, vec![(0, 1)], vec![0, 1, 2], vec![(0, 1)]).unwrap();
        assert_eq!(reduce_psi_to_scss(&disc).unwrap_err(), ReductionError::DisconnectedPattern);
    }

    #[test]
    fn random_witnesses_validate() {
        for seed in 0..40 {
            let psi = random_psi(seed, 3, 6, 7);
            let red = reduce_psi_to_scss(&psi).unwrap();
            let e_h = psi.host_edges.len();
            let e_g = psi.pattern_edges.len();
            assert_eq!(red.instance.graph.vertex_count(), psi.l + 2 * psi.host_vertex_count() + 4 * e_h + 2 * e_g);
            assert_eq!(red.instance.k(), psi.l + 2 * e_g);
            if let Some(phi) = solve_psi(&psi) {
                let w = psi_witness(&red, &phi).unwrap();
                assert_eq!(w.weight(), red.budget);
                assert!(validate_scss(&red.instance, &w).unwrap());
            }
        }
    }
}
