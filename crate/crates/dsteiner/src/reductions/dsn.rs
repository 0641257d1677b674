//! Grid Tiling → DSN on planar DAGs.
//!
//! Gadget `G_{i,j}` is an `n×n` grid of black arcs (weight 2) with vertices
//! `g(i,j,x,y)`: `x` is the level of the horizontal path `P_i^x` (top to
//! bottom), `y` the level of the vertical path `Q_j^y` (left to right).
//! Row paths run `a_i → hs_{i,x} → … → he_{i,x} → b_i`, column paths
//! `c_j → vs_{j,y} → … → ve_{j,y} → d_j`.

use super::{ReductionArtifact, ReductionError};
use crate::graph::{ArcId, DsnInstance, EdgeSolution, Instance, VertexId, Weight, WeightedDigraph};
use crate::problems::{check_assignment, GridTilingAssignment, GridTilingInstance};
use std::collections::HashMap;

/// `B* = 2k(Δ(n+1) + 2(k+1) + 2k(n−1))` with `Δ = 5n²`.
pub fn b_star(k: usize, n: usize) -> Weight {
    let (k, n) = (k as Weight, n as Weight);
    let delta = 5 * n * n;
    2 * k * (delta * (n + 1) + 2 * (k + 1) + 2 * k * (n - 1))
}

#[derive(Debug, Clone)]
pub struct DsnReduction {
    pub source: GridTilingInstance,
    pub instance: DsnInstance,
    /// `B*`. The YES threshold is `B* − k²`.
    pub budget_canonical: Weight,
    pub delta: Weight,
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub d: Vec<VertexId>,
    hs: Vec<Vec<VertexId>>,
    he: Vec<Vec<VertexId>>,
    vs: Vec<Vec<VertexId>>,
    ve: Vec<Vec<VertexId>>,
    grid: HashMap<(usize, usize, usize, usize), VertexId>,
    /// Subdivision vertex of the arc entering each green vertex.
    pub green: HashMap<(usize, usize, usize, usize), VertexId>,
    pub vertex_provenance: Vec<String>,
    pub arc_provenance: Vec<String>,
}

impl DsnReduction {
    pub fn k(&self) -> usize {
        self.source.k
    }

    pub fn n(&self) -> usize {
        self.source.n
    }

    /// `B* − k²`
    pub fn threshold(&self) -> Weight {
        self.budget_canonical - (self.k() * self.k()) as Weight
    }

    pub fn grid_vertex(&self, i: usize, j: usize, x: usize, y: usize) -> VertexId {
        self.grid[&(i, j, x, y)]
    }

    fn at(&self, t: VertexId, h: VertexId) -> ArcId {
        self.instance.graph.find_arc(t, h).expect("arc of the construction")
    }

    /// Arcs of `Q_j^y`, including both halves of subdivided arcs.
    pub fn vertical_path(&self, j: usize, y: usize) -> Vec<ArcId> {
        let (k, n) = (self.k(), self.n());
        let mut seq = vec![self.c[j - 1], self.vs[j - 1][y - 1]];
        for i in 1..=k {
            for x in 1..=n {
                let v = self.grid_vertex(i, j, x, y);
                if let Some(&mid) = self.green.get(&(i, j, x, y)) {
                    seq.push(mid);
                }
                seq.push(v);
            }
        }
        seq.push(self.ve[j - 1][y - 1]);
        seq.push(self.d[j - 1]);
        seq.windows(2).map(|w| self.at(w[0], w[1])).collect()
    }

    /// Arcs of `P_i^x`; with `shortcuts`, the arc into green vertex
    /// `g(i,j,x,ys[j])` is replaced by the green arc and the lower half.
    pub fn horizontal_path(&self, i: usize, x: usize, shortcuts: Option<&[usize]>) -> Vec<ArcId> {
        let (k, n) = (self.k(), self.n());
        let mut arcs = Vec::new();
        let mut prev = self.hs[i - 1][x - 1];
        arcs.push(self.at(self.a[i - 1], prev));
        for j in 1..=k {
            for y in 1..=n {
                let v = self.grid_vertex(i, j, x, y);
                let take = shortcuts.is_some_and(|s| s[j - 1] == y);
                match self.green.get(&(i, j, x, y)).filter(|_| take) {
                    Some(&mid) => {
                        arcs.push(self.at(prev, mid));
                        arcs.push(self.at(mid, v));
                    }
                    None => arcs.push(self.at(prev, v)),
                }
                prev = v;
            }
        }
        arcs.push(self.at(prev, self.he[i - 1][x - 1]));
        arcs.push(self.at(self.he[i - 1][x - 1], self.b[i - 1]));
        arcs
    }

    pub fn artifact(&self) -> ReductionArtifact {
        ReductionArtifact {
            reduction: "dsn-planar",
            instance: Instance::Dsn(self.instance.clone()),
            budget: self.threshold(),
            vertex_provenance: self.vertex_provenance.clone(),
            arc_provenance: self.arc_provenance.clone(),
            parameters: vec![
                ("k".into(), self.k().to_string()),
                ("n".into(), self.n().to_string()),
                ("delta".into(), self.delta.to_string()),
                ("B*".into(), self.budget_canonical.to_string()),
            ],
        }
    }
}

/// Requires `1 < min(x, y)` for every pair (normalize with shift 1) and `k ≤ n`.
pub fn reduce_gt_to_dsn(gt: &GridTilingInstance) -> Result<DsnReduction, ReductionError> {
    let (k, n) = (gt.k, gt.n);
    if k > n {
        return Err(ReductionError::BadSize(format!("DSN reduction needs k <= n, got k={k} n={n}")));
    }
    if let Some(p) = gt.all_pairs().find(|&(x, y)| x.min(y) <= 1) {
        return Err(ReductionError::Unnormalized(format!("pair {p:?} lies in the first row or column")));
    }
    let delta = 5 * (n * n) as Weight;
    let mut g = WeightedDigraph::new();
    let mut vprov: Vec<String> = Vec::new();
    let mut aprov: Vec<String> = Vec::new();
    let mut vertex = |g: &mut WeightedDigraph, label: String| {
        vprov.push(label.clone());
        g.add_labeled_vertex(label)
    };
    let names = |g: &mut WeightedDigraph, vertex: &mut dyn FnMut(&mut WeightedDigraph, String) -> VertexId, s: &str| -> Vec<VertexId> {
        (1..=k).map(|i| vertex(g, format!("{s}_{i}"))).collect()
    };
    let a = names(&mut g, &mut vertex, "a");
    let b = names(&mut g, &mut vertex, "b");
    let c = names(&mut g, &mut vertex, "c");
    let d = names(&mut g, &mut vertex, "d");
    let level = |g: &mut WeightedDigraph, vertex: &mut dyn FnMut(&mut WeightedDigraph, String) -> VertexId, s: &str| -> Vec<Vec<VertexId>> {
        (1..=k).map(|i| (1..=n).map(|l| vertex(g, format!("{s}_{i},{l}"))).collect()).collect()
    };
    let hs = level(&mut g, &mut vertex, "hs");
    let he = level(&mut g, &mut vertex, "he");
    let vs = level(&mut g, &mut vertex, "vs");
    let ve = level(&mut g, &mut vertex, "ve");
    let mut grid = HashMap::new();
    for i in 1..=k {
        for j in 1..=k {
            for x in 1..=n {
                for y in 1..=n {
                    grid.insert((i, j, x, y), vertex(&mut g, format!("G[{i},{j}] ({x},{y})")));
                }
            }
        }
    }
    let mut green = HashMap::new();
    for i in 1..=k {
        for j in 1..=k {
            for &(x, y) in gt.cell(i, j) {
                green.insert((i, j, x, y), vertex(&mut g, format!("G[{i},{j}] green({x},{y})")));
            }
        }
    }
    let mut arc = |g: &mut WeightedDigraph, t: VertexId, h: VertexId, w: Weight, p: String| {
        aprov.push(p);
        g.add_arc(t, h, w).expect("vertices exist");
    };
    let gv = |i, j, x, y| grid[&(i, j, x, y)];
    for i in 1..=k {
        for l in 1..=n {
            let lw = l as Weight;
            arc(&mut g, a[i - 1], hs[i - 1][l - 1], delta * (n as Weight + 1 - lw), format!("blue P_{i}^{l} first"));
            arc(&mut g, he[i - 1][l - 1], b[i - 1], delta * lw, format!("blue P_{i}^{l} last"));
            arc(&mut g, c[i - 1], vs[i - 1][l - 1], delta * (n as Weight + 1 - lw), format!("blue Q_{i}^{l} first"));
            arc(&mut g, ve[i - 1][l - 1], d[i - 1], delta * lw, format!("blue Q_{i}^{l} last"));
        }
    }
    // horizontal black arcs
    for i in 1..=k {
        for x in 1..=n {
            arc(&mut g, hs[i - 1][x - 1], gv(i, 1, x, 1), 2, format!("black P_{i}^{x} entry"));
            for j in 1..=k {
                for y in 1..n {
                    arc(&mut g, gv(i, j, x, y), gv(i, j, x, y + 1), 2, format!("black G[{i},{j}] right"));
                }
                if j < k {
                    arc(&mut g, gv(i, j, x, n), gv(i, j + 1, x, 1), 2, format!("black P_{i}^{x} link"));
                }
            }
            arc(&mut g, gv(i, k, x, n), he[i - 1][x - 1], 2, format!("black P_{i}^{x} exit"));
        }
    }
    // vertical black arcs, subdivided above green vertices
    let down = |g: &mut WeightedDigraph, arc: &mut dyn FnMut(&mut WeightedDigraph, VertexId, VertexId, Weight, String), t: VertexId, key: (usize, usize, usize, usize), p: String| {
        let h = gv(key.0, key.1, key.2, key.3);
        match green.get(&key) {
            Some(&mid) => {
                arc(g, t, mid, 1, format!("{p} upper half"));
                arc(g, mid, h, 1, format!("{p} lower half"));
            }
            None => arc(g, t, h, 2, p),
        }
    };
    for j in 1..=k {
        for y in 1..=n {
            down(&mut g, &mut arc, vs[j - 1][y - 1], (1, j, 1, y), format!("black Q_{j}^{y} entry"));
            for i in 1..=k {
                for x in 1..n {
                    down(&mut g, &mut arc, gv(i, j, x, y), (i, j, x + 1, y), format!("black G[{i},{j}] down"));
                }
                if i < k {
                    down(&mut g, &mut arc, gv(i, j, n, y), (i + 1, j, 1, y), format!("black Q_{j}^{y} link"));
                }
            }
            arc(&mut g, gv(k, j, n, y), ve[j - 1][y - 1], 2, format!("black Q_{j}^{y} exit"));
        }
    }
    let mut keys: Vec<_> = green.keys().copied().collect();
    keys.sort_unstable();
    for (i, j, x, y) in keys {
        arc(&mut g, gv(i, j, x, y - 1), green[&(i, j, x, y)], 1, format!("green G[{i},{j}] ({x},{y})"));
    }

    let demands = (0..k).map(|i| (a[i], b[i])).chain((0..k).map(|j| (c[j], d[j]))).collect();
    let instance = DsnInstance::new(g, demands).expect("valid demands");
    Ok(DsnReduction {
        source: gt.clone(),
        instance,
        budget_canonical: b_star(k, n),
        delta,
        a,
        b,
        c,
        d,
        hs,
        he,
        vs,
        ve,
        grid,
        green,
        vertex_provenance: vprov,
        arc_provenance: aprov,
    })
}

/// Canonical `Q_j^{β_j}` plus `P_i^{α_i}` through every green shortcut:
/// weight `B* − k²`.
pub fn dsn_witness(red: &DsnReduction, assignment: &GridTilingAssignment) -> Result<EdgeSolution, ReductionError> {
    check_assignment(&red.source, assignment).map_err(ReductionError::InvalidCertificate)?;
    let alpha = assignment.alpha();
    let beta = assignment.beta();
    let mut arcs = Vec::new();
    for j in 1..=red.k() {
        arcs.extend(red.vertical_path(j, beta[j - 1]));
    }
    for i in 1..=red.k() {
        arcs.extend(red.horizontal_path(i, alpha[i - 1], Some(&beta)));
    }
    Ok(EdgeSolution::new(&red.instance.graph, arcs).expect("construction arcs"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{planarity_check, validate_dsn};
    use crate::problems::{normalize_gridtiling, plant_gridtiling, solve_gridtiling, PlantAnswer};

    #[test]
    fn b_star_at_k2_n2() {
        assert_eq!(b_star(2, 2), 280);
        assert_eq!(b_star(2, 2) - 4, 276);
        // Δ = 20: 2k·(Δ(n+1) + 2(k+1) + 2k(n−1)) = 4·(60 + 6 + 4)
        assert_eq!(4 * (60 + 6 + 4), 280);
    }

    #[test]
    fn canonical_path_weight() {
        let gt = normalize_gridtiling(&plant_gridtiling(1, 2, 2, 1, PlantAnswer::Yes).unwrap(), 1);
        let red = reduce_gt_to_dsn(&gt).unwrap();
        let (k, n) = (2u64, 3u64);
        let expect = red.delta * (n + 1) + 2 * (k + 1) + 2 * k * (n - 1);
        for i in 1..=2 {
            for l in 1..=3 {
                let w: u64 = red.horizontal_path(i, l, None).iter().map(|&a| red.instance.graph.arc(a).weight).sum();
                assert_eq!(w, expect);
                let w: u64 = red.vertical_path(i, l).iter().map(|&a| red.instance.graph.arc(a).weight).sum();
                assert_eq!(w, expect);
            }
        }
        assert_eq!(4 * expect, red.budget_canonical);
    }

    #[test]
    fn witness_k2_n2() {
        let gt = GridTilingInstance::new(2, 2, vec![vec![vec![(2, 2)]; 2]; 2]).unwrap();
        let red = reduce_gt_to_dsn(&gt).unwrap();
        let a = solve_gridtiling(&gt).unwrap();
        let w = dsn_witness(&red, &a).unwrap();
        assert_eq!(w.weight(), 276);
        assert!(validate_dsn(&red.instance, &w).unwrap());
        assert!(red.instance.graph.topological_order().is_some());
        assert!(planarity_check(&red.instance.graph));
    }

    #[test]
    fn exactly_one_shared_arc_per_gadget() {
        for seed in 0..5 {
            let gt = normalize_gridtiling(&plant_gridtiling(seed, 2, 2, 2, PlantAnswer::Yes).unwrap(), 1);
            let red = reduce_gt_to_dsn(&gt).unwrap();
            let a = solve_gridtiling(&gt).unwrap();
            let (alpha, beta) = (a.alpha(), a.beta());
            let mut shared = 0;
            for i in 1..=2 {
                let p = red.horizontal_path(i, alpha[i - 1], Some(&beta));
                for j in 1..=2 {
                    let q = red.vertical_path(j, beta[j - 1]);
                    let common: Vec<_> = p.iter().filter(|x| q.contains(x)).collect();
                    assert_eq!(common.len(), 1);
                    let head = red.instance.graph.arc(*common[0]).head;
                    assert_eq!(head, red.grid_vertex(i, j, alpha[i - 1], beta[j - 1]));
                    shared += 1;
                }
                // first and last blue arcs on the same level
                let g = &red.instance.graph;
                assert_eq!(g.name(g.arc(p[0]).head), format!("hs_{i},{}", alpha[i - 1]));
                assert_eq!(g.name(g.arc(*p.last().unwrap()).tail), format!("he_{i},{}", alpha[i - 1]));
            }
            assert_eq!(shared, 4);
            let w = dsn_witness(&red, &a).unwrap();
            assert_eq!(w.weight(), red.threshold());
        }
    }

    #[test]
    fn preconditions() {
        let unnorm = GridTilingInstance::new(1, 2, vec![vec![vec![(1, 2)]]]).unwrap();
        assert!(matches!(reduce_gt_to_dsn(&unnorm), Err(ReductionError::Unnormalized(_))));
        let big_k = GridTilingInstance::new(3, 2, vec![vec![vec![(2, 2)]; 3]; 3]).unwrap();
        assert!(matches!(reduce_gt_to_dsn(&big_k), Err(ReductionError::BadSize(_))));
    }

    #[test]
    fn planar_dag_on_random_instances() {
        for seed in 0..6 {
            let gt = normalize_gridtiling(&plant_gridtiling(seed, 2, 3, 3, PlantAnswer::Yes).unwrap(), 1);
            let red = reduce_gt_to_dsn(&gt).unwrap();
            assert!(red.instance.graph.topological_order().is_some());
            assert!(planarity_check(&red.instance.graph));
            assert_eq!(red.arc_provenance.len(), red.instance.graph.arc_count());
        }
    }
}
