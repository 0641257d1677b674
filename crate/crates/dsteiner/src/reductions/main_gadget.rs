//! The main gadget `MG_S`.

use super::ReductionError;
use crate::graph::{ArcId, EdgeSolution, VertexId, Weight, WeightedDigraph};
use crate::problems::Pair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MainArc {
    LeftSource(usize),
    RightSink(usize),
    TopSource(usize),
    BottomSink(usize),
    SourceInternal(usize),
    SinkInternal(usize),
    Bridge(usize),
    InrowRight,
    InterrowDown,
    ShortcutE(Pair),
    ShortcutF(Pair),
}

/// Which shortcut positions `build_main` accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// `1 < x, y < n`.
    #[default]
    Strict,
    /// Any `(x,y)` whose row `z = n(x−1)+y` has a row above and below it.
    /// Needed at `n = 2`, which has no strictly interior pair.
    Relaxed,
}

impl BorderPolicy {
    pub fn admits(self, n: usize, (x, y): Pair) -> bool {
        let inside = (1..=n).contains(&x) && (1..=n).contains(&y);
        match self {
            BorderPolicy::Strict => inside && x > 1 && y > 1 && x < n && y < n,
            BorderPolicy::Relaxed => {
                let z = n * (x - 1) + y;
                inside && z >= 2 && z < n * n
            }
        }
    }
}

/// `M*_n = 4B⁴ + B³ + B²n² + B(6n−4) + 2(n²−1)` with `B = 11n²`.
pub fn m_star(n: usize) -> Weight {
    let n = n as Weight;
    let b = 11 * n * n;
    4 * b.pow(4) + b.pow(3) + b * b * n * n + b * (6 * n - 4) + 2 * (n * n - 1)
}

#[derive(Debug, Clone)]
pub struct MainGadget {
    pub n: usize,
    pub graph: WeightedDigraph,
    /// `ℓ_1..ℓ_n`, `r_1..r_n`, `t_1..t_n`, `b_1..b_n`
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    pub top: Vec<VertexId>,
    pub bottom: Vec<VertexId>,
    pub left_inner: Vec<VertexId>,
    pub right_inner: Vec<VertexId>,
    pub set: Vec<Pair>,
    pub policy: BorderPolicy,
    pub base: Weight,
    pub target: Weight,
    pub kinds: Vec<MainArc>,
    grid: Vec<Vec<VertexId>>,
    split: Vec<(Pair, VertexId, VertexId)>,
}

impl MainGadget {
    /// `v_i^j` for row `1..=n²`, column `0..=2n+1`.
    pub fn grid_vertex(&self, i: usize, j: usize) -> VertexId {
        self.grid[i - 1][j]
    }

    /// `(g_x^y, h_x^y)` for `(x,y) ∈ S`.
    pub fn split_vertices(&self, p: Pair) -> Option<(VertexId, VertexId)> {
        self.split.iter().find(|s| s.0 == p).map(|s| (s.1, s.2))
    }

    /// `t_1..t_n, r_1..r_n, b_n..b_1, ℓ_n..ℓ_1`
    pub fn boundary_order(&self) -> Vec<VertexId> {
        let mut out = self.top.clone();
        out.extend(&self.right);
        out.extend(self.bottom.iter().rev());
        out.extend(self.left.iter().rev());
        out
    }

    pub fn arc_between(&self, tail: VertexId, head: VertexId) -> ArcId {
        self.graph.find_arc(tail, head).expect("arc of the main roster")
    }

    fn kind(&self, k: MainArc) -> ArcId {
        self.kinds.iter().position(|&x| x == k).expect("arc family member")
    }

    pub fn left_arc(&self, i: usize) -> ArcId {
        self.kind(MainArc::LeftSource(i))
    }
    pub fn right_arc(&self, i: usize) -> ArcId {
        self.kind(MainArc::RightSink(i))
    }
    pub fn top_arc(&self, i: usize) -> ArcId {
        self.kind(MainArc::TopSource(i))
    }
    pub fn bottom_arc(&self, i: usize) -> ArcId {
        self.kind(MainArc::BottomSink(i))
    }
}

pub fn build_main(n: usize, set: &[Pair], policy: BorderPolicy) -> Result<MainGadget, ReductionError> {
    if n == 0 {
        return Err(ReductionError::BadSize("main gadget needs n >= 1".into()));
    }
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if let Some(&p) = set.iter().find(|&&p| !policy.admits(n, p)) {
        return Err(ReductionError::BorderPair(p));
    }
    let nn = n as Weight;
    let b = 11 * nn * nn;
    let rows = n * n;
    let mut g = WeightedDigraph::new();
    let mut kinds = Vec::new();
    let mut arc = |g: &mut WeightedDigraph, t: VertexId, h: VertexId, w: Weight, k: MainArc| {
        g.add_arc(t, h, w).expect("vertices exist");
        kinds.push(k);
    };
    let named = |g: &mut WeightedDigraph, s: &str| -> Vec<VertexId> {
        (1..=n).map(|i| g.add_labeled_vertex(format!("{s}_{i}"))).collect()
    };
    let left = named(&mut g, "l");
    let left_inner = named(&mut g, "l'");
    let right = named(&mut g, "r");
    let right_inner = named(&mut g, "r'");
    let top = named(&mut g, "t");
    let bottom = named(&mut g, "b");
    let grid: Vec<Vec<VertexId>> =
        (1..=rows).map(|i| (0..=2 * n + 1).map(|j| g.add_labeled_vertex(format!("v_{i}^{j}"))).collect()).collect();
    let v = |i: usize, j: usize| grid[i - 1][j];
    let split: Vec<(Pair, VertexId, VertexId)> = set
        .iter()
        .map(|&(x, y)| {
            let gv = g.add_labeled_vertex(format!("g_{x}^{y}"));
            let hv = g.add_labeled_vertex(format!("h_{x}^{y}"));
            ((x, y), gv, hv)
        })
        .collect();

    for i in 1..=n {
        arc(&mut g, left[i - 1], left_inner[i - 1], b.pow(4), MainArc::LeftSource(i));
        arc(&mut g, right_inner[i - 1], right[i - 1], b.pow(4), MainArc::RightSink(i));
        arc(&mut g, top[i - 1], v(1, i), b.pow(4), MainArc::TopSource(i));
        arc(&mut g, v(rows, n + i), bottom[i - 1], b.pow(4), MainArc::BottomSink(i));
    }
    for i in 1..=n {
        for j in n * (i - 1) + 1..=n * i {
            arc(&mut g, left_inner[i - 1], v(j, 0), b * b * (rows - j) as Weight, MainArc::SourceInternal(j));
        }
    }
    for i in 1..=n {
        for j in n * (i - 1) + 1..=n * i {
            arc(&mut g, v(j, 2 * n + 1), right_inner[i - 1], b * b * j as Weight, MainArc::SinkInternal(j));
        }
    }
    for r in 1..=rows {
        arc(&mut g, v(r, n), v(r, n + 1), b.pow(3), MainArc::Bridge(r));
        for c in (0..n).chain(n + 1..=2 * n) {
            arc(&mut g, v(r, c), v(r, c + 1), 3 * b, MainArc::InrowRight);
        }
    }
    // interrow arcs, split where a shortcut lands
    let mut g_split = std::collections::HashMap::new();
    let mut h_split = std::collections::HashMap::new();
    for &((x, y), gv, hv) in &split {
        let z = n * (x - 1) + y;
        g_split.insert((z - 1, y), gv);
        h_split.insert((z, n + y), hv);
    }
    for r in 1..rows {
        for c in 1..=2 * n {
            match g_split.get(&(r, c)).or_else(|| h_split.get(&(r, c))) {
                Some(&mid) => {
                    arc(&mut g, v(r, c), mid, 1, MainArc::InterrowDown);
                    arc(&mut g, mid, v(r + 1, c), 1, MainArc::InterrowDown);
                }
                None => arc(&mut g, v(r, c), v(r + 1, c), 2, MainArc::InterrowDown),
            }
        }
    }
    for &((x, y), gv, hv) in &split {
        let z = n * (x - 1) + y;
        arc(&mut g, v(z, y - 1), gv, b, MainArc::ShortcutE((x, y)));
        arc(&mut g, hv, v(z, n + y + 1), b, MainArc::ShortcutF((x, y)));
    }

    Ok(MainGadget {
        n,
        graph: g,
        left,
        right,
        top,
        bottom,
        left_inner,
        right_inner,
        set,
        policy,
        base: b,
        target: m_star(n),
        kinds,
        grid,
        split,
    })
}

/// The edge set `E_{x,y}`: weight `M*_n`, connected, represents `(x,y)`.
pub fn main_canonical(gadget: &MainGadget, (x, y): Pair) -> Result<EdgeSolution, ReductionError> {
    let (gv, hv) = gadget.split_vertices((x, y)).ok_or(ReductionError::PairNotInSet((x, y)))?;
    let n = gadget.n;
    let rows = n * n;
    let z = n * (x - 1) + y;
    let v = |i: usize, j: usize| gadget.grid_vertex(i, j);
    let at = |t: VertexId, h: VertexId| gadget.arc_between(t, h);
    let mut arcs = vec![
        gadget.left_arc(x),
        gadget.right_arc(x),
        gadget.top_arc(y),
        gadget.bottom_arc(y),
        at(v(z, n), v(z, n + 1)),
        at(gadget.left_inner[x - 1], v(z, 0)),
        at(v(z, 2 * n + 1), gadget.right_inner[x - 1]),
        at(v(z, y - 1), gv),
        at(hv, v(z, n + y + 1)),
    ];
    for c in (0..n).chain(n + 1..=2 * n) {
        if c != y - 1 && c != n + y {
            arcs.push(at(v(z, c), v(z, c + 1)));
        }
    }
    let down = |r: usize, c: usize, arcs: &mut Vec<ArcId>| match gadget.graph.find_arc(v(r, c), v(r + 1, c)) {
        Some(a) => arcs.push(a),
        None => {
            let mid = gadget.graph.out_arcs(v(r, c)).iter().map(|&a| gadget.graph.arc(a).head).find(|&m| {
                gadget.graph.find_arc(m, v(r + 1, c)).is_some()
            });
            let mid = mid.expect("split interrow arc");
            arcs.push(at(v(r, c), mid));
            arcs.push(at(mid, v(r + 1, c)));
        }
    };
    for r in 1..z {
        down(r, y, &mut arcs);
    }
    for r in z..rows {
        down(r, n + y, &mut arcs);
    }
    Ok(EdgeSolution::new(&gadget.graph, arcs).expect("gadget arcs"))
}

fn reach_from(g: &WeightedDigraph, from: &[VertexId], mask: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    for &s in from {
        let r = g.reach_set(s, Some(mask), false);
        for (x, y) in seen.iter_mut().zip(r) {
            *x |= y;
        }
    }
    seen
}

fn check_foreign(gadget: &MainGadget, set: &EdgeSolution) -> Result<Vec<bool>, ReductionError> {
    if let Some(&a) = set.arcs().iter().find(|&&a| a >= gadget.graph.arc_count()) {
        return Err(ReductionError::ForeignArc(a));
    }
    Ok(set.mask(&gadget.graph))
}

/// The four conditions: `L → R∪B`, `T → R∪B`, some `R` and some `B` reached from `L∪T`.
pub fn main_connectedness(gadget: &MainGadget, set: &EdgeSolution) -> Result<bool, ReductionError> {
    let mask = check_foreign(gadget, set)?;
    let from_l = reach_from(&gadget.graph, &gadget.left, &mask);
    let from_t = reach_from(&gadget.graph, &gadget.top, &mask);
    let hits = |seen: &[bool], vs: &[VertexId]| vs.iter().any(|&v| seen[v]);
    let exits: Vec<VertexId> = gadget.right.iter().chain(&gadget.bottom).copied().collect();
    let any_r = hits(&from_l, &gadget.right) || hits(&from_t, &gadget.right);
    let any_b = hits(&from_l, &gadget.bottom) || hits(&from_t, &gadget.bottom);
    Ok(hits(&from_l, &exits) && hits(&from_t, &exits) && any_r && any_b)
}

/// `Some((i,j))` iff the only arcs used at `L`, `R`, `T`, `B` are at
/// `ℓ_i`, `r_i`, `t_j`, `b_j` and the set contains `ℓ_i⇝r_i` and `t_j⇝b_j` paths.
pub fn main_represents(gadget: &MainGadget, set: &EdgeSolution) -> Result<Option<Pair>, ReductionError> {
    let mask = check_foreign(gadget, set)?;
    let only = |f: &dyn Fn(usize) -> ArcId| -> Option<usize> {
        let used: Vec<usize> = (1..=gadget.n).filter(|&i| set.contains(f(i))).collect();
        (used.len() == 1).then(|| used[0])
    };
    let (Some(i), Some(ir), Some(j), Some(jb)) = (
        only(&|i| gadget.left_arc(i)),
        only(&|i| gadget.right_arc(i)),
        only(&|i| gadget.top_arc(i)),
        only(&|i| gadget.bottom_arc(i)),
    ) else {
        return Ok(None);
    };
    if i != ir || j != jb {
        return Ok(None);
    }
    let lr = gadget.graph.reach_set(gadget.left[i - 1], Some(&mask), false)[gadget.right[i - 1]];
    let tb = gadget.graph.reach_set(gadget.top[j - 1], Some(&mask), false)[gadget.bottom[j - 1]];
    Ok((lr && tb).then_some((i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_by_four() -> MainGadget {
        build_main(4, &[(2, 2), (2, 3), (3, 2)], BorderPolicy::Strict).unwrap()
    }

    #[test]
    fn m_star_at_two() {
        assert_eq!(m_star(2), 15_085_670);
        let b: u64 = 44;
        assert_eq!(m_star(2), 4 * b.pow(4) + b.pow(3) + 4 * b * b + 8 * b + 6);
    }

    #[test]
    fn strict_border_rejected() {
        assert_eq!(build_main(4, &[(1, 2)], BorderPolicy::Strict).unwrap_err(), ReductionError::BorderPair((1, 2)));
        assert!(build_main(4, &[(2, 4)], BorderPolicy::Strict).is_err());
        assert!(build_main(2, &[(1, 2)], BorderPolicy::Strict).is_err());
        assert!(build_main(2, &[(1, 2), (2, 1)], BorderPolicy::Relaxed).is_ok());
        assert!(build_main(2, &[(1, 1)], BorderPolicy::Relaxed).is_err());
        assert!(build_main(2, &[(2, 2)], BorderPolicy::Relaxed).is_err());
        assert!(build_main(2, &[], BorderPolicy::Strict).is_ok());
    }

    #[test]
    fn roster_counts() {
        let g = four_by_four();
        let n = 4;
        let bridges = g.kinds.iter().filter(|k| matches!(k, MainArc::Bridge(_))).count();
        assert_eq!(bridges, n * n);
        for a in 0..g.graph.arc_count() {
            if matches!(g.kinds[a], MainArc::Bridge(_)) {
                assert_eq!(g.graph.arc(a).weight, g.base.pow(3));
            }
        }
        // (n²−1)·2n interrow arcs, 6 of which are split
        let downs = g.kinds.iter().filter(|&&k| k == MainArc::InterrowDown).count();
        assert_eq!(downs, (n * n - 1) * 2 * n + 6);
        assert_eq!(g.graph.vertex_count(), 6 * n + n * n * (2 * n + 2) + 6);
        assert!(g.graph.topological_order().is_some());
        for v in g.left.iter().chain(&g.top) {
            assert_eq!((g.graph.in_arcs(*v).len(), g.graph.out_arcs(*v).len()), (0, 1));
        }
        for v in g.right.iter().chain(&g.bottom) {
            assert_eq!((g.graph.in_arcs(*v).len(), g.graph.out_arcs(*v).len()), (1, 0));
        }
    }

    #[test]
    fn boundary_order_is_clockwise() {
        let g = build_main(3, &[(2, 2)], BorderPolicy::Strict).unwrap();
        let names: Vec<String> = g.boundary_order().into_iter().map(|v| g.graph.name(v)).collect();
        assert_eq!(names, ["t_1", "t_2", "t_3", "r_1", "r_2", "r_3", "b_3", "b_2", "b_1", "l_3", "l_2", "l_1"]);
    }

    #[test]
    fn four_by_four_pair_2_3() {
        let g = four_by_four();
        let e = main_canonical(&g, (2, 3)).unwrap();
        assert_eq!(e.weight(), m_star(4));
        assert_eq!(main_represents(&g, &e).unwrap(), Some((2, 3)));
        let z = 7;
        assert!(!e.contains(g.arc_between(g.grid_vertex(z, 2), g.grid_vertex(z, 3))));
        assert!(!e.contains(g.arc_between(g.grid_vertex(z, 7), g.grid_vertex(z, 8))));
        let (gv, hv) = g.split_vertices((2, 3)).unwrap();
        assert!(e.contains(g.arc_between(g.grid_vertex(z, 2), gv)));
        assert!(e.contains(g.arc_between(gv, g.grid_vertex(z, 3))));
        assert!(e.contains(g.arc_between(g.grid_vertex(z, 7), hv)));
        assert!(e.contains(g.arc_between(hv, g.grid_vertex(z, 8))));
        assert!(main_canonical(&g, (3, 3)).is_err());
    }

    #[test]
    fn canonical_weights_strict() {
        for n in 3..=6 {
            let set: Vec<Pair> = (2..n).flat_map(|x| (2..n).map(move |y| (x, y))).collect();
            let g = build_main(n, &set, BorderPolicy::Strict).unwrap();
            for &p in &set {
                let e = main_canonical(&g, p).unwrap();
                let recomputed: u64 = e.arcs().iter().map(|&a| g.graph.arc(a).weight).sum();
                assert_eq!(recomputed, m_star(n));
                assert!(main_connectedness(&g, &e).unwrap());
                assert_eq!(main_represents(&g, &e).unwrap(), Some(p));
            }
        }
    }

    #[test]
    fn canonical_weights_relaxed() {
        for n in 2..=4 {
            let set: Vec<Pair> = (1..=n)
                .flat_map(|x| (1..=n).map(move |y| (x, y)))
                .filter(|&p| BorderPolicy::Relaxed.admits(n, p))
                .collect();
            let g = build_main(n, &set, BorderPolicy::Relaxed).unwrap();
            for &p in &set {
                let e = main_canonical(&g, p).unwrap();
                assert_eq!(e.weight(), m_star(n), "n={n} {p:?}");
                assert_eq!(main_represents(&g, &e).unwrap(), Some(p));
            }
        }
    }

    #[test]
    fn connectedness_failures() {
        let g = four_by_four();
        assert!(!main_connectedness(&g, &EdgeSolution::empty()).unwrap());
        let e = main_canonical(&g, (3, 2)).unwrap();
        let z = 10;
        let bridge = g.arc_between(g.grid_vertex(z, 4), g.grid_vertex(z, 5));
        assert!(!main_connectedness(&g, &e.without(&g.graph, bridge)).unwrap());
        let other = build_main(5, &[], BorderPolicy::Strict).unwrap();
        assert!(main_connectedness(&g, &EdgeSolution::all(&other.graph)).is_err());
    }

    #[test]
    fn represents_needs_unique_boundary_arcs() {
        let g = four_by_four();
        let a = main_canonical(&g, (2, 2)).unwrap();
        let b = main_canonical(&g, (3, 2)).unwrap();
        assert_eq!(main_represents(&g, &a.union(&g.graph, &b)).unwrap(), None);
    }
}
