//! The connector gadget `CG_n`.

use super::ReductionError;
use crate::graph::{ArcId, EdgeSolution, VertexId, Weight, WeightedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConnectorArc {
    Source(usize),
    Sink(usize),
    /// Arcs incident to `p` or `q`.
    Terminal,
    InrowUp,
    InrowDown,
    InrowLeft,
    InrowRight,
    Interrow,
    ShortcutE(usize),
    ShortcutF(usize),
}

/// `C*_n = 2B⁵ + 4B⁴ + (2n+1)B³ + (n+1)B² + (4n−2)B + (n+1)²` with `B = 18n²`.
pub fn c_star(n: usize) -> Weight {
    let n = n as Weight;
    let b = 18 * n * n;
    2 * b.pow(5) + 4 * b.pow(4) + (2 * n + 1) * b.pow(3) + (n + 1) * b * b + (4 * n - 2) * b + (n + 1) * (n + 1)
}

#[derive(Debug, Clone)]
pub struct ConnectorGadget {
    pub n: usize,
    pub graph: WeightedDigraph,
    pub p: VertexId,
    pub q: VertexId,
    /// `p_1..p_n`
    pub sources: Vec<VertexId>,
    /// `q_1..q_n`
    pub sinks: Vec<VertexId>,
    /// `B = 18n²`
    pub base: Weight,
    /// `C*_n`
    pub target: Weight,
    /// Family of every arc, indexed by arc id.
    pub kinds: Vec<ConnectorArc>,
    grid: Vec<Vec<VertexId>>,
    w: Vec<Vec<VertexId>>,
}

impl ConnectorGadget {
    /// `v_i^j` for row `0..=2n+3`, column `0..=4n`.
    pub fn grid_vertex(&self, i: usize, j: usize) -> VertexId {
        self.grid[i][j]
    }

    /// `w_i^j` for `i ∈ [n+1]`, `j ∈ [2n]`.
    pub fn w_vertex(&self, i: usize, j: usize) -> VertexId {
        self.w[i - 1][j - 1]
    }

    pub fn arc_between(&self, tail: VertexId, head: VertexId) -> ArcId {
        self.graph.find_arc(tail, head).expect("arc of the connector roster")
    }

    pub fn source_arc(&self, i: usize) -> ArcId {
        self.graph.out_arcs(self.sources[i - 1])[0]
    }

    pub fn sink_arc(&self, i: usize) -> ArcId {
        self.graph.in_arcs(self.sinks[i - 1])[0]
    }

    pub fn shortcut_e(&self, i: usize) -> ArcId {
        self.kinds.iter().position(|&k| k == ConnectorArc::ShortcutE(i)).expect("1 <= i <= n")
    }

    pub fn shortcut_f(&self, i: usize) -> ArcId {
        self.kinds.iter().position(|&k| k == ConnectorArc::ShortcutF(i)).expect("1 <= i <= n")
    }
}

pub fn build_connector(n: usize) -> Result<ConnectorGadget, ReductionError> {
    if n == 0 {
        return Err(ReductionError::BadSize("connector gadget needs n >= 1".into()));
    }
    let nn = n as Weight;
    let b = 18 * nn * nn;
    let mut g = WeightedDigraph::new();
    let mut kinds = Vec::new();
    let mut arc = |g: &mut WeightedDigraph, t: VertexId, h: VertexId, w: Weight, k: ConnectorArc| {
        g.add_arc(t, h, w).expect("vertices exist");
        kinds.push(k);
    };

    let p = g.add_labeled_vertex("p");
    let q = g.add_labeled_vertex("q");
    let sources: Vec<VertexId> = (1..=n).map(|i| g.add_labeled_vertex(format!("p_{i}"))).collect();
    let sinks: Vec<VertexId> = (1..=n).map(|i| g.add_labeled_vertex(format!("q_{i}"))).collect();
    let grid: Vec<Vec<VertexId>> = (0..=2 * n + 3)
        .map(|i| (0..=4 * n).map(|j| g.add_labeled_vertex(format!("v_{i}^{j}"))).collect())
        .collect();
    let w: Vec<Vec<VertexId>> = (1..=n + 1)
        .map(|i| (1..=2 * n).map(|j| g.add_labeled_vertex(format!("w_{i}^{j}"))).collect())
        .collect();
    let v = |i: usize, j: usize| grid[i][j];

    for i in 1..=n {
        arc(&mut g, sources[i - 1], v(0, 2 * i - 1), b.pow(5) + (nn - i as Weight + 1), ConnectorArc::Source(i));
    }
    for i in 1..=n {
        arc(&mut g, v(2 * n + 3, 2 * n + 2 * i - 1), sinks[i - 1], b.pow(5) + i as Weight, ConnectorArc::Sink(i));
    }
    for i in 1..=n {
        arc(&mut g, p, v(2 * i + 1, 0), b.pow(4), ConnectorArc::Terminal);
        arc(&mut g, v(2 * i, 0), p, b.pow(4), ConnectorArc::Terminal);
        arc(&mut g, q, v(2 * i + 1, 4 * n), b.pow(4), ConnectorArc::Terminal);
        arc(&mut g, v(2 * i, 4 * n), q, b.pow(4), ConnectorArc::Terminal);
    }
    for ii in 0..=n + 1 {
        let (even, odd) = (2 * ii, 2 * ii + 1);
        for j in 0..=2 * n {
            arc(&mut g, v(odd, 2 * j), v(even, 2 * j), b.pow(3), ConnectorArc::InrowUp);
        }
        for j in 1..=2 * n {
            arc(&mut g, v(even, 2 * j - 1), v(odd, 2 * j - 1), 0, ConnectorArc::InrowDown);
            arc(&mut g, v(even, 2 * j), v(even, 2 * j - 1), 0, ConnectorArc::InrowLeft);
            arc(&mut g, v(odd, 2 * j - 1), v(odd, 2 * j - 2), 0, ConnectorArc::InrowLeft);
            arc(&mut g, v(even, 2 * j - 2), v(even, 2 * j - 1), b, ConnectorArc::InrowRight);
            arc(&mut g, v(odd, 2 * j - 1), v(odd, 2 * j), b, ConnectorArc::InrowRight);
        }
    }
    let half = b * b / 2;
    for i in 1..=n + 1 {
        for j in 1..=2 * n {
            let wv = w[i - 1][j - 1];
            arc(&mut g, v(2 * i - 1, 2 * j - 1), wv, half, ConnectorArc::Interrow);
            arc(&mut g, wv, v(2 * i, 2 * j - 1), half, ConnectorArc::Interrow);
        }
    }
    for i in 1..=n {
        arc(&mut g, v(2 * n - 2 * i + 2, 2 * i - 2), w[n - i][i - 1], nn * i as Weight, ConnectorArc::ShortcutE(i));
    }
    for i in 1..=n {
        arc(&mut g, w[n - i + 1][n + i - 1], v(2 * n - 2 * i + 3, 2 * n + 2 * i), nn * (nn - i as Weight + 1), ConnectorArc::ShortcutF(i));
    }

    Ok(ConnectorGadget { n, graph: g, p, q, sources, sinks, base: b, target: c_star(n), kinds, grid, w })
}

/// The edge set `E_i`: weight `C*_n`, connected, represents `i`.
pub fn connector_canonical(gadget: &ConnectorGadget, i: usize) -> Result<EdgeSolution, ReductionError> {
    let n = gadget.n;
    if i == 0 || i > n {
        return Err(ReductionError::IndexOutOfRange(format!("connector index {i} not in [1,{n}]")));
    }
    let v = |r: usize, c: usize| gadget.grid_vertex(r, c);
    let at = |t: VertexId, h: VertexId| gadget.arc_between(t, h);
    let (a, b) = (2 * n - 2 * i + 2, 2 * n - 2 * i + 3);
    let mut arcs = vec![gadget.source_arc(i), gadget.sink_arc(i)];
    arcs.push(at(gadget.p, v(b, 0)));
    arcs.push(at(v(a, 0), gadget.p));
    arcs.push(at(gadget.q, v(b, 4 * n)));
    arcs.push(at(v(a, 4 * n), gadget.q));
    for j in 1..=2 * n {
        arcs.push(at(v(a, 2 * j), v(a, 2 * j - 1)));
        arcs.push(at(v(b, 2 * j - 1), v(b, 2 * j - 2)));
        arcs.push(at(v(a, 2 * j - 2), v(a, 2 * j - 1)));
        arcs.push(at(v(b, 2 * j - 1), v(b, 2 * j)));
        arcs.push(at(v(a, 2 * j - 1), v(b, 2 * j - 1)));
    }
    for j in 0..=2 * n {
        arcs.push(at(v(b, 2 * j), v(a, 2 * j)));
    }
    // P_1: column 2i-1 from row 0 down to row b
    let c1 = 2 * i - 1;
    for r in 0..b {
        if r % 2 == 0 {
            arcs.push(at(v(r, c1), v(r + 1, c1)));
        } else {
            let wv = gadget.w_vertex(r.div_ceil(2), i);
            arcs.push(at(v(r, c1), wv));
            arcs.push(at(wv, v(r + 1, c1)));
        }
    }
    // P_2: column 2n+2i-1 from row a down to row 2n+3
    let c2 = 2 * n + 2 * i - 1;
    for r in a..2 * n + 3 {
        if r % 2 == 0 {
            arcs.push(at(v(r, c2), v(r + 1, c2)));
        } else {
            let wv = gadget.w_vertex(r.div_ceil(2), n + i);
            arcs.push(at(v(r, c2), wv));
            arcs.push(at(wv, v(r + 1, c2)));
        }
    }
    arcs.push(gadget.shortcut_e(i));
    arcs.push(gadget.shortcut_f(i));
    let removed = [at(v(a, 2 * i - 2), v(a, 2 * i - 1)), at(v(b, 2 * n + 2 * i - 1), v(b, 2 * n + 2 * i))];
    arcs.retain(|x| !removed.contains(x));
    Ok(EdgeSolution::new(&gadget.graph, arcs).expect("gadget arcs"))
}

fn multi_reach(g: &WeightedDigraph, from: &[VertexId], mask: &[bool], backward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    for &s in from {
        if !seen[s] {
            let r = g.reach_set(s, Some(mask), backward);
            for (x, y) in seen.iter_mut().zip(r) {
                *x |= y;
            }
        }
    }
    seen
}

fn foreign(graph: &WeightedDigraph, set: &EdgeSolution) -> Result<(), ReductionError> {
    match set.arcs().iter().find(|&&a| a >= graph.arc_count()) {
        Some(&a) => Err(ReductionError::ForeignArc(a)),
        None => Ok(()),
    }
}

/// The four reachability conditions between `P`, `Q` and `p`, `q`.
pub fn connector_connectedness(gadget: &ConnectorGadget, set: &EdgeSolution) -> Result<bool, ReductionError> {
    foreign(&gadget.graph, set)?;
    let mask = set.mask(&gadget.graph);
    let from_p = multi_reach(&gadget.graph, &gadget.sources, &mask, false);
    let to_q = multi_reach(&gadget.graph, &gadget.sinks, &mask, true);
    Ok(from_p[gadget.p] && from_p[gadget.q] && to_q[gadget.p] && to_q[gadget.q])
}

/// `Some(i)` iff the only arc leaving `P` is at `p_i` and the only arc
/// entering `Q` is at `q_i`.
pub fn connector_represents(gadget: &ConnectorGadget, set: &EdgeSolution) -> Result<Option<usize>, ReductionError> {
    if !connector_connectedness(gadget, set)? {
        return Err(ReductionError::NotConnected);
    }
    let used_src: Vec<usize> = (1..=gadget.n).filter(|&i| set.contains(gadget.source_arc(i))).collect();
    let used_snk: Vec<usize> = (1..=gadget.n).filter(|&i| set.contains(gadget.sink_arc(i))).collect();
    Ok(match (used_src.as_slice(), used_snk.as_slice()) {
        ([i], [j]) if i == j => Some(*i),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_star_at_two() {
        assert_eq!(c_star(2), 3_979_212_921);
        // independent evaluation with B = 72
        let b: u64 = 72;
        assert_eq!(c_star(2), 2 * b.pow(5) + 4 * b.pow(4) + 5 * b.pow(3) + 3 * b * b + 6 * b + 9);
    }

    #[test]
    fn roster_counts_n2() {
        let g = build_connector(2).unwrap();
        assert_eq!(g.graph.vertex_count(), 90);
        let count = |k: ConnectorArc| g.kinds.iter().filter(|&&x| x == k).count();
        let n = 2;
        assert_eq!(count(ConnectorArc::Terminal), 4 * n);
        assert_eq!(count(ConnectorArc::InrowUp), (n + 2) * (2 * n + 1));
        assert_eq!(count(ConnectorArc::InrowDown), (n + 2) * 2 * n);
        assert_eq!(count(ConnectorArc::InrowLeft), (2 * n + 4) * 2 * n);
        assert_eq!(count(ConnectorArc::InrowRight), (2 * n + 4) * 2 * n);
        assert_eq!(count(ConnectorArc::Interrow), 4 * n * (n + 1));
        assert_eq!(g.graph.arc_count(), 2 * n + 4 * n + 20 + 16 + 32 + 32 + 24 + 2 * n);
        assert_eq!(g.base * g.base / 2, 162 * 16);
    }

    #[test]
    fn shortcut_weights() {
        for n in 1..=6 {
            let g = build_connector(n).unwrap();
            for i in 1..=n {
                assert_eq!(g.graph.arc(g.shortcut_e(i)).weight, (n * i) as u64);
                assert_eq!(g.graph.arc(g.shortcut_f(i)).weight, (n * (n - i + 1)) as u64);
            }
            assert_eq!(g.kinds.iter().filter(|k| matches!(k, ConnectorArc::ShortcutE(_) | ConnectorArc::ShortcutF(_))).count(), 2 * n);
        }
    }

    #[test]
    fn distinguished_degrees() {
        for n in 1..=4 {
            let g = build_connector(n).unwrap();
            for &s in &g.sources {
                assert_eq!((g.graph.in_arcs(s).len(), g.graph.out_arcs(s).len()), (0, 1));
            }
            for &t in &g.sinks {
                assert_eq!((g.graph.in_arcs(t).len(), g.graph.out_arcs(t).len()), (1, 0));
            }
        }
    }

    #[test]
    fn canonical_sets() {
        for n in 1..=6 {
            let g = build_connector(n).unwrap();
            for i in 1..=n {
                let e = connector_canonical(&g, i).unwrap();
                assert_eq!(e.weight(), c_star(n), "n={n} i={i}");
                assert!(connector_connectedness(&g, &e).unwrap());
                assert_eq!(connector_represents(&g, &e).unwrap(), Some(i));
                let v = |r, c| g.grid_vertex(r, c);
                let (a, b) = (2 * n - 2 * i + 2, 2 * n - 2 * i + 3);
                assert!(!e.contains(g.arc_between(v(a, 2 * i - 2), v(a, 2 * i - 1))));
                assert!(!e.contains(g.arc_between(v(b, 2 * n + 2 * i - 1), v(b, 2 * n + 2 * i))));
                let we = g.w_vertex(n - i + 1, i);
                assert!(e.contains(g.arc_between(v(a, 2 * i - 2), we)));
                assert!(e.contains(g.arc_between(we, v(a, 2 * i - 1))));
                let wf = g.w_vertex(n - i + 2, n + i);
                assert!(e.contains(g.arc_between(v(b, 2 * n + 2 * i - 1), wf)));
                assert!(e.contains(g.arc_between(wf, v(b, 2 * n + 2 * i))));
            }
            assert!(connector_canonical(&g, 0).is_err());
            assert!(connector_canonical(&g, n + 1).is_err());
        }
    }

    #[test]
    fn n3_i3_highlighted_set() {
        // rows R_2 and R_3 carry the horizontal part, P_1 runs down column 5
        let g = build_connector(3).unwrap();
        let e = connector_canonical(&g, 3).unwrap();
        let labels: Vec<String> = e.vertices(&g.graph).into_iter().map(|v| g.graph.name(v)).collect();
        for l in ["p_3", "q_3", "v_0^5", "w_1^3", "v_2^5", "v_3^5", "v_2^11", "w_3^6", "v_9^11", "p", "q"] {
            assert!(labels.iter().any(|x| x == l), "{l} missing");
        }
        assert!(!labels.iter().any(|x| x == "p_1" || x == "v_4^0"));
    }

    #[test]
    fn connectedness_failures() {
        let g = build_connector(2).unwrap();
        assert!(!connector_connectedness(&g, &EdgeSolution::empty()).unwrap());
        let e = connector_canonical(&g, 1).unwrap();
        assert!(!connector_connectedness(&g, &e.without(&g.graph, g.source_arc(1))).unwrap());
        let bad = EdgeSolution::all(&build_connector(3).unwrap().graph);
        assert!(matches!(connector_connectedness(&g, &bad), Err(ReductionError::ForeignArc(_))));
    }

    #[test]
    fn representation_failures() {
        let g = build_connector(3).unwrap();
        let e1 = connector_canonical(&g, 1).unwrap();
        let e2 = connector_canonical(&g, 2).unwrap();
        assert_eq!(connector_represents(&g, &e1.union(&g.graph, &e2)).unwrap(), None);
        let extra = EdgeSolution::new(&g.graph, e2.arcs().iter().copied().chain([g.sink_arc(3)])).unwrap();
        assert_eq!(connector_represents(&g, &extra).unwrap(), None);
        assert_eq!(connector_represents(&g, &EdgeSolution::empty()), Err(ReductionError::NotConnected));
    }
}
