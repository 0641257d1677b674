//! Left-right planarity test (de Fraysseix, Ossona de Mendez, Rosenstiehl;
//! formulation after Brandes). Decision only, no embedding is produced.

use super::{UndirectedGraph, WeightedDigraph};

/// Is the underlying simple undirected graph planar?
pub fn planarity_check(graph: &WeightedDigraph) -> bool {
    is_planar(&UndirectedGraph::from_digraph(graph))
}

pub fn is_planar(g: &UndirectedGraph) -> bool {
    let n = g.vertex_count();
    if n > 2 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    // Both DFS passes recurse to the depth of the DFS tree.
    let g = g.clone();
    std::thread::Builder::new()
        .stack_size(64 + 2048 * n.max(1024))
        .spawn(move || Lr::new(&g).run())
        .expect("spawn planarity thread")
        .join()
        .expect("planarity thread panicked")
}

type Eid = usize;
const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Default)]
struct Interval {
    low: Option<Eid>,
    high: Option<Eid>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Default)]
struct Pair {
    left: Interval,
    right: Interval,
}

impl Pair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'a> {
    g: &'a UndirectedGraph,
    height: Vec<usize>,
    parent_edge: Vec<Option<Eid>>,
    // oriented edges
    tail: Vec<usize>,
    head: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<usize>,
    out: Vec<Vec<Eid>>,
    // testing phase
    refs: Vec<Option<Eid>>,
    lowpt_edge: Vec<Option<Eid>>,
    stack_bottom: Vec<usize>,
    stack: Vec<Pair>,
    // per vertex, per adjacency slot: has the undirected edge been oriented
    oriented: Vec<Vec<bool>>,
}

impl<'a> Lr<'a> {
    fn new(g: &'a UndirectedGraph) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            tail: Vec::new(),
            head: Vec::new(),
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting: Vec::new(),
            out: vec![Vec::new(); n],
            refs: Vec::new(),
            lowpt_edge: Vec::new(),
            stack_bottom: Vec::new(),
            stack: Vec::new(),
            oriented: (0..n).map(|v| vec![false; g.degree(v)]).collect(),
        }
    }

    fn run(mut self) -> bool {
        let n = self.g.vertex_count();
        let mut roots = Vec::new();
        for v in 0..n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                roots.push(v);
                self.orient(v);
            }
        }
        let m = self.tail.len();
        self.refs = vec![None; m];
        self.lowpt_edge = vec![None; m];
        self.stack_bottom = vec![0; m];
        for v in 0..n {
            let mut out = std::mem::take(&mut self.out[v]);
            out.sort_by_key(|&e| self.nesting[e]);
            self.out[v] = out;
        }
        roots.into_iter().all(|r| self.test(r))
    }

    fn mark_oriented(&mut self, v: usize, w: usize) -> bool {
        let i = self.g.neighbors(v).binary_search(&w).unwrap();
        if self.oriented[v][i] {
            return false;
        }
        self.oriented[v][i] = true;
        let j = self.g.neighbors(w).binary_search(&v).unwrap();
        self.oriented[w][j] = true;
        true
    }

    fn orient(&mut self, v: usize) {
        let e = self.parent_edge[v];
        for idx in 0..self.g.degree(v) {
            let w = self.g.neighbors(v)[idx];
            if !self.mark_oriented(v, w) {
                continue;
            }
            let vw = self.tail.len();
            self.tail.push(v);
            self.head.push(w);
            self.lowpt.push(self.height[v]);
            self.lowpt2.push(self.height[v]);
            self.nesting.push(0);
            self.out[v].push(vw);
            if self.height[w] == NONE {
                self.parent_edge[w] = Some(vw);
                self.height[w] = self.height[v] + 1;
                self.orient(w);
            } else {
                self.lowpt[vw] = self.height[w];
            }
            self.nesting[vw] = 2 * self.lowpt[vw];
            if self.lowpt2[vw] < self.height[v] {
                self.nesting[vw] += 1;
            }
            if let Some(e) = e {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: Eid) -> bool {
        match i.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn lowest(&self, p: &Pair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let out = self.out[v].clone();
        for (i, &ei) in out.iter().enumerate() {
            let w = self.head[ei];
            self.stack_bottom[ei] = self.stack.len();
            if self.parent_edge[w] == Some(ei) {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = Some(ei);
                self.stack.push(Pair {
                    left: Interval::default(),
                    right: Interval { low: Some(ei), high: Some(ei) },
                });
            }
            if self.lowpt[ei] < self.height[v] {
                let e = e.expect("a return edge below the root is impossible");
                if i == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if let Some(e) = e {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: Eid, e: Eid) -> bool {
        let mut p = Pair::default();
        loop {
            let mut q = self.stack.pop().expect("return edges of ei are on the stack");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qlow = q.right.low.expect("non-empty right interval");
            if self.lowpt[qlow] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[qlow] = self.lowpt_edge[e];
            }
            if self.stack.len() <= self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: Eid) {
        let u = self.tail[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.head[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.head[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = self.stack.last().expect("e has a return edge");
            let (hl, hr) = (top.left.high, top.right.high);
            self.refs[e] = match (hl, hr) {
                (Some(l), None) => Some(l),
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                _ => hr,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    fn k33() -> UndirectedGraph {
        UndirectedGraph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))))
    }

    fn grid(r: usize, c: usize) -> UndirectedGraph {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if j + 1 < c {
                    e.push((i * c + j, i * c + j + 1));
                }
                if i + 1 < r {
                    e.push((i * c + j, (i + 1) * c + j));
                }
            }
        }
        UndirectedGraph::from_edges(r * c, e)
    }

    fn subdivide_all(g: &UndirectedGraph) -> UndirectedGraph {
        let n = g.vertex_count();
        let edges = g.edges();
        let mut e = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            e.push((u, n + i));
            e.push((n + i, v));
        }
        UndirectedGraph::from_edges(n + edges.len(), e)
    }

    /// Brute-force Kuratowski/Wagner oracle: does `g` have a K5 or K3,3 minor?
    /// Enumerates restricted-growth labellings of vertices into branch sets.
    fn has_kuratowski_minor(g: &UndirectedGraph) -> bool {
        let n = g.vertex_count();
        let mut label = vec![0usize; n]; // 0 = unused, i>0 = branch set i-1
        fn rec(g: &UndirectedGraph, i: usize, used: usize, label: &mut Vec<usize>) -> bool {
            let n = g.vertex_count();
            if i == n {
                return (used == 5 || used == 6) && check(g, used, label);
            }
            for l in 0..=(used + 1).min(6) {
                label[i] = l;
                let nu = if l == used + 1 { used + 1 } else { used };
                if rec(g, i + 1, nu, label) {
                    return true;
                }
            }
            false
        }
        fn check(g: &UndirectedGraph, used: usize, label: &[usize]) -> bool {
            for b in 1..=used {
                let members: Vec<usize> = (0..label.len()).filter(|&v| label[v] == b).collect();
                let sub = g.induced(&members);
                if sub.components().len() != 1 {
                    return false;
                }
            }
            let mut adj = vec![vec![false; used]; used];
            for (u, v) in g.edges() {
                let (a, b) = (label[u], label[v]);
                if a > 0 && b > 0 && a != b {
                    adj[a - 1][b - 1] = true;
                    adj[b - 1][a - 1] = true;
                }
            }
            if used == 5 {
                return (0..5).all(|a| (0..5).all(|b| a == b || adj[a][b]));
            }
            // K3,3: some 3-subset containing block 0 against the rest
            for mask in 0u32..64 {
                if mask & 1 == 1 && mask.count_ones() == 3 {
                    let side: Vec<usize> = (0..6).filter(|&i| mask >> i & 1 == 1).collect();
                    let other: Vec<usize> = (0..6).filter(|&i| mask >> i & 1 == 0).collect();
                    if side.iter().all(|&a| other.iter().all(|&b| adj[a][b])) {
                        return true;
                    }
                }
            }
            false
        }
        rec(g, 0, 0, &mut label)
    }

    #[test]
    fn small_classics() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&k33()));
        let mut k5e = complete(5).edges();
        k5e.pop();
        assert!(is_planar(&UndirectedGraph::from_edges(5, k5e)));
        assert!(is_planar(&grid(7, 9)));
        assert!(!is_planar(&subdivide_all(&complete(5))));
        assert!(!is_planar(&subdivide_all(&k33())));
        assert!(is_planar(&UndirectedGraph::new(0)));
    }

    #[test]
    fn bidirected_k4_and_k5_digraphs() {
        for (n, planar) in [(4, true), (5, false)] {
            let mut g = WeightedDigraph::with_vertices(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        g.add_arc(u, v, 1).unwrap();
                    }
                }
            }
            assert_eq!(planarity_check(&g), planar);
        }
    }

    #[test]
    fn petersen_is_not_planar() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((5 + i, 5 + (i + 2) % 5));
            e.push((i, i + 5));
        }
        assert!(!is_planar(&UndirectedGraph::from_edges(10, e)));
    }

    #[test]
    fn grids_with_extra_edges() {
        let mut e = grid(5, 5).edges();
        e.push((0, 24));
        e.push((6, 12));
        assert!(is_planar(&UndirectedGraph::from_edges(25, e.clone())));
        // an edge joining two interior vertices of different faces
        e.push((6, 18));
        e.push((8, 16));
        assert!(!is_planar(&UndirectedGraph::from_edges(25, e)));
    }

    #[test]
    fn long_path_does_not_overflow_the_stack() {
        let n = 200_000;
        let g = UndirectedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)));
        assert!(is_planar(&g));
    }

    #[test]
    fn agrees_with_minor_oracle_on_random_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 2];
        for _ in 0..400 {
            let n = rng.gen_range(5..=7);
            let p = rng.gen_range(0.35..0.85);
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        e.push((u, v));
                    }
                }
            }
            let g = UndirectedGraph::from_edges(n, e);
            let expected = !has_kuratowski_minor(&g);
            seen[expected as usize] += 1;
            assert_eq!(is_planar(&g), expected, "{:?}", g.edges());
        }
        assert!(seen[0] > 20 && seen[1] > 20, "{seen:?}");
    }
}
