//! Tree decompositions: validation, exact treewidth for small graphs and a
//! min-fill upper bound.

use super::SolveError;
use crate::graph::UndirectedGraph;
use std::collections::{BTreeSet, HashMap};

/// Largest vertex count accepted by [`treewidth_exact_small`].
pub const EXACT_TREEWIDTH_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex sets, one per tree node.
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Max bag size minus one; 0 for the empty decomposition.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the tree shape and the three decomposition properties.
    pub fn validate(&self, g: &UndirectedGraph) -> Result<(), String> {
        let t = self.bags.len();
        if t == 0 {
            return if g.vertex_count() == 0 { Ok(()) } else { Err("no bags".into()) };
        }
        if self.edges.len() != t - 1 {
            return Err(format!("{} tree edges for {t} nodes", self.edges.len()));
        }
        let mut parent: Vec<usize> = (0..t).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.edges {
            if a >= t || b >= t {
                return Err(format!("tree edge ({a},{b}) out of range"));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err("tree edges contain a cycle".into());
            }
            parent[ra] = rb;
        }
        let n = g.vertex_count();
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(format!("bag {i} holds unknown vertex {v}"));
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
            return Err(format!("vertex {v} is in no bag"));
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for (u, v) in g.edges() {
            if !holders[u].iter().any(|&i| sets[i].contains(&v)) {
                return Err(format!("edge {u}-{v} is in no bag"));
            }
        }
        let mut adj = vec![Vec::new(); t];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for v in 0..n {
            let mut seen = vec![false; t];
            let mut stack = vec![holders[v][0]];
            seen[holders[v][0]] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] && sets[y].contains(&v) {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != holders[v].len() {
                return Err(format!("bags holding vertex {v} are not connected"));
            }
        }
        Ok(())
    }

    /// The decomposition induced by eliminating vertices in `order`.
    pub fn from_elimination_order(g: &UndirectedGraph, order: &[usize]) -> Self {
        let n = g.vertex_count();
        if n == 0 {
            return Self { bags: Vec::new(), edges: Vec::new() };
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
        let mut bags = Vec::with_capacity(n);
        let mut later_nbrs = Vec::with_capacity(n);
        for &v in order {
            let nb: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            let mut bag = nb.clone();
            bag.push(v);
            bag.sort_unstable();
            bags.push(bag);
            later_nbrs.push(nb);
        }
        let mut edges = Vec::new();
        let mut roots = Vec::new();
        for (i, nb) in later_nbrs.iter().enumerate() {
            match nb.iter().map(|&u| pos[u]).min() {
                Some(p) => edges.push((i, p)),
                None => roots.push(i),
            }
        }
        for w in roots.windows(2) {
            edges.push((w[0], w[1]));
        }
        Self { bags, edges }
    }
}

fn masks(g: &UndirectedGraph) -> Vec<u32> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect()
}

/// `|Q(S, v)|`: vertices outside `S ∪ {v}` adjacent to the component of `v` in `G[S ∪ {v}]`.
fn q_size(adj: &[u32], s: u32, v: usize) -> u32 {
    let nbhd = |c: u32| {
        let mut out = 0u32;
        let mut rest = c;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            out |= adj[x];
            rest &= rest - 1;
        }
        out
    };
    let mut comp = 1u32 << v;
    loop {
        let grow = nbhd(comp) & s & !comp;
        if grow == 0 {
            break;
        }
        comp |= grow;
    }
    (nbhd(comp) & !s & !(1u32 << v)).count_ones()
}

/// Minimum-width decomposition by dynamic programming over eliminated vertex sets.
///
/// `TW(S) = min_{v ∈ S} max(TW(S∖v), |Q(S∖v, v)|)`, explored layer by layer
/// and pruned at the min-fill bound.
pub fn treewidth_exact_small(g: &UndirectedGraph) -> Result<TreeDecomposition, SolveError> {
    let n = g.vertex_count();
    if n > EXACT_TREEWIDTH_LIMIT {
        return Err(SolveError::TooLarge(format!("{n} vertices, limit {EXACT_TREEWIDTH_LIMIT}")));
    }
    let (ub, upper) = treewidth_upper(g);
    if n <= 1 || ub == 0 {
        return Ok(upper);
    }
    let adj = masks(g);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // layers[i]: sets of size i with TW < ub, mapped to (value, last eliminated vertex)
    let mut layers: Vec<HashMap<u32, (u32, u8)>> = vec![HashMap::from([(0u32, (0u32, u8::MAX))])];
    for _ in 0..n {
        let mut next: HashMap<u32, (u32, u8)> = HashMap::new();
        for (&s, &(val, _)) in layers.last().expect("non-empty") {
            let mut free = full & !s;
            while free != 0 {
                let v = free.trailing_zeros() as usize;
                free &= free - 1;
                let cand = val.max(q_size(&adj, s, v));
                if (cand as usize) < ub {
                    let e = next.entry(s | 1 << v).or_insert((u32::MAX, 0));
                    if cand < e.0 {
                        *e = (cand, v as u8);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(upper);
        }
        layers.push(next);
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    for layer in layers.iter().rev() {
        if s == 0 {
            break;
        }
        let v = layer[&s].1 as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(TreeDecomposition::from_elimination_order(g, &order))
}

/// Min-fill elimination heuristic (ties: fewer neighbours, then lower id).
pub fn treewidth_upper(g: &UndirectedGraph) -> (usize, TreeDecomposition) {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let nb: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0;
                for (i, &a) in nb.iter().enumerate() {
                    for &b in &nb[i + 1..] {
                        if !adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                (fill, nb.len(), v)
            })
            .expect("a live vertex remains");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        alive[v] = false;
        order.push(v);
    }
    let td = TreeDecomposition::from_elimination_order(g, &order);
    (td.width(), td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(r: usize, c: usize) -> UndirectedGraph {
        let id = |i: usize, j: usize| i * c + j;
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i + 1 < r {
                    e.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    e.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        UndirectedGraph::from_edges(r * c, e)
    }

    fn complete(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    #[test]
    fn small_families() {
        let k4 = treewidth_exact_small(&complete(4)).unwrap();
        assert_eq!(k4.width(), 3);
        k4.validate(&complete(4)).unwrap();
        let path = UndirectedGraph::from_edges(6, (0..5).map(|i| (i, i + 1)));
        assert_eq!(treewidth_exact_small(&path).unwrap().width(), 1);
        assert_eq!(treewidth_upper(&path).0, 1);
        let cycle = UndirectedGraph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7)));
        assert_eq!(treewidth_upper(&cycle).0, 2);
        assert_eq!(treewidth_exact_small(&cycle).unwrap().width(), 2);
        let g3 = grid(3, 3);
        let td = treewidth_exact_small(&g3).unwrap();
        td.validate(&g3).unwrap();
        assert_eq!(td.width(), 3);
        assert_eq!(treewidth_exact_small(&grid(4, 4)).unwrap().width(), 4);
        assert_eq!(treewidth_exact_small(&UndirectedGraph::new(3)).unwrap().width(), 0);
    }

    #[test]
    fn validate_rejects_broken_decompositions() {
        let g = UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]);
        let bad_edge = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], edges: vec![(0, 1)] };
        assert!(bad_edge.validate(&g).is_err());
        let bad_p3 = TreeDecomposition { bags: vec![vec![0, 1], vec![2], vec![1, 2]], edges: vec![(0, 1), (1, 2)] };
        assert!(bad_p3.validate(&g).is_err());
        let good = TreeDecomposition { bags: vec![vec![0, 1], vec![1, 2]], edges: vec![(0, 1)] };
        good.validate(&g).unwrap();
    }

    proptest! {
        #[test]
        fn exact_is_valid_and_below_upper(edges in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
            let g = UndirectedGraph::from_edges(9, edges);
            let (ub, upper) = treewidth_upper(&g);
            prop_assert!(upper.validate(&g).is_ok());
            let exact = treewidth_exact_small(&g).unwrap();
            prop_assert!(exact.validate(&g).is_ok());
            prop_assert!(exact.width() <= ub);
        }
    }
}
