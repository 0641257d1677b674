//! Recognising treewidth at most 2 by series-parallel reductions.

use crate::graph::UndirectedGraph;
use std::collections::BTreeSet;

/// True iff the graph has no `K4` minor.
///
/// Repeatedly deletes vertices of degree at most 1 and smooths vertices of
/// degree 2 (the new edge merges with an existing one); the graph has
/// treewidth at most 2 exactly when this empties it.
pub fn treewidth_le_2(g: &UndirectedGraph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut left = n;
    let mut stack: Vec<usize> = (0..n).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] || adj[v].len() > 2 {
            continue;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj[v].clear();
        alive[v] = false;
        left -= 1;
        stack.extend(nb);
    }
    left == 0
}

/// Replaces edge `{u, v}` by a path through one new vertex.
pub fn subdivide(g: &UndirectedGraph, u: usize, v: usize) -> UndirectedGraph {
    let x = g.vertex_count();
    let edges = g.edges().into_iter().filter(|&(a, b)| (a, b) != (u.min(v), u.max(v))).chain([(u, x), (x, v)]);
    UndirectedGraph::from_edges(x + 1, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::treewidth_exact_small;
    use proptest::prelude::*;

    fn complete(n: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    #[test]
    fn small_cases() {
        assert!(!treewidth_le_2(&complete(4)));
        assert!(treewidth_le_2(&complete(3)));
        for n in 3..10 {
            assert!(treewidth_le_2(&UndirectedGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))));
        }
        // K4 subdivided stays non-series-parallel
        assert!(!treewidth_le_2(&subdivide(&complete(4), 0, 1)));
    }

    #[test]
    fn all_graphs_on_five_vertices() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        for bits in 0u32..(1 << pairs.len()) {
            let g = UndirectedGraph::from_edges(5, pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e));
            assert_eq!(treewidth_le_2(&g), treewidth_exact_small(&g).unwrap().width() <= 2, "mask {bits:b}");
        }
    }

    proptest! {
        #[test]
        fn subdivision_closed(edges in proptest::collection::vec((0usize..8, 0usize..8), 1..14), pick in 0usize..100) {
            let g = UndirectedGraph::from_edges(8, edges);
            let es = g.edges();
            prop_assume!(!es.is_empty());
            let (u, v) = es[pick % es.len()];
            prop_assert_eq!(treewidth_le_2(&g), treewidth_le_2(&subdivide(&g, u, v)));
        }
    }
}
