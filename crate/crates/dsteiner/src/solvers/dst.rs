//! Dreyfus–Wagner for Directed Steiner Tree and the two-tree SCSS approximation.

use super::{SolveError, SolveResult};
use crate::graph::{ArcId, EdgeSolution, ScssInstance, VertexId, Weight, WeightedDigraph};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

const DW_TERMINAL_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy)]
enum Back {
    None,
    Leaf,
    Split(usize),
    Arc(ArcId),
}

/// Minimum-weight arc set in which `root` reaches every terminal.
///
/// `best[S][v]` is the cheapest arborescence rooted at `v` spanning the
/// terminal subset `S`; subsets are combined at `v` and then extended along
/// shortest paths.
pub fn dreyfus_wagner_dst(graph: &WeightedDigraph, root: VertexId, terminals: &[VertexId]) -> Result<SolveResult, SolveError> {
    graph.check_vertex(root)?;
    let mut ts: Vec<VertexId> = Vec::new();
    for &t in terminals {
        graph.check_vertex(t)?;
        if t != root && !ts.contains(&t) {
            ts.push(t);
        }
    }
    if ts.len() > DW_TERMINAL_LIMIT {
        return Err(SolveError::TooLarge(format!("{} terminals, limit {DW_TERMINAL_LIMIT}", ts.len())));
    }
    let reach = graph.reach_set(root, None, false);
    if ts.iter().any(|&t| !reach[t]) {
        return Err(SolveError::Infeasible);
    }
    if ts.is_empty() {
        return Ok(SolveResult { solution: EdgeSolution::empty(), weight: 0, optimal: true, nodes_explored: 0, lower_bound: 0 });
    }

    let n = graph.vertex_count();
    let k = ts.len();
    let full = (1usize << k) - 1;
    let mut best: Vec<Vec<Option<Weight>>> = vec![Vec::new(); full + 1];
    let mut back: Vec<Vec<Back>> = vec![Vec::new(); full + 1];
    for s in 1..=full {
        let mut cost: Vec<Option<Weight>> = vec![None; n];
        let mut how = vec![Back::None; n];
        if s.is_power_of_two() {
            let t = ts[s.trailing_zeros() as usize];
            cost[t] = Some(0);
            how[t] = Back::Leaf;
        } else {
            let low = s & s.wrapping_neg();
            // sub ranges over proper subsets containing the lowest bit
            let mut sub = (s - 1) & s;
            while sub > 0 {
                if sub & low != 0 {
                    let rest = s ^ sub;
                    for v in 0..n {
                        if let (Some(a), Some(b)) = (best[sub][v], best[rest][v]) {
                            if cost[v].is_none_or(|c| a + b < c) {
                                cost[v] = Some(a + b);
                                how[v] = Back::Split(sub);
                            }
                        }
                    }
                }
                sub = (sub - 1) & s;
            }
        }
        // extend backwards along arcs: best[S][u] <= w(u,v) + best[S][v]
        let mut heap: BinaryHeap<Reverse<(Weight, VertexId)>> = (0..n).filter_map(|v| cost[v].map(|c| Reverse((c, v)))).collect();
        while let Some(Reverse((d, v))) = heap.pop() {
            if cost[v] != Some(d) {
                continue;
            }
            for &a in graph.in_arcs(v) {
                let u = graph.arc(a).tail;
                let nd = d + graph.arc(a).weight;
                if cost[u].is_none_or(|c| nd < c) {
                    cost[u] = Some(nd);
                    how[u] = Back::Arc(a);
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        best[s] = cost;
        back[s] = how;
    }

    let value = best[full][root].ok_or(SolveError::Infeasible)?;
    let mut arcs = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((s, v)) = stack.pop() {
        match back[s][v] {
            Back::Leaf => {}
            Back::Split(sub) => {
                stack.push((sub, v));
                stack.push((s ^ sub, v));
            }
            Back::Arc(a) => {
                arcs.push(a);
                stack.push((s, graph.arc(a).head));
            }
            Back::None => unreachable!("finite entries have a back pointer"),
        }
    }
    let solution = EdgeSolution::new(graph, arcs).expect("graph arcs");
    debug_assert_eq!(solution.weight(), value);
    let weight = solution.weight();
    Ok(SolveResult { solution, weight, optimal: true, nodes_explored: (full as u64) * n as u64, lower_bound: weight })
}

/// Union of an out-arborescence and an in-arborescence at `root`; at most twice the optimum.
pub fn scss_two_approx(instance: &ScssInstance, root: VertexId) -> Result<SolveResult, SolveError> {
    let g = &instance.graph;
    if !instance.terminals.contains(&root) {
        return Err(SolveError::Graph(crate::graph::GraphError::UnknownVertex(root)));
    }
    let out = dreyfus_wagner_dst(g, root, &instance.terminals)?;
    // arc ids survive reversal, so the in-tree maps straight back
    let inn = dreyfus_wagner_dst(&g.reversed(), root, &instance.terminals)?;
    let solution = out.solution.union(g, &inn.solution);
    Ok(SolveResult {
        weight: solution.weight(),
        solution,
        optimal: false,
        nodes_explored: out.nodes_explored + inn.nodes_explored,
        lower_bound: out.weight.max(inn.weight),
    })
}
