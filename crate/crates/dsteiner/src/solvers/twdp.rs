//! Exact SCSS by dynamic programming over a tree decomposition of the input.
//!
//! The decomposition is first made nice (leaf, introduce vertex, introduce
//! arc, forget, join) with an empty root. A partial solution is summarised on
//! the current bag by
//! * the selected bag vertices,
//! * for each selected bag vertex, the selected bag vertices it reaches
//!   (through forgotten vertices too),
//! * whether a finished component has already been forgotten.
//!
//! A selected vertex may only be forgotten while it still reaches and is
//! reached from another selected bag vertex, unless it is the last one; by
//! induction on forget order every selected vertex then reaches, and is
//! reached from, the last forgotten one.

use super::{SolveError, SolveResult, TreeDecomposition};
use crate::graph::{ArcId, EdgeSolution, ScssInstance, UndirectedGraph, VertexId, Weight};
use std::collections::HashMap;

const BAG_LIMIT: usize = 32;

#[derive(Debug, Clone)]
enum Kind {
    Leaf,
    Introduce(VertexId),
    IntroduceArc(ArcId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone)]
struct Nice {
    kind: Kind,
    /// Sorted.
    bag: Vec<VertexId>,
    children: Vec<usize>,
}

struct NiceBuilder<'a> {
    inst: &'a ScssInstance,
    td: &'a TreeDecomposition,
    tree: Vec<Vec<usize>>,
    nodes: Vec<Nice>,
    introduced: Vec<bool>,
}

impl NiceBuilder<'_> {
    fn push(&mut self, kind: Kind, bag: Vec<VertexId>, children: Vec<usize>) -> usize {
        self.nodes.push(Nice { kind, bag, children });
        self.nodes.len() - 1
    }

    fn introduce(&mut self, v: VertexId, x: usize) -> usize {
        let mut bag = self.nodes[x].bag.clone();
        let p = bag.binary_search(&v).expect_err("vertex not yet in bag");
        bag.insert(p, v);
        self.push(Kind::Introduce(v), bag, vec![x])
    }

    /// Introduces the pending arcs at `v` towards the current bag, then forgets `v`.
    fn forget(&mut self, v: VertexId, mut x: usize) -> usize {
        let g = &self.inst.graph;
        let arcs: Vec<ArcId> = g.out_arcs(v).iter().chain(g.in_arcs(v)).copied().collect();
        for a in arcs {
            let arc = g.arc(a);
            let other = if arc.tail == v { arc.head } else { arc.tail };
            if !self.introduced[a] && other != v && self.nodes[x].bag.binary_search(&other).is_ok() {
                self.introduced[a] = true;
                let bag = self.nodes[x].bag.clone();
                x = self.push(Kind::IntroduceArc(a), bag, vec![x]);
            }
        }
        let mut bag = self.nodes[x].bag.clone();
        bag.retain(|&u| u != v);
        self.push(Kind::Forget(v), bag, vec![x])
    }

    fn build(&mut self, t: usize, parent: Option<usize>) -> usize {
        let bag = self.td.bags[t].clone();
        let children: Vec<usize> = self.tree[t].iter().copied().filter(|&c| Some(c) != parent).collect();
        if children.is_empty() {
            let mut x = self.push(Kind::Leaf, Vec::new(), Vec::new());
            for &v in &bag {
                x = self.introduce(v, x);
            }
            return x;
        }
        let mut branches = Vec::new();
        for c in children {
            let mut x = self.build(c, Some(t));
            let child_bag = self.td.bags[c].clone();
            for &v in child_bag.iter().filter(|v| bag.binary_search(v).is_err()) {
                x = self.forget(v, x);
            }
            for &v in bag.iter().filter(|v| child_bag.binary_search(v).is_err()) {
                x = self.introduce(v, x);
            }
            branches.push(x);
        }
        let mut x = branches[0];
        for &y in &branches[1..] {
            x = self.push(Kind::Join, bag.clone(), vec![x, y]);
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    sel: u32,
    /// Row `i`: bag positions reachable from position `i` (reflexive for selected).
    reach: Vec<u32>,
    closed: bool,
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Leaf,
    Unary(usize, Option<ArcId>),
    Join(usize, usize),
}

#[derive(Default)]
struct Table {
    entries: Vec<(State, Weight, Back)>,
    index: HashMap<State, usize>,
}

impl Table {
    fn offer(&mut self, s: State, w: Weight, back: Back) {
        match self.index.get(&s) {
            Some(&i) => {
                if w < self.entries[i].1 {
                    self.entries[i].1 = w;
                    self.entries[i].2 = back;
                }
            }
            None => {
                self.index.insert(s.clone(), self.entries.len());
                self.entries.push((s, w, back));
            }
        }
    }
}

fn insert_bit(m: u32, p: usize) -> u32 {
    let low = m & ((1u32 << p) - 1);
    ((m >> p) << (p + 1)) | low
}

fn remove_bit(m: u32, p: usize) -> u32 {
    let low = m & ((1u32 << p) - 1);
    ((m >> (p + 1)) << p) | low
}

fn close(reach: &mut [u32]) {
    loop {
        let mut changed = false;
        for i in 0..reach.len() {
            let mut r = reach[i];
            let mut rest = reach[i];
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                r |= reach[j];
            }
            if r != reach[i] {
                reach[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Exact SCSS given a tree decomposition of the underlying undirected graph.
pub fn scss_treewidth_dp(instance: &ScssInstance, td: &TreeDecomposition) -> Result<SolveResult, SolveError> {
    let g = &instance.graph;
    let und = UndirectedGraph::from_digraph(g);
    td.validate(&und).map_err(SolveError::BadDecomposition)?;
    if td.width() + 1 > BAG_LIMIT {
        return Err(SolveError::TooLarge(format!("bags of {} vertices, limit {BAG_LIMIT}", td.width() + 1)));
    }
    if instance.k() == 1 {
        return Ok(SolveResult { solution: EdgeSolution::empty(), weight: 0, optimal: true, nodes_explored: 0, lower_bound: 0 });
    }
    let mut tree = vec![Vec::new(); td.bags.len()];
    for &(a, b) in &td.edges {
        tree[a].push(b);
        tree[b].push(a);
    }
    let mut nb = NiceBuilder { inst: instance, td, tree, nodes: Vec::new(), introduced: vec![false; g.arc_count()] };
    let mut root = nb.build(0, None);
    for v in td.bags[0].clone() {
        root = nb.forget(v, root);
    }
    let nodes = nb.nodes;
    let mut is_terminal = vec![false; g.vertex_count()];
    for &t in &instance.terminals {
        is_terminal[t] = true;
    }

    // children always precede parents in `nodes`
    let mut tables: Vec<Table> = Vec::with_capacity(nodes.len());
    let mut explored: u64 = 0;
    for node in &nodes {
        let mut out = Table::default();
        match node.kind {
            Kind::Leaf => out.offer(State { sel: 0, reach: Vec::new(), closed: false }, 0, Back::Leaf),
            Kind::Introduce(v) => {
                let c = node.children[0];
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                for (i, (s, w, _)) in tables[c].entries.iter().enumerate() {
                    let mut reach: Vec<u32> = s.reach.iter().map(|&r| insert_bit(r, p)).collect();
                    reach.insert(p, 0);
                    let base = State { sel: insert_bit(s.sel, p), reach, closed: s.closed };
                    if !is_terminal[v] {
                        out.offer(base.clone(), *w, Back::Unary(i, None));
                    }
                    if !s.closed {
                        let mut took = base;
                        took.sel |= 1 << p;
                        took.reach[p] = 1 << p;
                        out.offer(took, *w, Back::Unary(i, None));
                    }
                }
            }
            Kind::IntroduceArc(a) => {
                let c = node.children[0];
                let arc = g.arc(a);
                let pu = node.bag.binary_search(&arc.tail).expect("tail in bag");
                let pv = node.bag.binary_search(&arc.head).expect("head in bag");
                for (i, (s, w, _)) in tables[c].entries.iter().enumerate() {
                    out.offer(s.clone(), *w, Back::Unary(i, None));
                    if s.sel >> pu & 1 == 1 && s.sel >> pv & 1 == 1 {
                        let mut took = s.clone();
                        let add = took.reach[pv];
                        for r in took.reach.iter_mut() {
                            if *r >> pu & 1 == 1 {
                                *r |= add;
                            }
                        }
                        out.offer(took, w + arc.weight, Back::Unary(i, Some(a)));
                    }
                }
            }
            Kind::Forget(v) => {
                let c = node.children[0];
                let p = tables_bag_pos(&nodes[c].bag, v);
                for (i, (s, w, _)) in tables[c].entries.iter().enumerate() {
                    let others = s.sel & !(1 << p);
                    let mut next = State { sel: remove_bit(s.sel, p), reach: Vec::with_capacity(s.reach.len() - 1), closed: s.closed };
                    for (j, &r) in s.reach.iter().enumerate() {
                        if j != p {
                            next.reach.push(remove_bit(r, p));
                        }
                    }
                    if s.sel >> p & 1 == 1 {
                        if others == 0 {
                            next.closed = true;
                        } else {
                            let reaches = s.reach[p] & others != 0;
                            let reached = (0..s.reach.len()).any(|j| others >> j & 1 == 1 && s.reach[j] >> p & 1 == 1);
                            if !(reaches && reached) {
                                continue;
                            }
                        }
                    }
                    out.offer(next, *w, Back::Unary(i, None));
                }
            }
            Kind::Join => {
                let (l, r) = (node.children[0], node.children[1]);
                let mut by_sel: HashMap<u32, Vec<usize>> = HashMap::new();
                for (j, (s, _, _)) in tables[r].entries.iter().enumerate() {
                    by_sel.entry(s.sel).or_default().push(j);
                }
                for (i, (s1, w1, _)) in tables[l].entries.iter().enumerate() {
                    let Some(partners) = by_sel.get(&s1.sel) else { continue };
                    for &j in partners {
                        let (s2, w2, _) = &tables[r].entries[j];
                        if s1.closed && s2.closed {
                            continue;
                        }
                        if (s1.closed || s2.closed) && s1.sel != 0 {
                            continue;
                        }
                        let mut reach: Vec<u32> = s1.reach.iter().zip(&s2.reach).map(|(a, b)| a | b).collect();
                        close(&mut reach);
                        out.offer(State { sel: s1.sel, reach, closed: s1.closed || s2.closed }, w1 + w2, Back::Join(i, j));
                    }
                }
            }
        }
        explored += out.entries.len() as u64;
        tables.push(out);
    }

    let goal = State { sel: 0, reach: Vec::new(), closed: true };
    let &start = tables[root].index.get(&goal).ok_or(SolveError::Infeasible)?;
    let weight = tables[root].entries[start].1;
    let mut arcs = Vec::new();
    let mut stack = vec![(root, start)];
    while let Some((x, e)) = stack.pop() {
        match tables[x].entries[e].2 {
            Back::Leaf => {}
            Back::Unary(i, a) => {
                arcs.extend(a);
                stack.push((nodes[x].children[0], i));
            }
            Back::Join(i, j) => {
                stack.push((nodes[x].children[0], i));
                stack.push((nodes[x].children[1], j));
            }
        }
    }
    let solution = EdgeSolution::new(g, arcs)?;
    debug_assert_eq!(solution.weight(), weight);
    Ok(SolveResult { solution, weight, optimal: true, nodes_explored: explored, lower_bound: weight })
}

fn tables_bag_pos(bag: &[VertexId], v: VertexId) -> usize {
    bag.binary_search(&v).expect("forgotten vertex in child bag")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate_scss, WeightedDigraph};
    use crate::solvers::{exhaustive_scss, treewidth_upper, exact_scss, BnbOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solve(inst: &ScssInstance) -> Result<SolveResult, SolveError> {
        let (_, td) = treewidth_upper(&UndirectedGraph::from_digraph(&inst.graph));
        scss_treewidth_dp(inst, &td)
    }

    #[test]
    fn triangle_width_two() {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 1).unwrap();
        g.add_arc(1, 2, 1).unwrap();
        g.add_arc(2, 0, 1).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1, 2]).unwrap();
        let td = TreeDecomposition { bags: vec![vec![0, 1, 2]], edges: vec![] };
        let r = scss_treewidth_dp(&inst, &td).unwrap();
        assert_eq!(r.weight, 3);
        assert!(validate_scss(&inst, &r.solution).unwrap());
        let bad = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], edges: vec![(0, 1)] };
        assert!(matches!(scss_treewidth_dp(&inst, &bad), Err(SolveError::BadDecomposition(_))));
    }

    #[test]
    fn bidirected_tree_doubles_steiner_tree() {
        // spider: centre 0, legs 0-1-2, 0-3-4, 0-5
        let legs = [(0, 1, 2), (1, 2, 1), (0, 3, 1), (3, 4, 3), (0, 5, 7)];
        let mut g = WeightedDigraph::with_vertices(6);
        for &(u, v, w) in &legs {
            g.add_arc(u, v, w).unwrap();
            g.add_arc(v, u, w).unwrap();
        }
        let inst = ScssInstance::new(g, vec![2, 4, 3]).unwrap();
        let r = solve(&inst).unwrap();
        assert_eq!(r.weight, 2 * (2 + 1 + 1 + 3));
        assert_eq!(r.weight, exact_scss(&inst, &BnbOptions::default()).unwrap().weight);
    }

    #[test]
    fn agrees_with_exhaustive_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..150 {
            let n = rng.gen_range(2..=6);
            let mut g = WeightedDigraph::with_vertices(n);
            let m = rng.gen_range(2..=12);
            for _ in 0..m {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    g.add_arc(u, v, rng.gen_range(0..=4)).unwrap();
                }
            }
            let k = rng.gen_range(1..=n.min(4));
            let inst = ScssInstance::new(g, (0..k).collect()).unwrap();
            match exhaustive_scss(&inst) {
                Ok(ex) => {
                    let r = solve(&inst).unwrap();
                    assert_eq!(r.weight, ex.weight);
                    assert!(validate_scss(&inst, &r.solution).unwrap());
                }
                Err(_) => assert_eq!(solve(&inst).unwrap_err(), SolveError::Infeasible),
            }
        }
    }
}
