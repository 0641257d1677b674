//! Exact treewidth, the min-fill bound and the treewidth-2 recognizer on grids.

use dsteiner::graph::UndirectedGraph;
use dsteiner::solvers::{treewidth_exact_small, treewidth_upper};
use dsteiner::structure::{subdivide, treewidth_le_2};

fn grid(r: usize, c: usize) -> UndirectedGraph {
    let id = |i: usize, j: usize| i * c + j;
    let mut edges = Vec::new();
    for i in 0..r {
        for j in 0..c {
            if i + 1 < r {
                edges.push((id(i, j), id(i + 1, j)));
            }
            if j + 1 < c {
                edges.push((id(i, j), id(i, j + 1)));
            }
        }
    }
    UndirectedGraph::from_edges(r * c, edges)
}

fn main() -> anyhow::Result<()> {
    for (r, c) in [(2, 2), (2, 5), (3, 3), (4, 4), (3, 6)] {
        let g = grid(r, c);
        let exact = treewidth_exact_small(&g)?;
        let (upper, _) = treewidth_upper(&g);
        println!("{r}x{c} grid: tw {} (min-fill {upper}), tw<=2 {}", exact.width(), treewidth_le_2(&g));
    }
    let k4 = UndirectedGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let sub = subdivide(&k4, 0, 1);
    println!("K4 tw<=2 {}; K4 with (0,1) subdivided tw<=2 {}", treewidth_le_2(&k4), treewidth_le_2(&sub));
    Ok(())
}
