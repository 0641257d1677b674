//! Branch and bound, the treewidth DP and exhaustive search on one random instance.

use dsteiner::graph::{random_digraph, random_terminals, ScssInstance, UndirectedGraph};
use dsteiner::solvers::{exact_scss, exhaustive_scss, scss_treewidth_dp, treewidth_upper, BnbOptions};

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let inst = ScssInstance::new(random_digraph(seed, 7, 16, 9), random_terminals(seed, 7, 3))?;
    let bnb = exact_scss(&inst, &BnbOptions::default())?;
    println!("bnb        weight {:>3}  nodes {}", bnb.weight, bnb.nodes_explored);
    let (w, td) = treewidth_upper(&UndirectedGraph::from_digraph(&inst.graph));
    let dp = scss_treewidth_dp(&inst, &td)?;
    println!("twdp (w={w}) weight {:>3}  states {}", dp.weight, dp.nodes_explored);
    let brute = exhaustive_scss(&inst)?;
    println!("exhaustive weight {:>3}", brute.weight);
    assert!(bnb.weight == dp.weight && dp.weight == brute.weight);
    Ok(())
}
