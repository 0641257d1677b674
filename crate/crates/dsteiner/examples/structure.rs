//! Structure of a minimal solution: arborescence pair, W set, components.

use dsteiner::graph::{random_planar_digraph, random_terminals, ScssInstance};
use dsteiner::solvers::{exact_scss, BnbOptions};
use dsteiner::structure::{minimalize, verify_structure};

fn main() -> anyhow::Result<()> {
    let g = random_planar_digraph(21, 5, 5, 0.85, 9);
    let terminals = random_terminals(21, g.vertex_count(), 5);
    let inst = ScssInstance::new(g, terminals)?;
    let opt = exact_scss(&inst, &BnbOptions::default())?;
    let m = minimalize(&inst, &opt.solution)?;
    println!("{}", verify_structure(&inst, &m, inst.terminals[0])?);
    Ok(())
}
