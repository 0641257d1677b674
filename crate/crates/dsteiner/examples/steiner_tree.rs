//! Dreyfus–Wagner arborescences and the SCSS 2-approximation built from them.

use dsteiner::graph::{random_digraph, random_terminals, ScssInstance};
use dsteiner::solvers::{dreyfus_wagner_dst, exact_scss, scss_two_approx, BnbOptions};

fn main() -> anyhow::Result<()> {
    for seed in 0..8 {
        let g = random_digraph(seed, 8, 22, 9);
        let inst = ScssInstance::new(g, random_terminals(seed, 8, 4))?;
        let root = inst.terminals[0];
        let Ok(opt) = exact_scss(&inst, &BnbOptions::default()) else {
            println!("seed {seed}: terminals not strongly connected");
            continue;
        };
        let out = dreyfus_wagner_dst(&inst.graph, root, &inst.terminals[1..])?;
        let apx = scss_two_approx(&inst, root)?;
        println!("seed {seed}: out-tree {:>3}  approx {:>3}  opt {:>3}", out.weight, apx.weight, opt.weight);
    }
    Ok(())
}
