//! Edge weights to vertex counts: the subdivided instance answers the same question.

use dsteiner::graph::{random_digraph, random_terminals, Instance, ScssInstance};
use dsteiner::solvers::{decide_scss, exact_scss, min_vertex_count, vertexize, BnbOptions};

fn main() -> anyhow::Result<()> {
    let inst = ScssInstance::new(random_digraph(4, 5, 8, 3), random_terminals(4, 5, 2))?;
    let opt = exact_scss(&inst, &BnbOptions::default())?.weight;
    for c in [opt - 1, opt] {
        let v = vertexize(&Instance::Scss(inst.clone()), c);
        let count = min_vertex_count(&v.instance, None)?;
        println!(
            "C={c}: weight <= C {}; {} vertices after subdividing, min count {count} vs Cn+n = {}",
            decide_scss(&inst, c, None)?.is_yes(),
            v.instance.graph().vertex_count(),
            v.budget
        );
    }
    Ok(())
}
