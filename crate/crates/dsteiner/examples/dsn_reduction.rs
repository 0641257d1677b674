//! Grid Tiling to DSN on a planar DAG, solved exactly on a YES and a NO source.

use dsteiner::harness::dsn_source;
use dsteiner::problems::PlantAnswer;
use dsteiner::reductions::reduce_gt_to_dsn;
use dsteiner::solvers::{exact_dsn, BnbOptions};

fn main() -> anyhow::Result<()> {
    for answer in [PlantAnswer::Yes, PlantAnswer::No] {
        let gt = dsn_source(2, 2, 3, answer).expect("n = 3 has both answers");
        let red = reduce_gt_to_dsn(&gt)?;
        let r = exact_dsn(&red.instance, &BnbOptions::default())?;
        println!(
            "{answer:?}: {} vertices, acyclic {}, optimum {} vs threshold {}",
            red.instance.graph.vertex_count(),
            red.instance.graph.topological_order().is_some(),
            r.weight,
            red.threshold()
        );
    }
    Ok(())
}
