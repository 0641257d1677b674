//! Grid Tiling to planar SCSS: compose the gadgets and check the planted witness.

use dsteiner::graph::{planarity_check, validate_scss};
use dsteiner::reductions::{check_gadget_interface, compose_scss, plant_composable, scss_witness, w_star, BorderPolicy};

fn main() -> anyhow::Result<()> {
    let (gt, assignment) = plant_composable(5, 2, 2, 1, BorderPolicy::Relaxed)?;
    let comp = compose_scss(&gt, BorderPolicy::Relaxed)?;
    let g = &comp.instance.graph;
    println!("G*: {} vertices, {} arcs, {} terminals, planar {}", g.vertex_count(), g.arc_count(), comp.instance.k(), planarity_check(g));
    let w = scss_witness(&comp, &assignment)?;
    println!("witness weight {} (W* = {}), valid {}", w.weight(), w_star(2, 2), validate_scss(&comp.instance, &w)?);
    for r in check_gadget_interface(&comp, &w).gadgets {
        println!("  {:?}: weight {} represents {}", r.id, r.weight, r.represents.as_deref().unwrap_or("-"));
    }
    Ok(())
}
