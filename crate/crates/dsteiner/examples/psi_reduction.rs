//! Partitioned Subgraph Isomorphism to unit-weight SCSS, decided at the budget.

use dsteiner::problems::{random_psi, serialize_psi, solve_psi};
use dsteiner::reductions::reduce_psi_to_scss;
use dsteiner::solvers::decide_scss;

fn main() -> anyhow::Result<()> {
    let psi = random_psi(3, 3, 6, 6);
    print!("{}", serialize_psi(&psi));
    let red = reduce_psi_to_scss(&psi)?;
    let d = decide_scss(&red.instance, red.budget, None)?;
    println!(
        "{} vertices, {} terminals, budget {}: SCSS {} / embedding {}",
        red.instance.graph.vertex_count(),
        red.instance.k(),
        red.budget,
        if d.is_yes() { "YES" } else { "NO" },
        if solve_psi(&psi).is_some() { "exists" } else { "none" }
    );
    Ok(())
}
