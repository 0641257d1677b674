//! Parse an instance, solve it, and print the canonical text plus a solution line.

use dsteiner::graph::{parse_instance, serialize_instance, serialize_solution, Instance};
use dsteiner::solvers::{exact_scss, BnbOptions};

const TEXT: &str = "\
# a bidirected square with one expensive diagonal
V 4
L 0 north
L 2 south
A 0 1 2
A 1 0 2
A 1 2 2
A 2 1 2
A 2 3 1
A 3 2 1
A 3 0 1
A 0 3 1
A 0 2 9
T 0 2
";

fn main() -> anyhow::Result<()> {
    let inst = parse_instance(TEXT)?;
    print!("{}", serialize_instance(&inst));
    let Instance::Scss(scss) = &inst else { unreachable!() };
    let r = exact_scss(scss, &BnbOptions::default())?;
    println!("# optimum {}", r.weight);
    print!("{}", serialize_solution(&r.solution));
    Ok(())
}
