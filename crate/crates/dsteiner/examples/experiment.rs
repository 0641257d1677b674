//! Run one named experiment and print its report and flat table.

use dsteiner::harness::{default_params, run_experiment, EXPERIMENTS};

fn main() -> anyhow::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "dsn-roundtrip".into());
    if !EXPERIMENTS.contains(&name.as_str()) {
        anyhow::bail!("pick one of {}", EXPERIMENTS.join(", "));
    }
    let mut params = default_params(&name)?;
    params.seeds = params.seeds.min(4);
    let report = run_experiment(&name, &params)?;
    println!("{report}\n");
    print!("{}", report.table());
    Ok(())
}
