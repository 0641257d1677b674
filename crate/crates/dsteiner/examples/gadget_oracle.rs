//! Exact minimum over connectedness-satisfying edge sets of the n=2 connector,
//! intact and with shortcuts deleted.

use dsteiner::harness::connector_oracle;
use dsteiner::reductions::build_connector;

fn main() -> anyhow::Result<()> {
    let g = build_connector(2)?;
    let runs = [("intact", vec![]), ("without e_1", vec![g.shortcut_e(1)]), ("without e_1, e_2", vec![g.shortcut_e(1), g.shortcut_e(2)])];
    for (label, cut) in runs {
        let out = connector_oracle(&g, &cut, None)?;
        let reps: Vec<String> = out.optima.iter().map(|(_, r)| r.clone().unwrap_or_else(|| "-".into())).collect();
        println!("{label:<18} min {} (C* {}), optima represent [{}]", out.minimum, out.target, reps.join(" "));
    }
    Ok(())
}
