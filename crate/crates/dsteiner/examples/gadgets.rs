//! Canonical connector and main gadget solutions and their weight constants.

use dsteiner::reductions::{
    build_connector, build_main, c_star, connector_canonical, connector_represents, m_star, main_canonical, main_represents, BorderPolicy,
};

fn main() -> anyhow::Result<()> {
    for n in 2..=4 {
        let g = build_connector(n)?;
        let e = connector_canonical(&g, n)?;
        println!(
            "connector n={n}: {} vertices, {} arcs, C* = {}, E_{n} weighs {} and represents {:?}",
            g.graph.vertex_count(),
            g.graph.arc_count(),
            c_star(n),
            e.weight(),
            connector_represents(&g, &e)?
        );
    }
    let policy = BorderPolicy::Relaxed;
    let m = build_main(2, &[(1, 2), (2, 1)], policy)?;
    for p in [(1, 2), (2, 1)] {
        let e = main_canonical(&m, p)?;
        println!("main n=2 {p:?}: weight {} (M* = {}), represents {:?}", e.weight(), m_star(2), main_represents(&m, &e)?);
    }
    Ok(())
}
