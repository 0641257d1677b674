//! Reductions feeding solvers, serializers and the structural checks.

use dsteiner::graph::{parse_instance, planarity_check, serialize_instance, validate_dsn, validate_scss, Instance};
use dsteiner::harness::dsn_source;
use dsteiner::problems::{parse_gridtiling, random_psi, serialize_gridtiling, solve_gridtiling, solve_psi, PlantAnswer};
use dsteiner::reductions::{
    compose_scss, dsn_witness, plant_composable, psi_witness, reduce_gt_to_dsn, reduce_psi_to_scss, scss_witness, w_star, BorderPolicy,
};
use dsteiner::solvers::{decide_dsn, decide_scss, Decision};
use dsteiner::structure::{is_minimal, minimalize, verify_structure};

#[test]
fn composed_witness_is_minimal_and_structured() {
    let (gt, a) = plant_composable(3, 2, 2, 1, BorderPolicy::Relaxed).unwrap();
    let comp = compose_scss(&gt, BorderPolicy::Relaxed).unwrap();
    let w = scss_witness(&comp, &a).unwrap();
    let m = minimalize(&comp.instance, &w).unwrap();
    assert!(validate_scss(&comp.instance, &m).unwrap());
    // the witness weight is optimal, so pruning can only drop zero-weight arcs
    assert_eq!(m.weight(), w_star(2, 2));
    assert!(is_minimal(&comp.instance, &m).is_ok());
    let report = verify_structure(&comp.instance, &m, comp.instance.terminals[0]).unwrap();
    assert!(report.passes(), "{report}");
    assert!(report.w_size <= 9 * comp.instance.k());
}

#[test]
fn reduced_instances_survive_the_text_format() {
    let gt = dsn_source(7, 2, 3, PlantAnswer::Yes).unwrap();
    assert_eq!(parse_gridtiling(&serialize_gridtiling(&gt)).unwrap(), gt);
    let red = reduce_gt_to_dsn(&gt).unwrap();
    let inst = Instance::Dsn(red.instance.clone());
    let text = serialize_instance(&inst);
    let back = parse_instance(&text).unwrap();
    assert_eq!(serialize_instance(&back), text);
    assert!(planarity_check(back.graph()));
    let w = dsn_witness(&red, &solve_gridtiling(&gt).unwrap()).unwrap();
    assert!(validate_dsn(&back.to_dsn(), &w).unwrap());
}

#[test]
fn dsn_budget_decisions_follow_the_source() {
    for (seed, answer) in [(1, PlantAnswer::Yes), (2, PlantAnswer::No), (5, PlantAnswer::No)] {
        let gt = dsn_source(seed, 2, 3, answer).unwrap();
        let red = reduce_gt_to_dsn(&gt).unwrap();
        let d = decide_dsn(&red.instance, red.threshold(), None).unwrap();
        assert_eq!(d.is_yes(), answer == PlantAnswer::Yes, "seed {seed}");
    }
}

#[test]
fn psi_witness_meets_budget_and_decision_agrees() {
    for seed in 0..6 {
        let psi = random_psi(seed, 3, 5, 6);
        let red = reduce_psi_to_scss(&psi).unwrap();
        let truth = solve_psi(&psi);
        match decide_scss(&red.instance, red.budget, None).unwrap() {
            Decision::Yes(r) => {
                assert!(r.weight <= red.budget);
                let w = psi_witness(&red, truth.as_ref().expect("embedding exists")).unwrap();
                assert_eq!(w.weight(), red.budget);
            }
            Decision::No { .. } => assert!(truth.is_none()),
        }
    }
}
