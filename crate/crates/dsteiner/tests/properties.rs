use dsteiner::graph::{parse_instance, random_digraph, random_terminals, serialize_instance, validate_scss, EdgeSolution, Instance, ScssInstance, UndirectedGraph};
use dsteiner::solvers::{exact_scss, scss_two_approx, treewidth_exact_small, treewidth_upper, BnbOptions, SolveError};
use dsteiner::structure::{is_minimal, minimalize, treewidth_le_2};
use proptest::prelude::*;

fn instance(seed: u64, n: usize, m: usize, k: usize) -> ScssInstance {
    ScssInstance::new(random_digraph(seed, n, m, 7), random_terminals(seed, n, k.min(n))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_is_a_fixed_point(seed in any::<u64>(), n in 2usize..9, m in 0usize..20, k in 1usize..4) {
        let text = serialize_instance(&Instance::Scss(instance(seed, n, m, k)));
        prop_assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn approximation_sandwich(seed in any::<u64>(), n in 3usize..7, m in 4usize..14, k in 2usize..4) {
        let inst = instance(seed, n, m, k);
        match exact_scss(&inst, &BnbOptions::default()) {
            Ok(opt) => {
                let apx = scss_two_approx(&inst, inst.terminals[0]).unwrap();
                prop_assert!(validate_scss(&inst, &apx.solution).unwrap());
                prop_assert!(apx.lower_bound <= opt.weight && opt.weight <= apx.weight && apx.weight <= 2 * opt.weight);
            }
            Err(e) => prop_assert_eq!(e, SolveError::Infeasible),
        }
    }

    #[test]
    fn minimalize_keeps_feasibility(seed in any::<u64>(), n in 3usize..8, m in 6usize..18, k in 2usize..5) {
        let inst = instance(seed, n, m, k);
        let all = EdgeSolution::all(&inst.graph);
        if validate_scss(&inst, &all).unwrap() {
            let min = minimalize(&inst, &all).unwrap();
            prop_assert!(validate_scss(&inst, &min).unwrap());
            prop_assert!(is_minimal(&inst, &min).is_ok());
            prop_assert!(min.weight() <= all.weight());
        }
    }

    #[test]
    fn min_fill_is_a_valid_upper_bound(seed in any::<u64>(), n in 1usize..11, m in 0usize..30) {
        let g = UndirectedGraph::from_digraph(&random_digraph(seed, n, m, 1));
        let (w, td) = treewidth_upper(&g);
        prop_assert!(td.validate(&g).is_ok());
        let exact = treewidth_exact_small(&g).unwrap().width();
        prop_assert!(exact <= w);
        prop_assert_eq!(treewidth_le_2(&g), exact <= 2);
    }
}
