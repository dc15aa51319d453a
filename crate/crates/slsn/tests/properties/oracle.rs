use crate::*;
use slsn::graph::restricted_min_cost_path;
use slsn::oracle::brute_force_restricted_path;

fn with_bound(inst: &SlsnInstance, bound: i64) -> SlsnInstance {
    SlsnInstance::new(inst.graph.clone(), int(bound), inst.demands.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn optimum_survives_relabeling(
        (inst, perm) in instance(6, 10, 3).prop_flat_map(|i| { let n = i.n(); (Just(i), permutation(n)) })
    ) {
        prop_assert_eq!(optimum(&inst), optimum(&relabeled(&inst, &perm)));
    }

    #[test]
    fn optimum_is_monotone_in_bound(inst in instance(6, 10, 3)) {
        let mut prev = None;
        for bound in 1..=8 {
            let cur = optimum(&with_bound(&inst, bound));
            if bound > 1 {
                prop_assert!(le_inf(&cur, &prev), "cost rose at L = {}", bound);
            }
            prev = cur;
        }
    }

    #[test]
    fn restricted_path_oracle_agrees((n, edges) in edge_list(7, 12, 1)) {
        let g = graph_of(n, &edges);
        for u in 0..n {
            for v in 0..n {
                for h in 0..n {
                    let fast = restricted_min_cost_path(&g, u, v, h).unwrap();
                    let slow = brute_force_restricted_path(&g, u, v, &int(h as i64), OracleBudget::default()).unwrap();
                    prop_assert_eq!(path_cost(&g, &fast), path_cost(&g, &slow));
                }
            }
        }
    }
}
