use crate::*;
use slsn::exact_const::{solve_unit_cost, solve_unit_length, ExactOptions};
use slsn::graph::{canonical_path_assignment, feasibility_check};
use slsn::random::{random_feasible_instance, Weights};

fn feasible(seed: u64, cfg: &RandomConfig) -> SlsnInstance {
    random_feasible_instance(&mut SeededRng::seed_from_u64(seed), cfg)
}

fn unit_cost_config() -> RandomConfig {
    let mut cfg = RandomConfig::small_unit_length();
    cfg.lengths = Weights::Integer(1..=4);
    cfg.costs = Weights::Unit;
    cfg
}

/// Maximal runs of consecutive vertices of `a` that also lie on `b`.
fn shared_runs(a: &Path, b: &Path) -> usize {
    let mut runs = 0;
    let mut inside = false;
    for v in &a.vertices {
        let on = b.vertices.contains(v);
        if on && !inside {
            runs += 1;
        }
        inside = on;
    }
    runs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_length_solution_is_feasible_and_label_free(
        seed in any::<u64>(),
        shuffle in any::<u64>(),
    ) {
        let inst = feasible(seed, &RandomConfig::small_unit_length());
        let sol = solve_unit_length(&inst, ExactOptions::default()).unwrap();
        sol.check(&inst).unwrap();
        prop_assert!(feasibility_check(&inst, &sol.edges).unwrap().feasible());
        let mut perm: Vec<usize> = (0..inst.n()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut SeededRng::seed_from_u64(shuffle));
        let other = solve_unit_length(&relabeled(&inst, &perm), ExactOptions::default()).unwrap();
        prop_assert_eq!(sol.cost, other.cost);
    }

    #[test]
    fn optimal_paths_have_few_breakpoints(seed in any::<u64>()) {
        let inst = feasible(seed, &RandomConfig::small_unit_length());
        let sol = solve_unit_length(&inst, ExactOptions::default()).unwrap();
        let paths = canonical_path_assignment(&inst, &sol.edges).unwrap();
        let p = inst.p();
        let mut shared = 0;
        for i in 0..p {
            for j in i + 1..p {
                let runs = shared_runs(&paths[i], &paths[j]);
                prop_assert!(runs <= 1, "paths {} and {} meet in {} pieces", i, j, runs);
                shared += runs;
            }
        }
        prop_assert!(shared + 2 * p <= p * (p - 1) / 2 + 2 * p);
    }

    #[test]
    fn unit_cost_solution_is_feasible_and_label_free(seed in any::<u64>(), shuffle in any::<u64>()) {
        let inst = feasible(seed, &unit_cost_config());
        let sol = solve_unit_cost(&inst, ExactOptions::default()).unwrap();
        sol.check(&inst).unwrap();
        prop_assert!(feasibility_check(&inst, &sol.edges).unwrap().feasible());
        let mut perm: Vec<usize> = (0..inst.n()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut SeededRng::seed_from_u64(shuffle));
        let other = solve_unit_cost(&relabeled(&inst, &perm), ExactOptions::default()).unwrap();
        prop_assert_eq!(sol.cost, other.cost);
    }
}
