use crate::*;
use slsn::graph::feasibility_check;
use slsn::random::random_feasible_instance;
use slsn::star_dst::{build_layered_dst, dst_table, solve_dst, solve_slst};

fn star_config() -> RandomConfig {
    let mut cfg = RandomConfig::small_unit_length();
    cfg.star = true;
    cfg.p = 1..=4;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slst_matches_layered_dst(seed in any::<u64>()) {
        let inst = seeded(seed, &star_config());
        let root = inst.demands.star_root().unwrap();
        let (dst, _) = build_layered_dst(&inst, root).unwrap();
        match (solve_slst(&inst), solve_dst(&dst)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.cost, b.cost),
            (Err(SlsnError::Infeasible), Err(SlsnError::Infeasible)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|s| s.cost), b.map(|s| s.cost)),
        }
    }

    #[test]
    fn slst_paths_respect_bound(seed in any::<u64>()) {
        let inst = random_feasible_instance(&mut SeededRng::seed_from_u64(seed), &star_config());
        let sol = solve_slst(&inst).unwrap();
        let report = feasibility_check(&inst, &sol.edges).unwrap();
        for d in &report.demands {
            prop_assert!(d.shortest.as_ref().is_some_and(|l| *l <= inst.bound));
        }
        for p in &sol.paths {
            prop_assert!(p.length(&inst.graph) <= inst.bound);
        }
    }

    #[test]
    fn dst_table_is_monotone_in_subsets(seed in any::<u64>()) {
        let inst = seeded(seed, &star_config());
        let root = inst.demands.star_root().unwrap();
        let (dst, _) = build_layered_dst(&inst, root).unwrap();
        let table = dst_table(&dst).unwrap();
        let q = table.terminals().len();
        for v in 0..dst.n {
            prop_assert_eq!(table.value(v, 0), Some(zero()));
            for mask in 0..1usize << q {
                let full = table.value(v, mask);
                for b in 0..q {
                    if mask & (1 << b) != 0 {
                        prop_assert!(le_inf(&table.value(v, mask & !(1 << b)), &full));
                    }
                }
            }
        }
    }
}
