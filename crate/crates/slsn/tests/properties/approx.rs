use crate::*;
use slsn::approx::{approx_const, approx_star, height_table, is_tree, min_dist, opt_low};
use slsn::graph::feasibility_check;
use slsn::oracle::enumerate_simple_paths;
use slsn::random::{random_feasible_instance, Weights};
use slsn::rational::ratio;

fn rational_config(star: bool) -> RandomConfig {
    let mut cfg = RandomConfig::small_unit_length();
    cfg.lengths = Weights::Fraction { num: 1..=8, den: 1..=4 };
    cfg.costs = Weights::Fraction { num: 1..=10, den: 1..=3 };
    if star {
        cfg.star = true;
        cfg.p = 1..=4;
    }
    cfg
}

fn feasible(seed: u64, cfg: &RandomConfig) -> SlsnInstance {
    random_feasible_instance(&mut SeededRng::seed_from_u64(seed), cfg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_dist_guarantee(
        seed in any::<u64>(),
        eps_num in 1i64..10,
        c_num in 1i64..=60,
        c_den in 1i64..=3,
    ) {
        let mut cfg = rational_config(false);
        cfg.n = 2..=8;
        let inst = seeded(seed, &cfg);
        let g = &inst.graph;
        let eps = ratio(eps_num, 20);
        let c = ratio(c_num, c_den);
        let cheap = (int(1) - int(2) * &eps) * &c;
        for s in 0..inst.n() {
            for t in 0..inst.n() {
                let paths = enumerate_simple_paths(g, s, t, OracleBudget::default()).unwrap();
                let target = paths.iter().filter(|p| p.cost(g) <= cheap).map(|p| p.length(g)).min();
                let got = min_dist(g, s, t, &eps, &c).unwrap();
                if let Some(d) = target {
                    let p = got.expect("a cheap path exists");
                    p.validate(g).unwrap();
                    prop_assert!(p.cost(g) <= c);
                    prop_assert!(p.length(g) <= d);
                }
            }
        }
    }

    #[test]
    fn opt_low_brackets_optimum(seed in any::<u64>(), rational in any::<bool>()) {
        let cfg = if rational { rational_config(false) } else { RandomConfig::small_unit_length() };
        let inst = feasible(seed, &cfg);
        let opt = optimum(&inst).unwrap();
        let b = opt_low(&inst).unwrap();
        prop_assert!(b.c <= opt);
        prop_assert!(opt <= b.upper(inst.n()));
    }

    #[test]
    fn approx_const_is_feasible(seed in any::<u64>(), half in any::<bool>()) {
        let inst = feasible(seed, &rational_config(false));
        let eps = if half { ratio(1, 2) } else { ratio(1, 4) };
        let sol = approx_const(&inst, &eps, 1).unwrap();
        sol.check(&inst).unwrap();
        prop_assert!(feasibility_check(&inst, &sol.edges).unwrap().feasible());
        let opt = optimum(&inst).unwrap();
        prop_assert!(sol.cost <= (int(1) + &eps) * opt);
    }

    #[test]
    fn approx_star_is_a_feasible_tree(seed in any::<u64>()) {
        let inst = feasible(seed, &rational_config(true));
        let eps = ratio(1, 4);
        let sol = approx_star(&inst, &eps).unwrap();
        prop_assert!(feasibility_check(&inst, &sol.edges).unwrap().feasible());
        prop_assert!(is_tree(&inst.graph, &sol.edges));
        let root = inst.demands.star_root().unwrap();
        if !sol.edges.is_empty() {
            let touches = sol.edges.iter().any(|&e| inst.graph.edge(e).u == root || inst.graph.edge(e).v == root);
            prop_assert!(touches);
        }
        let opt = optimum(&inst).unwrap();
        prop_assert!(sol.cost <= (int(1) + &eps) * opt);
    }

    #[test]
    fn height_table_is_monotone(seed in any::<u64>(), eps_num in 1i64..=3) {
        let inst = feasible(seed, &rational_config(true));
        let table = height_table(&inst, &ratio(eps_num, 4)).unwrap();
        prop_assert_eq!(table.monotonicity_violations(), 0);
    }
}
