use crate::*;
use rand::Rng;
use slsn::classifier::{verify_witness, CaseTag};
use slsn::gadgets::{
    apply_poly_cost, build_case1, build_case2, build_case3, build_case4, build_case5, build_general, exact_bipartite,
    general_factor, length_bound, verify_structure, witness_solution, GadgetBundle, GadgetKind, MccInstance,
};
use slsn::graph::feasibility_check;
use slsn::rational::ratio;
use std::collections::BTreeSet;

/// Colors `1..=k` with the given class sizes, a planted clique on the
/// first vertex of every class when `plant` holds, and random other edges.
fn mcc(k: usize, sizes: &[usize], plant: bool, density: u32, seed: u64) -> (MccInstance, Vec<usize>) {
    let mut rng = SeededRng::seed_from_u64(seed);
    let mut coloring = Vec::new();
    let mut firsts = Vec::new();
    for (c, &s) in sizes.iter().enumerate().take(k) {
        firsts.push(coloring.len());
        coloring.extend(std::iter::repeat_n(c + 1, s));
    }
    let n = coloring.len();
    let mut edges = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if coloring[a] == coloring[b] {
                continue;
            }
            let planted = plant && firsts.contains(&a) && firsts.contains(&b);
            if planted || rng.random_ratio(density, 4) {
                edges.insert((a, b));
            }
        }
    }
    (MccInstance::new(k, coloring, edges.into_iter().collect()).unwrap(), firsts)
}

fn mcc_input() -> impl Strategy<Value = (usize, Vec<usize>, u32, u64)> {
    (2usize..=3).prop_flat_map(|k| (Just(k), vec(1usize..=2, k), 0u32..=3, any::<u64>()))
}

/// Star with `k(k−1)` leaves plus a disjoint edge, padded with further
/// disjoint edges.
fn padded_demands(k: usize, extra: usize) -> DemandGraph {
    let q = k * (k - 1);
    let mut pairs: Vec<(usize, usize)> = (1..=q).map(|t| (0, t)).collect();
    for i in 0..=extra {
        pairs.push((q + 1 + 2 * i, q + 2 + 2 * i));
    }
    DemandGraph::new(pairs).unwrap()
}

fn builds(m: &MccInstance, extra: usize) -> Vec<(GadgetKind, GadgetBundle)> {
    let k = m.k();
    vec![
        (GadgetKind::H0Star, build_case1(m).unwrap()),
        (GadgetKind::H1Star, build_case2(m).unwrap()),
        (GadgetKind::H2Star, build_case3(m).unwrap()),
        (GadgetKind::Matching, build_case4(m).unwrap()),
        (GadgetKind::Bipartite, build_case5(m, &exact_bipartite(k), None).unwrap()),
        (GadgetKind::General, build_general(m, &padded_demands(k, extra)).unwrap()),
    ]
}

/// Threshold minus the poly-cost witness cost of the bare pattern gadget.
fn poly_gap(tag: CaseTag, k: usize) -> Rational {
    let k = int(k as i64);
    let p = |e: usize| num_traits::pow(k.clone(), e);
    match tag {
        CaseTag::H2k => ratio(3, 2) * p(2) - ratio(3, 2) * p(1),
        _ => -p(4) + int(4) * p(3) - int(3) * p(1),
    }
}

fn binom2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

/// Vertex count of the bare pattern gadget.
fn pattern_vertices(tag: CaseTag, m: &MccInstance) -> usize {
    let (k, n, e) = (m.k(), m.n(), m.edges().len());
    let q = k * (k - 1);
    match tag {
        CaseTag::H2k => {
            let skeleton = 2 + binom2(k) + k + e + n + n * (k - 1) + q;
            skeleton + 3 * n * (k - 1) + 6 * binom2(q)
        }
        _ => {
            let matching = tag == CaseTag::Hkk;
            let long = 2 * k * k - 3;
            let skeleton = 1 + binom2(k) + e + 2 * n * (k - 1) + q + (k + 1) + if matching { q } else { 0 };
            let e1 = if matching { 0 } else { binom2(k) };
            skeleton + e1 + 2 * e * long + n * (k - 1) * long + 3 * n + 2 * n * (k - 2) + 2 * n
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn planted_cliques_meet_thresholds((k, sizes, density, seed) in mcc_input(), extra in 0usize..=1) {
        let (m, clique) = mcc(k, &sizes, true, density, seed);
        let eps = ratio(1, 4);
        for (kind, b) in builds(&m, extra) {
            let s = witness_solution(&b, &clique).unwrap();
            s.check(&b.instance).unwrap();
            prop_assert!(feasibility_check(&b.instance, &s.edges).unwrap().feasible(), "{:?}", kind);
            prop_assert_eq!(&s.cost, &b.g_value, "{:?}", kind);
            let report = verify_structure(&b, &s);
            prop_assert!(report.passed(), "{:?}: {:?}", kind, report);

            let poly = apply_poly_cost(&b, &eps).unwrap();
            let s = witness_solution(&poly, &clique).unwrap();
            prop_assert!(feasibility_check(&poly.instance, &s.edges).unwrap().feasible(), "{:?}", kind);
            prop_assert_eq!(poly.instance.n(), b.instance.n());
            let factor = if poly.extra_demands() > 0 {
                general_factor(length_bound(poly.case_tag(), k), poly.demand_graph.p(), &eps)
            } else {
                int(1)
            };
            let gap = poly_gap(poly.case_tag(), k) * factor;
            prop_assert_eq!(&poly.g_value - &s.cost, gap, "{:?}", kind);
            prop_assert!(verify_structure(&poly, &s).passed(), "{:?}", kind);
        }
    }

    #[test]
    fn sizes_and_patterns_match((k, sizes, density, seed) in mcc_input(), plant in any::<bool>(), extra in 0usize..=1) {
        let (m, _) = mcc(k, &sizes, plant, density, seed);
        for (kind, b) in builds(&m, extra) {
            prop_assert!(verify_witness(&b.demand_graph, &b.pattern), "{:?}", kind);
            prop_assert_eq!(b.instance.bound.clone(), int(length_bound(b.case_tag(), k)));
            let base = pattern_vertices(b.case_tag(), &m);
            if kind == GadgetKind::General {
                let image: BTreeSet<usize> = b.pattern.vertex_map.iter().copied().collect();
                let outside = b.demand_graph.vertices().iter().filter(|v| !image.contains(v)).count();
                let hops = length_bound(b.case_tag(), k) as usize - 1;
                prop_assert_eq!(b.instance.n(), base + outside + b.extra_demands() * hops);
            } else {
                prop_assert_eq!(b.instance.n(), base, "{:?}", kind);
                prop_assert_eq!(b.instance.p(), b.demand_graph.p());
            }
        }
    }

    #[test]
    fn edgeless_inputs_are_infeasible(k in 2usize..=3, sizes in vec(1usize..=2, 3), extra in 0usize..=1) {
        let (m, _) = mcc(k, &sizes, false, 0, 0);
        prop_assert!(m.edges().is_empty());
        for (kind, b) in builds(&m, extra) {
            let report = feasibility_check(&b.instance, &b.instance.all_edges()).unwrap();
            prop_assert!(!report.feasible(), "{:?}", kind);
        }
    }
}
