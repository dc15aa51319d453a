use crate::*;
use rand::Rng;
use slsn::classifier::{classify, find_hard_pattern, relabel, verify_witness, DemandClass};
use std::collections::BTreeSet;

/// A non-star graph with at least 8192 edges drawn from one of four shapes:
/// sparse random, dense random, a hub with noise, and two hubs sharing
/// most neighbors.
pub fn large_graph(seed: u64, shape: u8) -> DemandGraph {
    let mut rng = SeededRng::seed_from_u64(seed);
    let want = rng.random_range(8192..=9000);
    let mut pairs = BTreeSet::new();
    let put = |a: usize, b: usize, pairs: &mut BTreeSet<(usize, usize)>| {
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    };
    match shape % 4 {
        0 | 1 => {
            let n = if shape % 4 == 1 { rng.random_range(140..=400) } else { rng.random_range(5000..=20000) };
            while pairs.len() < want {
                put(rng.random_range(0..n), rng.random_range(0..n), &mut pairs);
            }
        }
        2 => {
            let noise = rng.random_range(1..=50);
            for leaf in 1..=want {
                put(0, leaf, &mut pairs);
            }
            for _ in 0..noise {
                put(rng.random_range(1..=want + 100), rng.random_range(1..=want + 100), &mut pairs);
            }
        }
        _ => {
            let side = want;
            for w in 2..side + 2 {
                put(0, w, &mut pairs);
                if rng.random_bool(0.9) {
                    put(1, w, &mut pairs);
                }
            }
            for _ in 0..rng.random_range(0..200) {
                put(rng.random_range(2..side + 2), rng.random_range(2..side + 2), &mut pairs);
            }
        }
    }
    DemandGraph::new(pairs).unwrap()
}

fn same_class(a: &DemandClass, b: &DemandClass, perm: &[usize], p: usize) -> bool {
    match (a, b) {
        // A single edge is a star around either endpoint.
        (DemandClass::Star { root: x }, DemandClass::Star { root: y }) => p < 2 || perm[*x] == *y,
        (DemandClass::Bounded { p: x }, DemandClass::Bounded { p: y }) => x == y,
        (DemandClass::Hard { witness: x }, DemandClass::Hard { witness: y }) => x.case_tag == y.case_tag,
        _ => false,
    }
}

fn small_graph() -> impl Strategy<Value = DemandGraph> {
    vec((0..10usize, 1..10usize), 0..25).prop_map(|ps| {
        let set: BTreeSet<(usize, usize)> =
            ps.into_iter().map(|(a, d)| (a, (a + d) % 10)).map(|(a, b)| (a.min(b), a.max(b))).collect();
        DemandGraph::new(set).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn large_graphs_yield_verified_witnesses(seed in any::<u64>(), shape in 0u8..4) {
        let h = large_graph(seed, shape);
        prop_assume!(h.star_root().is_none());
        let w = find_hard_pattern(&h, 2).unwrap();
        prop_assert!(verify_witness(&h, &w), "{:?}", w);
        match classify(&h, 2).unwrap() {
            DemandClass::Hard { witness } => prop_assert!(verify_witness(&h, &witness)),
            other => prop_assert!(false, "expected a hard class, got {}", other),
        }
    }

    #[test]
    fn large_classes_survive_relabeling(seed in any::<u64>(), shape in 0u8..4) {
        let h = large_graph(seed, shape);
        let n = h.max_vertex().unwrap() + 1;
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut SeededRng::seed_from_u64(!seed));
        let g = relabel(&h, &perm).unwrap();
        let (a, b) = (classify(&h, 2).unwrap(), classify(&g, 2).unwrap());
        prop_assert!(same_class(&a, &b, &perm, h.p()), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn small_classes_survive_relabeling(h in small_graph(), perm in permutation(10), k in 2usize..=3) {
        let g = relabel(&h, &perm).unwrap();
        let (a, b) = (classify(&h, k).unwrap(), classify(&g, k).unwrap());
        prop_assert!(same_class(&a, &b, &perm, h.p()), "{} vs {}", a, b);
    }
}
