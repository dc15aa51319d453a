use crate::*;
use slsn::graph::{
    canonical_path_assignment, expand_to_unit, feasibility_check, restricted_min_cost_path, CostMode,
};
use slsn::oracle::{brute_force_restricted_path, enumerate_simple_paths};

/// Orients the segment of `p` between two of its vertices from `u` to `v`.
pub fn segment(p: &Path, u: VertexId, v: VertexId) -> (Vec<VertexId>, Vec<usize>) {
    let iu = p.vertices.iter().position(|&x| x == u).unwrap();
    let iv = p.vertices.iter().position(|&x| x == v).unwrap();
    let s = if iu <= iv { p.slice(iu, iv) } else { p.slice(iv, iu).reversed() };
    (s.vertices, s.edges)
}

/// Every `(i, j, u, v)` with `u, v` on both paths; returns the first
/// disagreement.
pub fn shared_subpath_violation(paths: &[Path]) -> Option<(usize, usize, VertexId, VertexId)> {
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let common: Vec<VertexId> =
                paths[i].vertices.iter().copied().filter(|v| paths[j].vertices.contains(v)).collect();
            for &u in &common {
                for &v in &common {
                    if segment(&paths[i], u, v) != segment(&paths[j], u, v) {
                        return Some((i, j, u, v));
                    }
                }
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn feasibility_matches_enumeration(inst in instance(7, 12, 3)) {
        let budget = OracleBudget::default();
        let paths: Vec<Vec<(Rational, Vec<usize>)>> = inst
            .demands
            .pairs()
            .iter()
            .map(|&(s, t)| {
                enumerate_simple_paths(&inst.graph, s, t, budget)
                    .unwrap()
                    .into_iter()
                    .map(|p| (p.length(&inst.graph), p.edges))
                    .collect()
            })
            .collect();
        for mask in 0u32..1 << inst.m() {
            let subset: Vec<usize> = (0..inst.m()).filter(|e| mask & (1 << e) != 0).collect();
            let report = feasibility_check(&inst, &subset).unwrap();
            for (d, candidates) in report.demands.iter().zip(&paths) {
                let shortest = candidates
                    .iter()
                    .filter(|(_, es)| es.iter().all(|e| mask & (1 << e) != 0))
                    .map(|(l, _)| l.clone())
                    .min();
                prop_assert_eq!(&d.shortest, &shortest);
                prop_assert_eq!(d.satisfied, shortest.is_some_and(|l| l <= inst.bound));
            }
        }
    }

    #[test]
    fn restricted_path_full_hops_and_monotone((n, edges) in edge_list(7, 12, 1)) {
        let g = graph_of(n, &edges);
        for u in 0..n {
            for v in 0..n {
                let all = enumerate_simple_paths(&g, u, v, OracleBudget::default()).unwrap();
                let best = all.iter().map(|p| p.cost(&g)).min();
                let full = restricted_min_cost_path(&g, u, v, n - 1).unwrap();
                prop_assert_eq!(path_cost(&g, &full), best);
                let mut prev: Option<Rational> = None;
                for h in 0..n {
                    let p = restricted_min_cost_path(&g, u, v, h).unwrap();
                    if let Some(p) = &p {
                        prop_assert!(p.hops() <= h);
                        p.validate(&g).unwrap();
                    }
                    let c = path_cost(&g, &p);
                    prop_assert!(le_inf(&c, &prev), "cost rose at hop bound {}", h);
                    prev = c;
                }
            }
        }
    }

    #[test]
    fn expansion_preserves_bounded_costs((n, edges) in edge_list(5, 6, 3)) {
        let g = graph_of(n, &edges);
        let split = expand_to_unit(&g, CostMode::DivideEqually).unwrap();
        let hops = expand_to_unit(&g, CostMode::UnitPerHop).unwrap();
        prop_assert!(split.graph.has_unit_lengths());
        let total: i64 = edges.iter().map(|e| e.2).sum();
        let budget = OracleBudget::default();
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (split.vertex_map[u], split.vertex_map[v]);
                for d in 0..=total {
                    let bound = int(d);
                    let orig = brute_force_restricted_path(&g, u, v, &bound, budget).unwrap();
                    let exp = brute_force_restricted_path(&split.graph, a, b, &bound, budget).unwrap();
                    prop_assert_eq!(path_cost(&g, &orig), path_cost(&split.graph, &exp));
                    let by_hops = brute_force_restricted_path(&hops.graph, a, b, &bound, budget).unwrap();
                    let shortest = orig.as_ref().map(|_| {
                        enumerate_simple_paths(&g, u, v, budget)
                            .unwrap()
                            .iter()
                            .map(|p| p.length(&g))
                            .min()
                            .unwrap()
                    });
                    prop_assert_eq!(path_cost(&hops.graph, &by_hops), shortest);
                }
            }
        }
    }

    #[test]
    fn canonical_paths_share_subpaths(inst in instance(7, 12, 3), mask in any::<u32>()) {
        let subsets = [inst.all_edges(), (0..inst.m()).filter(|e| mask & (1 << e) != 0).collect()];
        for subset in subsets {
            if !feasibility_check(&inst, &subset).unwrap().feasible() {
                continue;
            }
            let paths = canonical_path_assignment(&inst, &subset).unwrap();
            prop_assert_eq!(paths.len(), inst.p());
            for (p, &(s, t)) in paths.iter().zip(inst.demands.pairs()) {
                p.validate(&inst.graph).unwrap();
                prop_assert!(p.is_simple());
                prop_assert!(p.length(&inst.graph) <= inst.bound);
                prop_assert!(p.edges.iter().all(|e| subset.contains(e)));
                prop_assert_eq!((p.start().min(p.end()), p.start().max(p.end())), (s, t));
            }
            prop_assert_eq!(shared_subpath_violation(&paths), None);
        }
    }
}
