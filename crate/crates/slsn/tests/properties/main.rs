//! Property tests over small random inputs, one module per library module.

mod approx;
mod classifier;
mod exact;
mod gadgets;
mod graph;
mod oracle;
mod star;

use proptest::collection::vec;
use proptest::prelude::*;
use slsn::oracle::{brute_force_slsn, OracleBudget};
use slsn::random::{random_instance, RandomConfig, SeedableRng, SeededRng};
use slsn::rational::int;
use slsn::{DemandGraph, Path, Rational, SlsnError, SlsnInstance, VertexId, WeightedGraph};

/// Edges as `(u, v, length, cost)`; parallel edges allowed.
pub type EdgeList = Vec<(VertexId, VertexId, i64, i64)>;

/// `n` vertices and up to `max_m` edges, lengths `1..=max_len`, costs 1–10.
pub fn edge_list(max_n: usize, max_m: usize, max_len: i64) -> impl Strategy<Value = (usize, EdgeList)> {
    (2..=max_n).prop_flat_map(move |n| {
        let edges = vec((0..n, 1..n, 1..=max_len, 1..=10i64), 1..=max_m)
            .prop_map(move |es| es.into_iter().map(|(u, d, l, c)| (u, (u + d) % n, l, c)).collect());
        (Just(n), edges)
    })
}

pub fn graph_of(n: usize, edges: &EdgeList) -> WeightedGraph {
    let mut g = WeightedGraph::new(n);
    for &(u, v, l, c) in edges {
        g.add(u, v, l, c).unwrap();
    }
    g
}

/// Random instance with up to three distinct demands and `L` in 1..=5.
pub fn instance(max_n: usize, max_m: usize, max_len: i64) -> impl Strategy<Value = SlsnInstance> {
    edge_list(max_n, max_m, max_len).prop_flat_map(|(n, edges)| {
        let demands = vec((0..n, 1..n), 1..=3);
        (Just(n), Just(edges), demands, 1..=5i64).prop_map(|(n, edges, ds, bound)| {
            let mut pairs: Vec<(usize, usize)> = ds.into_iter().map(|(s, d)| (s, (s + d) % n)).collect();
            for pr in &mut pairs {
                *pr = (pr.0.min(pr.1), pr.0.max(pr.1));
            }
            pairs.sort_unstable();
            pairs.dedup();
            SlsnInstance::from_integers(n, &edges, bound, &pairs).unwrap()
        })
    })
}

/// Seeded draw from the library generator.
pub fn seeded(seed: u64, cfg: &RandomConfig) -> SlsnInstance {
    random_instance(&mut SeededRng::seed_from_u64(seed), cfg)
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// The same instance with vertices renamed by `perm` and edges listed in
/// reverse order.
pub fn relabeled(inst: &SlsnInstance, perm: &[usize]) -> SlsnInstance {
    let mut g = WeightedGraph::new(inst.n());
    for e in inst.graph.edges().iter().rev() {
        g.add_edge(perm[e.v], perm[e.u], e.length.clone(), e.cost.clone()).unwrap();
    }
    let demands = DemandGraph::new(inst.demands.pairs().iter().map(|&(s, t)| (perm[s], perm[t]))).unwrap();
    SlsnInstance::new(g, inst.bound.clone(), demands).unwrap()
}

/// Oracle optimum, `None` when infeasible.
pub fn optimum(inst: &SlsnInstance) -> Option<Rational> {
    match brute_force_slsn(inst, OracleBudget::default(), 1) {
        Ok(s) => Some(s.cost),
        Err(SlsnError::Infeasible) => None,
        Err(e) => panic!("oracle failed: {e}"),
    }
}

pub fn path_cost(g: &WeightedGraph, p: &Option<Path>) -> Option<Rational> {
    p.as_ref().map(|p| p.cost(g))
}

/// `None` sorts above every value.
pub fn le_inf(a: &Option<Rational>, b: &Option<Rational>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

pub fn zero() -> Rational {
    int(0)
}
