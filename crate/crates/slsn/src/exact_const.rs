//! Exact solvers for a constant number of demands: unit lengths with
//! arbitrary costs, and the dual unit-cost variant with integer lengths.

use crate::error::{contract, Result, SlsnError};
use crate::graph::{hop_bellman_ford, subset_feasible, HopTable, Metric, SlsnInstance, Solution, VertexId};
use crate::guess::{scaled_costs, PairTable, RouteSearch};
use crate::rational::Rational;
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub jobs: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { jobs: 1 }
    }
}

/// One explicit guess: the extra vertices Q, Q' = Q ∪ terminals, and a hop
/// (or cost) budget for every guessed pair over Q'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpathGuess {
    pub q: Vec<VertexId>,
    pub q_prime: Vec<VertexId>,
    pub budgets: Vec<((VertexId, VertexId), usize)>,
}

impl SubpathGuess {
    /// Union of the cheapest budget-respecting path of every guessed pair;
    /// `None` as soon as one pair has no such path.
    fn union(&self, tables: &[HopTable]) -> Option<BTreeSet<usize>> {
        let mut edges = BTreeSet::new();
        for &((a, b), l) in &self.budgets {
            edges.extend(tables[a].path(b, l)?.edges);
        }
        Some(edges)
    }
}

fn warn_if_large(inst: &SlsnInstance) {
    if inst.p() > 4 {
        log::warn!(
            "{} demands: the guess space grows like n^(p^4) and may not finish",
            inst.p()
        );
    }
}

fn require_feasible(inst: &SlsnInstance, metric: &Metric) -> Result<()> {
    if subset_feasible(inst, metric, &vec![true; inst.m()]) {
        Ok(())
    } else {
        Err(SlsnError::Infeasible)
    }
}

fn finish(inst: &SlsnInstance, found: Option<(u128, Vec<usize>)>) -> Result<Solution> {
    match found {
        Some((_, edges)) => Solution::from_edges(inst, edges),
        // Unreachable when the full graph is feasible; the full edge set is
        // the initial incumbent.
        None => Solution::from_edges(inst, inst.all_edges()),
    }
}

/// Exact optimum for unit lengths and arbitrary costs.
pub fn solve_unit_length(inst: &SlsnInstance, opts: ExactOptions) -> Result<Solution> {
    if !inst.graph.has_unit_lengths() {
        return contract("solve_unit_length needs unit lengths");
    }
    warn_if_large(inst);
    let metric = Metric::for_instance(inst)?;
    require_feasible(inst, &metric)?;
    let (_, cost) = scaled_costs(inst)?;
    let hops = inst.hop_bound().min(inst.n().saturating_sub(1));
    let mut table = PairTable::new(inst.n());
    for u in 0..inst.n() {
        let bf = hop_bellman_ford(&inst.graph, u, hops, |e| &e.cost);
        for v in u + 1..inst.n() {
            let mut prev: Option<&Rational> = None;
            for h in 1..=hops {
                let Some(c) = bf.best(v, h) else { continue };
                if prev.is_none_or(|p| c < p) {
                    let path = bf.path(v, h).unwrap();
                    let len = path_len(&metric, &path.edges);
                    let pc = path.edges.iter().map(|&e| cost[e]).sum();
                    table.push(path, len, pc);
                }
                prev = Some(c);
            }
        }
    }
    table.finalize();
    let search = RouteSearch::new(inst, &metric, &cost, &table);
    finish(inst, search.run(opts.jobs))
}

fn path_len(metric: &Metric, edges: &[usize]) -> u128 {
    edges.iter().map(|&e| metric.len[e]).sum()
}

/// Exact optimum for unit costs and integer lengths: per pair, the shortest
/// path under each edge-count budget.
pub fn solve_unit_cost(inst: &SlsnInstance, opts: ExactOptions) -> Result<Solution> {
    if !inst.graph.has_unit_costs() {
        return contract("solve_unit_cost needs unit costs");
    }
    if !inst.graph.has_integer_lengths() {
        return contract("solve_unit_cost needs integer lengths");
    }
    warn_if_large(inst);
    let metric = Metric::for_instance(inst)?;
    require_feasible(inst, &metric)?;
    let (_, cost) = scaled_costs(inst)?;
    let budget = inst.n().saturating_sub(1);
    let mut table = PairTable::new(inst.n());
    for u in 0..inst.n() {
        let bf = hop_bellman_ford(&inst.graph, u, budget, |e| &e.length);
        for v in u + 1..inst.n() {
            let mut prev: Option<&Rational> = None;
            for c in 1..=budget {
                let Some(len) = bf.best(v, c) else { continue };
                if prev.is_none_or(|p| len < p) {
                    let path = bf.path(v, c).unwrap();
                    let l = path_len(&metric, &path.edges);
                    table.push(path.clone(), l, path.hops() as u128);
                }
                prev = Some(len);
            }
        }
    }
    table.finalize();
    let search = RouteSearch::new(inst, &metric, &cost, &table);
    finish(inst, search.run(opts.jobs))
}

/// Literal guess enumeration for unit lengths: every Q by size then
/// lexicographically, every E' over Q' and every hop budget in 1..=L.
/// Refuses when the number of guesses exceeds `max_guesses`.
pub fn solve_unit_length_exhaustive(inst: &SlsnInstance, max_guesses: u64) -> Result<Solution> {
    if !inst.graph.has_unit_lengths() {
        return contract("solve_unit_length_exhaustive needs unit lengths");
    }
    let metric = Metric::for_instance(inst)?;
    require_feasible(inst, &metric)?;
    let n = inst.n();
    let p = inst.p();
    let hops = inst.hop_bound().min(n.saturating_sub(1));
    let tables: Vec<_> = (0..n)
        .map(|u| hop_bellman_ford(&inst.graph, u, hops, |e| &e.cost))
        .collect();
    let terminals = inst.demands.vertices();
    let max_q = (p * p.saturating_sub(1)).min(n);
    let mut counted: u64 = 0;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut consider = |edges: BTreeSet<usize>| {
        let mask: Vec<bool> = (0..inst.m()).map(|e| edges.contains(&e)).collect();
        if !subset_feasible(inst, &metric, &mask) {
            return;
        }
        let edges: Vec<usize> = edges.into_iter().collect();
        let c = inst.graph.cost_of(&edges);
        if best.as_ref().is_none_or(|b| c < b.0) {
            best = Some((c, edges));
        }
    };
    for size in 0..=max_q {
        for q in combinations(n, size) {
            let qp: BTreeSet<VertexId> = q.iter().copied().chain(terminals.iter().copied()).collect();
            let qp: Vec<VertexId> = qp.into_iter().collect();
            let pairs: Vec<(VertexId, VertexId)> = (0..qp.len())
                .flat_map(|i| (i + 1..qp.len()).map(move |j| (i, j)))
                .map(|(i, j)| (qp[i], qp[j]))
                .collect();
            let radix = hops as u64 + 1;
            let count = radix
                .checked_pow(pairs.len() as u32)
                .ok_or_else(|| SlsnError::Budget("guess count overflow".into()))?;
            counted = counted.saturating_add(count);
            if counted > max_guesses {
                return Err(SlsnError::Budget(format!("more than {max_guesses} guesses")));
            }
            for code in 0..count {
                let mut rest = code;
                let mut budgets = Vec::new();
                for &pair in &pairs {
                    let l = (rest % radix) as usize;
                    rest /= radix;
                    if l > 0 {
                        budgets.push((pair, l));
                    }
                }
                let guess = SubpathGuess {
                    q: q.clone(),
                    q_prime: qp.clone(),
                    budgets,
                };
                if let Some(edges) = guess.union(&tables) {
                    consider(edges);
                }
            }
        }
    }
    match best {
        Some((_, edges)) => Solution::from_edges(inst, edges),
        None => Solution::from_edges(inst, inst.all_edges()),
    }
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_slsn, OracleBudget};
    use crate::random::{feasible_corpus, RandomConfig, Weights};
    use crate::rational::int;

    fn oracle_cost(inst: &SlsnInstance) -> Rational {
        brute_force_slsn(inst, OracleBudget::default(), 1).unwrap().cost
    }

    #[test]
    fn single_direct_edge() {
        let i = SlsnInstance::from_integers(2, &[(0, 1, 1, 4)], 1, &[(0, 1)]).unwrap();
        let s = solve_unit_length(&i, ExactOptions::default()).unwrap();
        assert_eq!((s.edges, s.cost), (vec![0], int(4)));
    }

    #[test]
    fn detour_versus_direct() {
        let edges = [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 3)];
        let i = SlsnInstance::from_integers(3, &edges, 1, &[(0, 2)]).unwrap();
        assert_eq!(solve_unit_length(&i, ExactOptions::default()).unwrap().cost, int(3));
        let i = SlsnInstance::from_integers(3, &edges, 2, &[(0, 2)]).unwrap();
        assert_eq!(solve_unit_length(&i, ExactOptions::default()).unwrap().cost, int(2));
    }

    /// Two demands that can share an expensive middle edge.
    fn theta() -> SlsnInstance {
        let edges = [
            (0, 2, 1, 1),
            (1, 2, 1, 1),
            (2, 3, 1, 5),
            (3, 4, 1, 1),
            (3, 5, 1, 1),
            (0, 6, 1, 3),
            (6, 4, 1, 3),
            (1, 7, 1, 3),
            (7, 5, 1, 3),
        ];
        SlsnInstance::from_integers(8, &edges, 3, &[(0, 4), (1, 5)]).unwrap()
    }

    #[test]
    fn shared_segment_is_reused() {
        let i = theta();
        let s = solve_unit_length(&i, ExactOptions::default()).unwrap();
        assert_eq!(s.cost, int(9));
        assert_eq!(s.cost, oracle_cost(&i));
        assert!(s.edges.contains(&2));
        assert!(s.cost < int(12));
        for p in &s.paths {
            assert!(p.edges.contains(&2));
        }
    }

    #[test]
    fn exhaustive_enumeration_agrees() {
        let i = theta();
        let cfg = RandomConfig {
            n: 3..=4,
            m: 2..=6,
            p: 1..=2,
            bound: Weights::Integer(1..=3),
            ..RandomConfig::small_unit_length()
        };
        for inst in feasible_corpus(11, 25, &cfg) {
            let a = solve_unit_length_exhaustive(&inst, 5_000_000).unwrap();
            let b = solve_unit_length(&inst, ExactOptions::default()).unwrap();
            assert_eq!(a.cost, b.cost);
        }
        assert!(matches!(
            solve_unit_length_exhaustive(&i, 10),
            Err(SlsnError::Budget(_))
        ));
    }

    #[test]
    fn random_unit_length_matches_oracle() {
        for inst in feasible_corpus(3, 60, &RandomConfig::small_unit_length()) {
            let s = solve_unit_length(&inst, ExactOptions::default()).unwrap();
            s.check(&inst).unwrap();
            assert_eq!(s.cost, oracle_cost(&inst));
            let par = solve_unit_length(&inst, ExactOptions { jobs: 3 }).unwrap();
            assert_eq!(par.cost, s.cost);
        }
    }

    #[test]
    fn unit_cost_prefers_fewer_edges() {
        // Demand 0-3: one edge of length 3, or two of length 1 each via 4.
        let edges = [(0, 3, 3, 1), (0, 4, 1, 1), (4, 3, 1, 1)];
        let i = SlsnInstance::from_integers(5, &edges, 3, &[(0, 3)]).unwrap();
        let s = solve_unit_cost(&i, ExactOptions::default()).unwrap();
        assert_eq!((s.edges, s.cost), (vec![0], int(1)));
        let i = SlsnInstance::from_integers(5, &edges, 2, &[(0, 3)]).unwrap();
        assert_eq!(solve_unit_cost(&i, ExactOptions::default()).unwrap().cost, int(2));
        let i = SlsnInstance::from_integers(5, &edges, 1, &[(0, 3)]).unwrap();
        assert!(matches!(
            solve_unit_cost(&i, ExactOptions::default()),
            Err(SlsnError::Infeasible)
        ));
    }

    #[test]
    fn unit_cost_joint_detour() {
        // Alone each demand takes its direct edge; together a two-edge hub
        // through 3 is cheaper than two directs plus nothing shared.
        let edges = [(0, 1, 2, 1), (0, 3, 1, 1), (3, 1, 1, 1), (3, 2, 1, 1), (0, 2, 4, 1), (1, 2, 4, 1)];
        let i = SlsnInstance::from_integers(4, &edges, 2, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let s = solve_unit_cost(&i, ExactOptions::default()).unwrap();
        assert_eq!(s.cost, oracle_cost(&i));
        assert_eq!(s.cost, int(3));
    }

    #[test]
    fn random_unit_cost_matches_oracle() {
        let cfg = RandomConfig {
            lengths: Weights::Integer(1..=4),
            costs: Weights::Unit,
            bound: Weights::Integer(1..=8),
            ..RandomConfig::small_unit_length()
        };
        for inst in feasible_corpus(5, 40, &cfg) {
            let s = solve_unit_cost(&inst, ExactOptions::default()).unwrap();
            s.check(&inst).unwrap();
            assert_eq!(s.cost, oracle_cost(&inst));
        }
    }

    #[test]
    fn contracts() {
        let i = SlsnInstance::from_integers(2, &[(0, 1, 2, 1)], 2, &[(0, 1)]).unwrap();
        assert!(matches!(solve_unit_length(&i, ExactOptions::default()), Err(SlsnError::Contract(_))));
        let i = SlsnInstance::from_integers(2, &[(0, 1, 1, 2)], 2, &[(0, 1)]).unwrap();
        assert!(matches!(solve_unit_cost(&i, ExactOptions::default()), Err(SlsnError::Contract(_))));
    }
}
