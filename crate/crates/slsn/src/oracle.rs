//! Exhaustive ground-truth solvers. Exponential by design; every entry point
//! refuses inputs above its budget instead of truncating.

use crate::error::{Result, SlsnError};
use crate::gadgets::MccInstance;
use crate::graph::{subset_feasible, EdgeId, Metric, Path, SlsnInstance, Solution, VertexId, WeightedGraph};
use crate::rational::{common_denominator, scaled_u128, Rational};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_edges: usize,
    pub max_simple_paths: usize,
    /// Cap on one-vertex-per-color selections for the clique oracles.
    pub max_tuples: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges: 20,
            max_simple_paths: 1_000_000,
            max_tuples: 1_000_000,
        }
    }
}

fn refuse<T>(what: String) -> Result<T> {
    Err(SlsnError::Budget(what))
}

/// Lexicographic order of the sorted index lists encoded by two masks.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let x = (a ^ b).trailing_zeros();
    let above = |m: u64| if x >= 63 { 0 } else { m >> (x + 1) };
    if a & (1 << x) != 0 {
        // b lacks x: b is smaller only if it stops here.
        if above(b) != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if above(a) != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn mask_edges(mask: u64, m: usize) -> Vec<EdgeId> {
    (0..m).filter(|&e| mask & (1 << e) != 0).collect()
}

/// Minimum-cost feasible edge subset over all 2^m subsets; ties go to the
/// lexicographically smallest edge-index set. `jobs > 1` splits the subset
/// range across threads.
pub fn brute_force_slsn(inst: &SlsnInstance, budget: OracleBudget, jobs: usize) -> Result<Solution> {
    let m = inst.m();
    if m > budget.max_edges || m > 40 {
        return refuse(format!("{m} edges exceed the oracle cap of {}", budget.max_edges));
    }
    let metric = Metric::for_instance(inst)?;
    let full = vec![true; m];
    if !subset_feasible(inst, &metric, &full) {
        return Err(SlsnError::Infeasible);
    }
    let scale = common_denominator(inst.graph.edges().iter().map(|e| &e.cost));
    let cost: Vec<u128> = inst
        .graph
        .edges()
        .iter()
        .map(|e| scaled_u128(&e.cost, &scale))
        .collect::<Option<_>>()
        .ok_or_else(|| SlsnError::Overflow("scaled costs".into()))?;
    let total = 1u64 << m;
    let jobs = jobs.max(1).min(total as usize);
    let best = if jobs == 1 {
        sweep_memo(inst, &metric, &cost, m)
    } else {
        let chunk = total.div_ceil(jobs as u64);
        let results: Vec<Option<(u128, u64)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|j| {
                    let (metric, cost) = (&metric, &cost);
                    s.spawn(move || {
                        let lo = j * chunk;
                        let hi = ((j + 1) * chunk).min(total);
                        sweep_range(inst, metric, cost, m, lo, hi)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        results.into_iter().flatten().reduce(better)
    };
    let (_, mask) = best.ok_or(SlsnError::Infeasible)?;
    Solution::from_edges(inst, mask_edges(mask, m))
}

fn better(a: (u128, u64), b: (u128, u64)) -> (u128, u64) {
    match a.0.cmp(&b.0).then_with(|| lex_cmp(a.1, b.1)) {
        Ordering::Greater => b,
        _ => a,
    }
}

fn mask_cost(cost: &[u128], mask: u64) -> u128 {
    let mut c = 0;
    let mut rest = mask;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        c += cost[e];
        rest &= rest - 1;
    }
    c
}

fn to_bools(mask: u64, m: usize) -> Vec<bool> {
    (0..m).map(|e| mask & (1 << e) != 0).collect()
}

/// Sequential sweep: a subset is feasible when any one-smaller subset is,
/// otherwise it is checked directly.
fn sweep_memo(inst: &SlsnInstance, metric: &Metric, cost: &[u128], m: usize) -> Option<(u128, u64)> {
    let total = 1usize << m;
    let mut feasible = vec![false; total];
    let mut best: Option<(u128, u64)> = None;
    for mask in 0..total {
        let mut f = false;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if feasible[mask ^ bit] {
                f = true;
                break;
            }
            rest ^= bit;
        }
        if !f {
            f = subset_feasible(inst, metric, &to_bools(mask as u64, m));
        }
        feasible[mask] = f;
        if f {
            let cand = (mask_cost(cost, mask as u64), mask as u64);
            best = Some(best.map_or(cand, |b| better(b, cand)));
        }
    }
    best
}

fn sweep_range(
    inst: &SlsnInstance,
    metric: &Metric,
    cost: &[u128],
    m: usize,
    lo: u64,
    hi: u64,
) -> Option<(u128, u64)> {
    let mut best: Option<(u128, u64)> = None;
    for mask in lo..hi {
        let c = mask_cost(cost, mask);
        if best.is_some_and(|b| c > b.0) {
            continue;
        }
        if subset_feasible(inst, metric, &to_bools(mask, m)) {
            let cand = (c, mask);
            best = Some(best.map_or(cand, |b| better(b, cand)));
        }
    }
    best
}

/// Every simple u–v path, in depth-first order over adjacency lists.
pub fn enumerate_simple_paths(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    budget: OracleBudget,
) -> Result<Vec<Path>> {
    let n = g.vertex_count();
    if u >= n || v >= n {
        return Err(SlsnError::Input("vertex out of range".into()));
    }
    let mut out = Vec::new();
    let mut on = vec![false; n];
    let mut path = Path::trivial(u);
    on[u] = true;
    let mut visits = 0usize;
    dfs(g, v, &mut on, &mut path, &mut out, &mut visits, budget.max_simple_paths)?;
    Ok(out)
}

fn dfs(
    g: &WeightedGraph,
    target: VertexId,
    on: &mut [bool],
    path: &mut Path,
    out: &mut Vec<Path>,
    visits: &mut usize,
    cap: usize,
) -> Result<()> {
    *visits += 1;
    if *visits > cap {
        return refuse(format!("more than {cap} partial paths"));
    }
    let cur = path.end();
    if cur == target {
        out.push(path.clone());
        return Ok(());
    }
    for &(w, e) in g.neighbors(cur) {
        if on[w] {
            continue;
        }
        on[w] = true;
        path.vertices.push(w);
        path.edges.push(e);
        dfs(g, target, on, path, out, visits, cap)?;
        path.vertices.pop();
        path.edges.pop();
        on[w] = false;
    }
    Ok(())
}

/// Minimum-cost simple u–v path with length ≤ `length_bound`; ties go to the
/// shorter path, then the smaller edge sequence.
pub fn brute_force_restricted_path(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    length_bound: &Rational,
    budget: OracleBudget,
) -> Result<Option<Path>> {
    let paths = enumerate_simple_paths(g, u, v, budget)?;
    Ok(paths
        .into_iter()
        .map(|p| (p.cost(g), p.length(g), p))
        .filter(|(_, l, _)| l <= length_bound)
        .min()
        .map(|(_, _, p)| p))
}

/// Shortest simple u–v path among those with cost ≤ `cost_bound`.
pub fn brute_force_min_length_path(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    cost_bound: &Rational,
    budget: OracleBudget,
) -> Result<Option<Path>> {
    let paths = enumerate_simple_paths(g, u, v, budget)?;
    Ok(paths
        .into_iter()
        .map(|p| (p.length(g), p.cost(g), p))
        .filter(|(_, c, _)| c <= cost_bound)
        .min()
        .map(|(_, _, p)| p))
}

fn color_tuples(mcc: &MccInstance, budget: OracleBudget) -> Result<Vec<Vec<usize>>> {
    let classes = mcc.classes();
    let count = classes
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    if count > budget.max_tuples {
        return refuse(format!("{count} color tuples exceed the cap"));
    }
    let mut out = vec![Vec::new()];
    for class in &classes {
        out = out
            .into_iter()
            .flat_map(|t| {
                class.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

fn induced_edges(mcc: &MccInstance, t: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if mcc.has_edge(t[i], t[j]) {
                c += 1;
            }
        }
    }
    c
}

/// First multicolored clique in color-major enumeration order.
pub fn brute_force_mcc(mcc: &MccInstance, budget: OracleBudget) -> Result<Option<Vec<usize>>> {
    let k = mcc.k();
    let full = k * (k - 1) / 2;
    Ok(color_tuples(mcc, budget)?
        .into_iter()
        .find(|t| induced_edges(mcc, t) == full))
}

/// Largest number of edges induced by a one-vertex-per-color selection.
pub fn densest_k_count(mcc: &MccInstance, budget: OracleBudget) -> Result<usize> {
    Ok(color_tuples(mcc, budget)?
        .iter()
        .map(|t| induced_edges(mcc, t))
        .max()
        .unwrap_or(0))
}
