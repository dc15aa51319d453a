//! Approximation for arbitrary lengths and costs: the optimum bracket, the
//! cost-scaled restricted path DP, the constant-demand scheme and the star
//! tree DP.

use crate::error::{input, Result, SlsnError};
use crate::graph::{dijkstra, subset_feasible, EdgeId, Metric, Path, SlsnInstance, Solution, VertexId, WeightedGraph, INF};
use crate::guess::{scaled_costs, PairTable, RouteSearch};
use crate::rational::{ceil_int, ceil_log, floor_int, int, pow_signed, Rational};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// `C` with `C ≤ OPT ≤ n²·C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostBounds {
    pub c: Rational,
}

impl CostBounds {
    pub fn upper(&self, n: usize) -> Rational {
        &self.c * int((n * n) as i64)
    }
}

/// Smallest edge cost whose cheap subgraph is already feasible.
pub fn opt_low(inst: &SlsnInstance) -> Result<CostBounds> {
    if inst.m() == 0 {
        return input("opt_low needs at least one edge");
    }
    let metric = Metric::for_instance(inst)?;
    let mut costs: Vec<&Rational> = inst.graph.edges().iter().map(|e| &e.cost).collect();
    costs.sort();
    costs.dedup();
    let feasible = |c: &Rational| {
        let mask: Vec<bool> = inst.graph.edges().iter().map(|e| e.cost <= *c).collect();
        subset_feasible(inst, &metric, &mask)
    };
    if !feasible(costs[costs.len() - 1]) {
        return Err(SlsnError::Infeasible);
    }
    // Feasibility is monotone in the threshold.
    let (mut lo, mut hi) = (0, costs.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(costs[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(CostBounds {
        c: costs[lo].clone(),
    })
}

/// `c*_e = ⌈n·c(e)/(εC)⌉`, saturating at `u64::MAX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledCosts {
    pub values: Vec<u64>,
    pub eps: Rational,
    pub c: Rational,
    pub n: usize,
}

impl ScaledCosts {
    pub fn new(g: &WeightedGraph, eps: &Rational, c: &Rational) -> Result<Self> {
        if !c.is_positive() || !eps.is_positive() {
            return input("scaling needs positive ε and C");
        }
        let n = g.vertex_count();
        let factor = int(n as i64) / (eps * c);
        let values = g
            .edges()
            .iter()
            .map(|e| ceil_int(&(&e.cost * &factor)).to_u64().unwrap_or(u64::MAX))
            .collect();
        Ok(ScaledCosts {
            values,
            eps: eps.clone(),
            c: c.clone(),
            n,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    None,
    Start,
    Keep,
    Edge(EdgeId),
}

/// Shortest lengths from `s` under every scaled budget `0..=⌊n/ε⌋`.
struct BudgetTable {
    dist: Vec<Vec<u128>>,
    step: Vec<Vec<Step>>,
    cost: Vec<u64>,
}

impl BudgetTable {
    fn build(g: &WeightedGraph, len: &[u128], s: VertexId, eps: &Rational, c: &Rational) -> Result<Self> {
        let n = g.vertex_count();
        let scaled = ScaledCosts::new(g, eps, c)?;
        let budget = floor_int(&(int(n as i64) / eps))
            .to_usize()
            .ok_or_else(|| SlsnError::Overflow("budget too large".into()))?;
        let mut dist: Vec<Vec<u128>> = Vec::with_capacity(budget + 1);
        let mut step: Vec<Vec<Step>> = Vec::with_capacity(budget + 1);
        for i in 0..=budget {
            let mut d = vec![INF; n];
            let mut st = vec![Step::None; n];
            if i == 0 {
                d[s] = 0;
                st[s] = Step::Start;
            } else {
                d.clone_from(&dist[i - 1]);
                st.iter_mut().zip(&d).for_each(|(x, &v)| {
                    if v != INF {
                        *x = Step::Keep;
                    }
                });
                for v in 0..n {
                    for &(u, e) in g.neighbors(v) {
                        let ce = scaled.values[e];
                        if ce == 0 || ce > i as u64 {
                            continue;
                        }
                        let du = dist[i - ce as usize][u];
                        if du != INF && du + len[e] < d[v] {
                            d[v] = du + len[e];
                            st[v] = Step::Edge(e);
                        }
                    }
                }
            }
            // Zero scaled-cost edges stay inside the layer.
            let mut heap: BinaryHeap<Reverse<(u128, VertexId)>> =
                (0..n).filter(|&v| d[v] != INF).map(|v| Reverse((d[v], v))).collect();
            while let Some(Reverse((dv, v))) = heap.pop() {
                if dv > d[v] {
                    continue;
                }
                for &(w, e) in g.neighbors(v) {
                    if scaled.values[e] == 0 && dv + len[e] < d[w] {
                        d[w] = dv + len[e];
                        st[w] = Step::Edge(e);
                        heap.push(Reverse((d[w], w)));
                    }
                }
            }
            dist.push(d);
            step.push(st);
        }
        Ok(BudgetTable {
            dist,
            step,
            cost: scaled.values,
        })
    }

    /// Path realizing the smallest length over all budgets, at the smallest
    /// budget attaining it.
    fn path(&self, g: &WeightedGraph, t: VertexId) -> Option<Path> {
        let last = self.dist.last()?[t];
        if last == INF {
            return None;
        }
        let mut i = self.dist.iter().position(|d| d[t] == last)?;
        let mut v = t;
        let mut vertices = vec![t];
        let mut edges = Vec::new();
        loop {
            match self.step[i][v] {
                Step::Start => break,
                Step::Keep => i -= 1,
                Step::Edge(e) => {
                    edges.push(e);
                    v = g.edge(e).other(v);
                    vertices.push(v);
                    i -= self.cost[e] as usize;
                }
                Step::None => unreachable!("finite cell without a step"),
            }
        }
        vertices.reverse();
        edges.reverse();
        Some(Path { vertices, edges })
    }
}

fn check_min_dist_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= Rational::new(1.into(), 2.into()) {
        return input("min_dist needs 0 < ε < 1/2");
    }
    Ok(())
}

/// Shortest `s`–`t` path among those with scaled cost at most `⌊n/ε⌋`. If
/// some path costs at most `(1−2ε)C` with length `D`, the result costs at
/// most `C` and has length at most `D`.
pub fn min_dist(g: &WeightedGraph, s: VertexId, t: VertexId, eps: &Rational, c: &Rational) -> Result<Option<Path>> {
    check_min_dist_eps(eps)?;
    let n = g.vertex_count();
    if s >= n || t >= n {
        return input("min_dist endpoint out of range");
    }
    let metric = Metric::new(g, &Rational::one())?;
    let table = BudgetTable::build(g, &metric.len, s, eps, c)?;
    Ok(table.path(g, t))
}

fn check_eps(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return input("ε must lie in (0, 1)");
    }
    Ok(())
}

/// Everything reachable with zero cost: canonical paths inside the
/// zero-cost subgraph.
fn zero_cost_solution(inst: &SlsnInstance) -> Result<Solution> {
    let zero: Vec<EdgeId> = (0..inst.m()).filter(|&e| inst.graph.edge(e).cost.is_zero()).collect();
    let full = Solution::from_edges(inst, zero)?;
    let used: Vec<EdgeId> = full.paths.iter().flat_map(|p| p.edges.iter().copied()).collect();
    Solution::from_edges(inst, used)
}

/// Range of cost exponents tried per guessed pair.
fn exponent_range(n: usize, eps: &Rational) -> (i64, i64) {
    let base = Rational::one() + eps;
    let nn = int(n.max(2) as i64);
    let low = ceil_log(&base, &num_traits::pow(&nn * &nn / eps, 2));
    let high = ceil_log(&base, &(&nn * &nn)) + 3;
    (-low, high)
}

/// `(1+ε)`-approximation for a constant number of demands.
pub fn approx_const(inst: &SlsnInstance, eps: &Rational, jobs: usize) -> Result<Solution> {
    check_eps(eps)?;
    if inst.p() == 0 {
        return Solution::from_edges(inst, []);
    }
    if inst.p() > 4 {
        log::warn!("{} demands: the guess space may not finish", inst.p());
    }
    let bounds = opt_low(inst)?;
    if bounds.c.is_zero() {
        return zero_cost_solution(inst);
    }
    let eps = eps / int(4);
    let metric = Metric::for_instance(inst)?;
    let (_, cost) = scaled_costs(inst)?;
    let unit = Metric::new(&inst.graph, &Rational::one())?;
    let (lo, hi) = exponent_range(inst.n(), &eps);
    let base = Rational::one() + &eps;
    let mut table = PairTable::new(inst.n());
    for e in lo..=hi {
        let c = pow_signed(&base, e) * &bounds.c;
        for u in 0..inst.n() {
            let dp = BudgetTable::build(&inst.graph, &unit.len, u, &eps, &c)?;
            for v in u + 1..inst.n() {
                if let Some(path) = dp.path(&inst.graph, v) {
                    let len = path.edges.iter().map(|&e| metric.len[e]).sum();
                    let pc = path.edges.iter().map(|&e| cost[e]).sum();
                    table.push(path, len, pc);
                }
            }
        }
    }
    table.finalize();
    let search = RouteSearch::new(inst, &metric, &cost, &table);
    match search.run(jobs) {
        Some((_, edges)) => Solution::from_edges(inst, edges),
        None => Solution::from_edges(inst, inst.all_edges()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Unset,
    Zero,
    /// The root is itself a terminal of the subset; continue without it.
    Covered(u32),
    Keep,
    Edge(EdgeId),
    Split(u32, u32),
}

/// `d(v, R, j)`: least height of a tree rooted at `v` spanning the terminal
/// subset `R` with scaled cost at most `j`, filled for `j = 0..=filled`.
#[derive(Clone, Debug)]
pub struct HeightTable {
    n: usize,
    terminals: Vec<VertexId>,
    metric_scale: num_bigint::BigInt,
    layers: Vec<Vec<u128>>,
    cells: Vec<Vec<Cell>>,
}

impl HeightTable {
    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Largest budget filled.
    pub fn filled(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn value(&self, v: VertexId, mask: usize, j: usize) -> Option<Rational> {
        let x = self.layers[j][mask * self.n + v];
        (x != INF).then(|| Rational::new(x.into(), self.metric_scale.clone()))
    }

    /// Cells violating monotonicity in the budget or in the subset order.
    pub fn monotonicity_violations(&self) -> usize {
        let q = self.terminals.len();
        let mut bad = 0;
        for (j, layer) in self.layers.iter().enumerate() {
            for mask in 0..1usize << q {
                for v in 0..self.n {
                    let x = layer[mask * self.n + v];
                    if mask == 0 && x != 0 {
                        bad += 1;
                    }
                    if j > 0 && x > self.layers[j - 1][mask * self.n + v] {
                        bad += 1;
                    }
                    for b in 0..q {
                        if mask >> b & 1 == 1 && layer[(mask ^ 1 << b) * self.n + v] > x {
                            bad += 1;
                        }
                    }
                }
            }
        }
        bad
    }

    fn collect(&self, g: &WeightedGraph, cost: &[u64], v: VertexId, mask: usize, j: usize, out: &mut Vec<EdgeId>) {
        match self.cells[j][mask * self.n + v] {
            Cell::Unset | Cell::Zero => {}
            Cell::Covered(b) => self.collect(g, cost, v, mask & !(1 << b), j, out),
            Cell::Keep => self.collect(g, cost, v, mask, j - 1, out),
            Cell::Edge(e) => {
                out.push(e);
                let w = g.edge(e).other(v);
                self.collect(g, cost, w, mask, j - cost[e] as usize, out);
            }
            Cell::Split(a, k) => {
                let (a, k) = (a as usize, k as usize);
                self.collect(g, cost, v, a, k, out);
                self.collect(g, cost, v, mask & !a, j - k, out);
            }
        }
    }
}

struct StarDp<'a> {
    g: &'a WeightedGraph,
    len: &'a [u128],
    cost: &'a [u64],
    bit: Vec<Option<u32>>,
    table: HeightTable,
}

impl StarDp<'_> {
    fn at(&self, j: usize, mask: usize, v: VertexId) -> u128 {
        self.table.layers[j][mask * self.table.n + v]
    }

    /// Appends layer `j`.
    fn fill(&mut self, j: usize) {
        let n = self.table.n;
        let q = self.table.terminals.len();
        let full = (1usize << q) - 1;
        let mut layer = vec![INF; (full + 1) * n];
        let mut cells = vec![Cell::Unset; (full + 1) * n];
        for v in 0..n {
            layer[v] = 0;
            cells[v] = Cell::Zero;
        }
        for mask in 1..=full {
            let base = mask * n;
            let mut fixed = vec![false; n];
            for v in 0..n {
                if let Some(b) = self.bit[v].filter(|&b| mask >> b & 1 == 1) {
                    layer[base + v] = layer[(mask ^ 1 << b) * n + v];
                    cells[base + v] = Cell::Covered(b);
                    fixed[v] = true;
                    continue;
                }
                let mut best = INF;
                let mut cell = Cell::Unset;
                if j > 0 {
                    best = self.at(j - 1, mask, v);
                    cell = Cell::Keep;
                }
                for &(w, e) in self.g.neighbors(v) {
                    let ce = self.cost[e];
                    if ce == 0 || ce > j as u64 {
                        continue;
                    }
                    let dw = self.at(j - ce as usize, mask, w);
                    if dw != INF && dw + self.len[e] < best {
                        best = dw + self.len[e];
                        cell = Cell::Edge(e);
                    }
                }
                let low = mask & mask.wrapping_neg();
                let mut a = (mask - 1) & mask;
                while a > 0 {
                    if a & low != 0 {
                        let b = mask & !a;
                        let f = |k: usize| if k == j { layer[a * n + v] } else { self.at(k, a, v) };
                        let h = |k: usize| if k == 0 { layer[b * n + v] } else { self.at(j - k, b, v) };
                        // f falls and h rises in k; the best max sits where they cross.
                        let (mut lo, mut hi) = (0usize, j + 1);
                        while lo < hi {
                            let mid = (lo + hi) / 2;
                            if f(mid) <= h(mid) {
                                hi = mid;
                            } else {
                                lo = mid + 1;
                            }
                        }
                        for k in [lo.saturating_sub(1), lo.min(j)] {
                            let x = f(k).max(h(k));
                            if x < best {
                                best = x;
                                cell = Cell::Split(a as u32, k as u32);
                            }
                        }
                    }
                    a = (a - 1) & mask;
                }
                layer[base + v] = best;
                cells[base + v] = cell;
            }
            let mut heap: BinaryHeap<Reverse<(u128, VertexId)>> = (0..n)
                .filter(|&v| layer[base + v] != INF)
                .map(|v| Reverse((layer[base + v], v)))
                .collect();
            while let Some(Reverse((dv, v))) = heap.pop() {
                if dv > layer[base + v] {
                    continue;
                }
                for &(w, e) in self.g.neighbors(v) {
                    if self.cost[e] == 0 && !fixed[w] && dv + self.len[e] < layer[base + w] {
                        layer[base + w] = dv + self.len[e];
                        cells[base + w] = Cell::Edge(e);
                        heap.push(Reverse((layer[base + w], w)));
                    }
                }
            }
        }
        self.table.layers.push(layer);
        self.table.cells.push(cells);
    }
}

fn star_parts(inst: &SlsnInstance) -> Result<(VertexId, Vec<VertexId>)> {
    let Some(root) = inst.demands.star_root() else {
        return crate::error::contract("demands do not form a star");
    };
    let leaves = inst
        .demands
        .pairs()
        .iter()
        .map(|&(a, b)| if a == root { b } else { a })
        .collect();
    Ok((root, leaves))
}

/// Fills the star table for `ε` until the root reaches every terminal
/// within `L`, or until the budget cap. Returns the table, the scaled costs
/// and the first qualifying budget.
fn run_star_dp(inst: &SlsnInstance, eps: &Rational, c: &Rational) -> Result<(HeightTable, Vec<u64>, Option<usize>)> {
    let (root, leaves) = star_parts(inst)?;
    let q = leaves.len();
    if q >= 24 {
        return Err(SlsnError::Budget(format!("{q} terminals")));
    }
    let n = inst.n();
    let metric = Metric::for_instance(inst)?;
    let scaled = ScaledCosts::new(&inst.graph, eps, c)?;
    let nn = int(n as i64);
    let cap = ceil_int(&(&nn * &nn * &nn * (Rational::one() + eps) / eps))
        .to_usize()
        .ok_or_else(|| SlsnError::Overflow("budget cap too large".into()))?;
    let mut bit = vec![None; n];
    for (i, &t) in leaves.iter().enumerate() {
        bit[t] = Some(i as u32);
    }
    let mut dp = StarDp {
        g: &inst.graph,
        len: &metric.len,
        cost: &scaled.values,
        bit,
        table: HeightTable {
            n,
            terminals: leaves,
            metric_scale: metric.scale.clone(),
            layers: Vec::new(),
            cells: Vec::new(),
        },
    };
    let full = (1usize << q) - 1;
    let mut found = None;
    for j in 0..=cap {
        dp.fill(j);
        if dp.at(j, full, root) <= metric.bound {
            found = Some(j);
            break;
        }
    }
    Ok((dp.table, scaled.values, found))
}

/// The star table for `ε`, computed up to the first budget that works.
pub fn height_table(inst: &SlsnInstance, eps: &Rational) -> Result<HeightTable> {
    check_eps(eps)?;
    let bounds = opt_low(inst)?;
    if bounds.c.is_zero() {
        return input("zero-cost instances need no height table");
    }
    Ok(run_star_dp(inst, eps, &bounds.c)?.0)
}

/// `(1+ε)`-approximate shallow-light tree for star demands.
pub fn approx_star(inst: &SlsnInstance, eps: &Rational) -> Result<Solution> {
    check_eps(eps)?;
    if inst.p() == 0 {
        return Solution::from_edges(inst, []);
    }
    let (root, leaves) = star_parts(inst)?;
    let bounds = opt_low(inst)?;
    let metric = Metric::for_instance(inst)?;
    let union: Vec<bool> = if bounds.c.is_zero() {
        inst.graph.edges().iter().map(|e| e.cost.is_zero()).collect()
    } else {
        let (table, cost, found) = run_star_dp(inst, eps, &bounds.c)?;
        let j = found.ok_or(SlsnError::Infeasible)?;
        let mut edges = Vec::new();
        table.collect(&inst.graph, &cost, root, (1usize << leaves.len()) - 1, j, &mut edges);
        let mut mask = vec![false; inst.m()];
        for e in edges {
            mask[e] = true;
        }
        mask
    };
    // Shortest-path tree from the root inside the union, trimmed to the
    // root-to-terminal paths.
    let (dist, pred) = dijkstra(&inst.graph, &metric.len, root, &|e| union[e]);
    let mut keep = vec![false; inst.m()];
    for &t in &leaves {
        if dist[t] > metric.bound {
            return Err(SlsnError::Infeasible);
        }
        let mut v = t;
        while let Some(e) = pred[v] {
            keep[e] = true;
            v = inst.graph.edge(e).other(v);
        }
    }
    Solution::from_edges(inst, (0..inst.m()).filter(|&e| keep[e]))
}

/// True when the edge set is a tree: connected and `|V(S)| = |S| + 1`.
pub fn is_tree(g: &WeightedGraph, edges: &[EdgeId]) -> bool {
    if edges.is_empty() {
        return true;
    }
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut touched = std::collections::BTreeSet::new();
    for &e in edges {
        let edge = g.edge(e);
        touched.insert(edge.u);
        touched.insert(edge.v);
        let (a, b) = (find(&mut parent, edge.u), find(&mut parent, edge.v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    touched.len() == edges.len() + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_const::{solve_unit_length, ExactOptions};
    use crate::graph::{feasibility_check, DemandGraph};
    use crate::oracle::{brute_force_restricted_path, brute_force_slsn, OracleBudget};
    use crate::random::{feasible_corpus, RandomConfig, Weights};
    use crate::rational::ratio;

    fn oracle(inst: &SlsnInstance) -> Rational {
        brute_force_slsn(inst, OracleBudget::default(), 1).unwrap().cost
    }

    #[test]
    fn opt_low_examples() {
        let i = SlsnInstance::from_integers(2, &[(0, 1, 1, 7)], 1, &[(0, 1)]).unwrap();
        assert_eq!(opt_low(&i).unwrap().c, int(7));
        // Cheap path 0-1-2-3 is too long; the bridge 0-3 is needed.
        let edges = [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1), (0, 3, 1, 9)];
        let i = SlsnInstance::from_integers(4, &edges, 2, &[(0, 3)]).unwrap();
        let b = opt_low(&i).unwrap();
        assert_eq!(b.c, int(9));
        let opt = oracle(&i);
        assert!(b.c <= opt && opt <= b.upper(i.n()));
        let edges = [(0, 1, 1, 3), (1, 2, 1, 3), (0, 2, 2, 3)];
        let i = SlsnInstance::from_integers(3, &edges, 2, &[(0, 2), (0, 1)]).unwrap();
        assert_eq!(opt_low(&i).unwrap().c, int(3));
        let i = SlsnInstance::from_integers(2, &[(0, 1, 2, 1)], 1, &[(0, 1)]).unwrap();
        assert!(matches!(opt_low(&i), Err(SlsnError::Infeasible)));
    }

    #[test]
    fn scaled_costs_round_up() {
        let mut g = WeightedGraph::new(3);
        g.add(0, 2, 5, 10).unwrap();
        g.add(0, 1, 3, 1).unwrap();
        g.add(1, 2, 3, 1).unwrap();
        let s = ScaledCosts::new(&g, &ratio(1, 4), &int(10)).unwrap();
        assert_eq!(s.values, vec![12, 2, 2]);
    }

    #[test]
    fn min_dist_examples() {
        let mut g = WeightedGraph::new(3);
        g.add(0, 2, 5, 10).unwrap();
        g.add(0, 1, 3, 1).unwrap();
        g.add(1, 2, 3, 1).unwrap();
        let p = min_dist(&g, 0, 2, &ratio(1, 4), &int(10)).unwrap().unwrap();
        assert_eq!(p.edges, vec![0]);
        assert!(p.length(&g) <= int(6) && p.cost(&g) <= int(10));
        // With C = 4 the direct edge no longer fits the budget.
        let p = min_dist(&g, 0, 2, &ratio(1, 4), &int(4)).unwrap().unwrap();
        assert_eq!(p.edges, vec![1, 2]);
        // Every path is far above C.
        assert!(min_dist(&g, 0, 2, &ratio(1, 4), &ratio(1, 10)).unwrap().is_none());
        assert_eq!(min_dist(&g, 1, 1, &ratio(1, 4), &int(1)).unwrap().unwrap().hops(), 0);
        assert!(min_dist(&g, 0, 2, &ratio(1, 2), &int(1)).is_err());
    }

    #[test]
    fn min_dist_guarantee_on_random_graphs() {
        let cfg = RandomConfig {
            lengths: Weights::Fraction { num: 1..=6, den: 1..=3 },
            ..RandomConfig::small_unit_length()
        };
        let b = OracleBudget::default();
        for (i, inst) in feasible_corpus(21, 40, &cfg).into_iter().enumerate() {
            let g = &inst.graph;
            let (s, t) = inst.demands.pairs()[0];
            let eps = [ratio(1, 10), ratio(1, 4), ratio(2, 5)][i % 3].clone();
            let c = int(1 + (i as i64 % 17));
            let limit = (Rational::one() - int(2) * &eps) * &c;
            let paths = crate::oracle::enumerate_simple_paths(g, s, t, b).unwrap();
            let got = min_dist(g, s, t, &eps, &c).unwrap();
            for p in paths.iter().filter(|p| p.cost(g) <= limit) {
                let got = got.as_ref().expect("a path must be returned");
                assert!(got.cost(g) <= c);
                assert!(got.length(g) <= p.length(g));
            }
        }
    }

    #[test]
    fn approx_const_examples() {
        let eps = ratio(1, 4);
        let i = SlsnInstance::from_integers(2, &[(0, 1, 3, 7)], 3, &[(0, 1)]).unwrap();
        assert_eq!(approx_const(&i, &eps, 1).unwrap().cost, int(7));
        let edges = [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 3)];
        for l in [1, 2] {
            let i = SlsnInstance::from_integers(3, &edges, l, &[(0, 2)]).unwrap();
            let exact = solve_unit_length(&i, ExactOptions::default()).unwrap().cost;
            let got = approx_const(&i, &eps, 1).unwrap().cost;
            assert!(got <= (Rational::one() + &eps) * exact);
        }
        let mut g = WeightedGraph::new(3);
        g.add(0, 2, 5, 10).unwrap();
        g.add(0, 1, 3, 1).unwrap();
        g.add(1, 2, 3, 1).unwrap();
        let i = SlsnInstance::new(g.clone(), int(6), DemandGraph::new([(0, 2)]).unwrap()).unwrap();
        let best = brute_force_restricted_path(&g, 0, 2, &int(6), OracleBudget::default()).unwrap().unwrap();
        let got = approx_const(&i, &eps, 1).unwrap();
        assert!(got.cost <= (Rational::one() + &eps) * best.cost(&g));
        assert!(feasibility_check(&i, &got.edges).unwrap().feasible());
    }

    #[test]
    fn zero_cost_shortcut() {
        let edges = [(0, 1, 1, 0), (1, 2, 1, 0), (0, 2, 1, 5)];
        let i = SlsnInstance::from_integers(3, &edges, 2, &[(0, 2)]).unwrap();
        assert_eq!(opt_low(&i).unwrap().c, int(0));
        assert_eq!(approx_const(&i, &ratio(1, 2), 1).unwrap().cost, int(0));
        assert_eq!(approx_star(&i, &ratio(1, 2)).unwrap().cost, int(0));
    }

    #[test]
    fn approx_const_random_ratio() {
        let cfg = RandomConfig {
            lengths: Weights::Fraction { num: 1..=6, den: 1..=3 },
            bound: Weights::Fraction { num: 2..=12, den: 1..=2 },
            ..RandomConfig::small_unit_length()
        };
        for (i, inst) in feasible_corpus(22, 20, &cfg).into_iter().enumerate() {
            let eps = if i % 2 == 0 { ratio(1, 2) } else { ratio(1, 4) };
            let s = approx_const(&inst, &eps, 1).unwrap();
            s.check(&inst).unwrap();
            assert!(s.cost <= (Rational::one() + &eps) * oracle(&inst));
        }
    }

    fn star_cfg() -> RandomConfig {
        RandomConfig {
            p: 1..=4,
            star: true,
            lengths: Weights::Fraction { num: 1..=6, den: 1..=3 },
            bound: Weights::Fraction { num: 2..=12, den: 1..=2 },
            ..RandomConfig::small_unit_length()
        }
    }

    #[test]
    fn approx_star_examples() {
        let eps = ratio(1, 4);
        // Trunk 0-1 then leaves 2 and 3, versus separate direct edges.
        let edges = [(0, 1, 1, 4), (1, 2, 1, 1), (1, 3, 1, 1), (0, 2, 1, 4), (0, 3, 1, 4)];
        let i = SlsnInstance::from_integers(4, &edges, 2, &[(0, 2), (0, 3)]).unwrap();
        let s = approx_star(&i, &eps).unwrap();
        assert_eq!(s.cost, int(6));
        assert!(is_tree(&i.graph, &s.edges));
        // Terminals adjacent to the root through a unique edge each.
        let edges = [(0, 1, 1, 2), (0, 2, 2, 3), (0, 3, 1, 5)];
        let i = SlsnInstance::from_integers(4, &edges, 2, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(approx_star(&i, &eps).unwrap().cost, int(10));
        let non_star = SlsnInstance::from_integers(4, &edges, 2, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(approx_star(&non_star, &eps), Err(SlsnError::Contract(_))));
    }

    #[test]
    fn approx_star_random_ratio_and_shape() {
        let eps = ratio(1, 4);
        for inst in feasible_corpus(23, 25, &star_cfg()) {
            let s = approx_star(&inst, &eps).unwrap();
            s.check(&inst).unwrap();
            assert!(is_tree(&inst.graph, &s.edges));
            assert!(s.cost <= (Rational::one() + &eps) * oracle(&inst));
        }
    }

    #[test]
    fn height_table_is_monotone() {
        for inst in feasible_corpus(24, 15, &star_cfg()) {
            if opt_low(&inst).unwrap().c.is_zero() {
                continue;
            }
            let t = height_table(&inst, &ratio(1, 4)).unwrap();
            assert_eq!(t.monotonicity_violations(), 0);
            for j in 0..=t.filled() {
                for (b, &v) in t.terminals().iter().enumerate() {
                    assert_eq!(t.value(v, 1 << b, j), Some(int(0)));
                }
            }
        }
    }

    #[test]
    fn tree_check() {
        let mut g = WeightedGraph::new(4);
        g.add(0, 1, 1, 1).unwrap();
        g.add(1, 2, 1, 1).unwrap();
        g.add(2, 0, 1, 1).unwrap();
        g.add(2, 3, 1, 1).unwrap();
        assert!(is_tree(&g, &[0, 1, 3]));
        assert!(!is_tree(&g, &[0, 1, 2]));
        assert!(!is_tree(&g, &[0, 3]));
    }
}
