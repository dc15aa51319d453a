use super::{Edge, EdgeId, Path, SlsnInstance, VertexId, WeightedGraph};
use crate::error::{contract, input, Result, SlsnError};
use crate::rational::{common_denominator, scaled_u128, Rational};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

pub(crate) const INF: u128 = u128::MAX;

/// Lengths rescaled by a common denominator so that shortest paths run on
/// machine integers without losing exactness.
#[derive(Clone, Debug)]
pub(crate) struct Metric {
    pub scale: BigInt,
    pub len: Vec<u128>,
    pub bound: u128,
}

impl Metric {
    pub fn new(g: &WeightedGraph, bound: &Rational) -> Result<Metric> {
        let scale = common_denominator(g.edges().iter().map(|e| &e.length).chain([bound]));
        let overflow = || SlsnError::Overflow("scaled lengths exceed 128 bits".into());
        let len = g
            .edges()
            .iter()
            .map(|e| scaled_u128(&e.length, &scale).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        // Keep sums of up to n edges far from the sentinel.
        let total: u128 = len.iter().try_fold(0u128, |a, &b| a.checked_add(b)).ok_or_else(overflow)?;
        if total >= INF / 4 {
            return Err(overflow());
        }
        let bound = (bound * Rational::from_integer(scale.clone()))
            .floor()
            .to_integer()
            .to_u128()
            .ok_or_else(overflow)?;
        Ok(Metric { scale, len, bound })
    }

    pub fn for_instance(inst: &SlsnInstance) -> Result<Metric> {
        Metric::new(&inst.graph, &inst.bound)
    }

    pub fn to_rational(&self, x: u128) -> Rational {
        Rational::new(BigInt::from(x), self.scale.clone())
    }
}

/// Single-source shortest lengths restricted to `allowed` edges; returns the
/// distance and the predecessor edge of every vertex.
pub(crate) fn dijkstra(
    g: &WeightedGraph,
    len: &[u128],
    source: VertexId,
    allowed: &dyn Fn(EdgeId) -> bool,
) -> (Vec<u128>, Vec<Option<EdgeId>>) {
    let n = g.vertex_count();
    let mut dist = vec![INF; n];
    let mut pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0u128, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, e) in g.neighbors(v) {
            if !allowed(e) {
                continue;
            }
            let nd = d + len[e];
            if nd < dist[w] || (nd == dist[w] && pred[w].is_some_and(|p| e < p)) {
                let improved = nd < dist[w];
                dist[w] = nd;
                pred[w] = Some(e);
                if improved {
                    heap.push(Reverse((nd, w)));
                }
            }
        }
    }
    (dist, pred)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandStatus {
    pub satisfied: bool,
    /// Exact shortest length inside the subgraph; `None` when disconnected.
    pub shortest: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub demands: Vec<DemandStatus>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.demands.iter().all(|d| d.satisfied)
    }

    pub fn unsatisfied(&self) -> Vec<usize> {
        (0..self.demands.len())
            .filter(|&i| !self.demands[i].satisfied)
            .collect()
    }
}

fn edge_mask(inst: &SlsnInstance, subset: &[EdgeId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; inst.m()];
    for &e in subset {
        if e >= inst.m() {
            return input(format!("edge index {e} out of range"));
        }
        mask[e] = true;
    }
    Ok(mask)
}

pub fn feasibility_check(inst: &SlsnInstance, subset: &[EdgeId]) -> Result<FeasibilityReport> {
    let mask = edge_mask(inst, subset)?;
    let metric = Metric::for_instance(inst)?;
    let mut cache: HashMap<VertexId, Vec<u128>> = HashMap::new();
    let mut demands = Vec::with_capacity(inst.p());
    for &(s, t) in inst.demands.pairs() {
        let dist = cache
            .entry(s)
            .or_insert_with(|| dijkstra(&inst.graph, &metric.len, s, &|e| mask[e]).0);
        let d = dist[t];
        demands.push(DemandStatus {
            satisfied: d <= metric.bound,
            shortest: (d != INF).then(|| metric.to_rational(d)),
        });
    }
    Ok(FeasibilityReport { demands })
}

/// Fast yes/no feasibility for solvers and oracles that already hold a metric.
pub(crate) fn subset_feasible(inst: &SlsnInstance, metric: &Metric, mask: &[bool]) -> bool {
    let mut last: Option<(VertexId, Vec<u128>)> = None;
    for &(s, t) in inst.demands.pairs() {
        if last.as_ref().map(|(src, _)| *src) != Some(s) {
            last = Some((s, dijkstra(&inst.graph, &metric.len, s, &|e| mask[e]).0));
        }
        if last.as_ref().unwrap().1[t] > metric.bound {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Start,
    Keep,
    Arc(VertexId, EdgeId),
}

/// Minimum total weight reachable from one source with at most `h` edges, for
/// every `h` up to the table height.
pub(crate) struct HopTable {
    value: Vec<Vec<Option<Rational>>>,
    step: Vec<Vec<Step>>,
}

impl HopTable {
    pub fn max_hops(&self) -> usize {
        self.value.len() - 1
    }

    pub fn best(&self, v: VertexId, hops: usize) -> Option<&Rational> {
        self.value[hops.min(self.max_hops())][v].as_ref()
    }

    pub fn path(&self, v: VertexId, hops: usize) -> Option<Path> {
        let mut h = hops.min(self.max_hops());
        self.value[h][v].as_ref()?;
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        loop {
            match self.step[h][cur] {
                Step::Start => break,
                Step::Keep => h -= 1,
                Step::Arc(prev, e) => {
                    edges.push(e);
                    vertices.push(prev);
                    cur = prev;
                    h -= 1;
                }
            }
        }
        vertices.reverse();
        edges.reverse();
        Some(Path { vertices, edges })
    }
}

/// Hop-indexed Bellman-Ford. Updates only on strict improvement, which keeps
/// every reconstructed walk simple even with zero-weight edges.
pub(crate) fn hop_bellman_ford(
    g: &WeightedGraph,
    source: VertexId,
    max_hops: usize,
    weight: impl Fn(&Edge) -> &Rational,
) -> HopTable {
    let n = g.vertex_count();
    let mut value = vec![vec![None; n]];
    let mut step = vec![vec![Step::Keep; n]];
    value[0][source] = Some(Rational::from_integer(0.into()));
    step[0][source] = Step::Start;
    for h in 1..=max_hops {
        let prev = &value[h - 1];
        let mut cur: Vec<Option<Rational>> = prev.clone();
        let mut st = vec![Step::Keep; n];
        for (e, edge) in g.edges().iter().enumerate() {
            for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                if let Some(pa) = &prev[a] {
                    let cand = pa + weight(edge);
                    if cur[b].as_ref().is_none_or(|c| cand < *c) {
                        cur[b] = Some(cand);
                        st[b] = Step::Arc(a, e);
                    }
                }
            }
        }
        value.push(cur);
        step.push(st);
    }
    HopTable { value, step }
}

/// Minimum-cost u–v path with at most `hop_bound` edges on a unit-length
/// graph.
pub fn restricted_min_cost_path(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    hop_bound: usize,
) -> Result<Option<Path>> {
    if !g.has_unit_lengths() {
        return contract("restricted_min_cost_path needs unit lengths");
    }
    check_vertices(g, u, v)?;
    let hops = hop_bound.min(g.vertex_count().saturating_sub(1));
    Ok(hop_bellman_ford(g, u, hops, |e| &e.cost).path(v, hops))
}

/// Minimum-length u–v path with at most `edge_bound` edges.
pub fn restricted_min_length_path(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    edge_bound: usize,
) -> Result<Option<Path>> {
    check_vertices(g, u, v)?;
    let hops = edge_bound.min(g.vertex_count().saturating_sub(1));
    Ok(hop_bellman_ford(g, u, hops, |e| &e.length).path(v, hops))
}

fn check_vertices(g: &WeightedGraph, u: VertexId, v: VertexId) -> Result<()> {
    let n = g.vertex_count();
    if u >= n || v >= n {
        return input(format!("vertex out of range for {n} vertices"));
    }
    Ok(())
}

/// Edge sets compared as binary numbers with edge `i` worth 2^i; words are
/// stored most significant first so the derived order is numeric.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeBits(Vec<u64>);

impl EdgeBits {
    fn empty(m: usize) -> Self {
        EdgeBits(vec![0; m.div_ceil(64).max(1)])
    }

    fn with(&self, e: EdgeId) -> Self {
        let mut w = self.0.clone();
        let idx = w.len() - 1 - e / 64;
        w[idx] |= 1 << (e % 64);
        EdgeBits(w)
    }
}

/// Unique lightest path from `source` to every vertex under the order
/// (length, edge bits). The order is induced by additive weights, so
/// sub-paths of canonical paths are canonical.
fn canonical_tree(
    g: &WeightedGraph,
    len: &[u128],
    source: VertexId,
    mask: &[bool],
) -> (Vec<u128>, Vec<Option<EdgeId>>) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut best: Vec<Option<(u128, EdgeBits)>> = vec![None; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[source] = Some((0, EdgeBits::empty(m)));
    heap.push(Reverse((0u128, EdgeBits::empty(m), source)));
    while let Some(Reverse((d, bits, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &(w, e) in g.neighbors(v) {
            if !mask[e] || done[w] {
                continue;
            }
            let key = (d + len[e], bits.with(e));
            if best[w].as_ref().is_none_or(|b| key < *b) {
                best[w] = Some(key.clone());
                pred[w] = Some(e);
                heap.push(Reverse((key.0, key.1, w)));
            }
        }
    }
    let dist = best.iter().map(|b| b.as_ref().map_or(INF, |b| b.0)).collect();
    (dist, pred)
}

fn trace(g: &WeightedGraph, pred: &[Option<EdgeId>], source: VertexId, target: VertexId) -> Path {
    let mut vertices = vec![target];
    let mut edges = Vec::new();
    let mut cur = target;
    while cur != source {
        let e = pred[cur].expect("target reachable");
        edges.push(e);
        cur = g.edge(e).other(cur);
        vertices.push(cur);
    }
    vertices.reverse();
    edges.reverse();
    Path { vertices, edges }
}

/// One path per demand inside a feasible subgraph such that any two paths
/// agree on the segment between any two shared vertices.
pub fn canonical_path_assignment(inst: &SlsnInstance, subset: &[EdgeId]) -> Result<Vec<Path>> {
    let mask = edge_mask(inst, subset)?;
    let metric = Metric::for_instance(inst)?;
    let mut trees: HashMap<VertexId, (Vec<u128>, Vec<Option<EdgeId>>)> = HashMap::new();
    let mut out = Vec::with_capacity(inst.p());
    for (i, &(s, t)) in inst.demands.pairs().iter().enumerate() {
        let (dist, pred) = trees
            .entry(s)
            .or_insert_with(|| canonical_tree(&inst.graph, &metric.len, s, &mask));
        if dist[t] > metric.bound {
            return Err(SlsnError::Precondition(format!(
                "demand {i} ({s},{t}) is not satisfied by the subset"
            )));
        }
        out.push(trace(&inst.graph, pred, s, t));
    }
    Ok(out)
}
