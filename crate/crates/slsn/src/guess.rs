//! Search over subpath guesses shared by the exact and approximate
//! constant-demand solvers.
//!
//! A guess (Q, E', budgets) is explored as one route per demand: a simple
//! sequence of Q' vertices from s_i to t_i whose consecutive pairs carry a
//! candidate path. E' is the set of pairs used by the routes, every pair keeps
//! a single candidate across routes, and at most p(p-1) non-terminal vertices
//! appear. The guess behind an optimal solution is such a route system, so
//! the best union over route systems is at least as good as the best union
//! over all guesses. Per-pair candidates are restricted to Pareto-optimal
//! (length, cost) paths, which never loses that guess either.

use crate::error::{Result, SlsnError};
use crate::graph::{dijkstra, subset_feasible, EdgeId, Metric, Path, SlsnInstance, VertexId};
use crate::rational::{common_denominator, scaled_u128};
use num_bigint::BigInt;

#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    /// Oriented from the lower to the higher vertex id of the pair.
    pub path: Path,
    pub length: u128,
    pub cost: u128,
}

pub(crate) struct PairTable {
    n: usize,
    lists: Vec<Vec<Candidate>>,
}

impl PairTable {
    pub fn new(n: usize) -> Self {
        PairTable {
            n,
            lists: vec![Vec::new(); n * n],
        }
    }

    fn index(&self, a: VertexId, b: VertexId) -> usize {
        a.min(b) * self.n + a.max(b)
    }

    pub fn push(&mut self, path: Path, length: u128, cost: u128) {
        let (a, b) = (path.start(), path.end());
        let path = if a > b { path.reversed() } else { path };
        let i = self.index(a, b);
        self.lists[i].push(Candidate { path, length, cost });
    }

    /// Sorts by (cost, length) and drops candidates dominated by a cheaper
    /// one that is no longer.
    pub fn finalize(&mut self) {
        for list in &mut self.lists {
            list.sort_by_key(|x| (x.cost, x.length));
            let mut kept: Vec<Candidate> = Vec::new();
            for c in list.drain(..) {
                if kept.last().is_none_or(|k| c.length < k.length) {
                    kept.push(c);
                }
            }
            *list = kept;
        }
    }

    pub fn candidates(&self, a: VertexId, b: VertexId) -> &[Candidate] {
        &self.lists[self.index(a, b)]
    }
}

pub(crate) fn scaled_costs(inst: &SlsnInstance) -> Result<(BigInt, Vec<u128>)> {
    let scale = common_denominator(inst.graph.edges().iter().map(|e| &e.cost));
    let cost = inst
        .graph
        .edges()
        .iter()
        .map(|e| scaled_u128(&e.cost, &scale))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SlsnError::Overflow("scaled costs exceed 128 bits".into()))?;
    Ok((scale, cost))
}

#[derive(Clone, Copy)]
struct Segment {
    pair: (VertexId, VertexId),
    cand: usize,
    fresh: bool,
    inner: Option<VertexId>,
}

#[derive(Clone)]
struct State {
    assigned: Vec<Option<usize>>,
    refs: Vec<u32>,
    union_cost: u128,
    q_refs: Vec<u32>,
    q_size: usize,
    on_route: Vec<bool>,
    stack: Vec<Segment>,
    best: Option<(u128, Vec<EdgeId>)>,
}

pub(crate) struct RouteSearch<'a> {
    inst: &'a SlsnInstance,
    metric: &'a Metric,
    cost: &'a [u128],
    table: &'a PairTable,
    terminal: Vec<bool>,
    q_cap: usize,
}

impl<'a> RouteSearch<'a> {
    pub fn new(inst: &'a SlsnInstance, metric: &'a Metric, cost: &'a [u128], table: &'a PairTable) -> Self {
        let mut terminal = vec![false; inst.n()];
        for v in inst.demands.vertices() {
            terminal[v] = true;
        }
        let p = inst.p();
        RouteSearch {
            inst,
            metric,
            cost,
            table,
            terminal,
            q_cap: p * p.saturating_sub(1),
        }
    }

    fn fresh_state(&self) -> State {
        let n = self.inst.n();
        State {
            assigned: vec![None; n * n],
            refs: vec![0; self.inst.m()],
            union_cost: 0,
            q_refs: vec![0; n],
            q_size: 0,
            on_route: vec![false; n],
            stack: Vec::new(),
            best: None,
        }
    }

    fn push(&self, st: &mut State, seg: Segment) {
        let (a, b) = seg.pair;
        let idx = a * self.inst.n() + b;
        if seg.fresh {
            st.assigned[idx] = Some(seg.cand);
        }
        let c = &self.table.candidates(a, b)[seg.cand];
        for &e in &c.path.edges {
            if st.refs[e] == 0 {
                st.union_cost += self.cost[e];
            }
            st.refs[e] += 1;
        }
        if let Some(x) = seg.inner {
            if st.q_refs[x] == 0 {
                st.q_size += 1;
            }
            st.q_refs[x] += 1;
        }
        st.stack.push(seg);
    }

    fn pop(&self, st: &mut State) {
        let seg = st.stack.pop().unwrap();
        let (a, b) = seg.pair;
        if seg.fresh {
            st.assigned[a * self.inst.n() + b] = None;
        }
        let c = &self.table.candidates(a, b)[seg.cand];
        for &e in &c.path.edges {
            st.refs[e] -= 1;
            if st.refs[e] == 0 {
                st.union_cost -= self.cost[e];
            }
        }
        if let Some(x) = seg.inner {
            st.q_refs[x] -= 1;
            if st.q_refs[x] == 0 {
                st.q_size -= 1;
            }
        }
    }

    fn pruned(st: &State) -> bool {
        st.best.as_ref().is_some_and(|b| st.union_cost >= b.0)
    }

    fn satisfied(&self, st: &State, i: usize) -> bool {
        let (s, t) = self.inst.demands.pairs()[i];
        let dist = dijkstra(&self.inst.graph, &self.metric.len, s, &|e| st.refs[e] > 0).0;
        dist[t] <= self.metric.bound
    }

    /// Extends the route of demand `i` from `cur`; `done` runs on each
    /// complete route with its segments pushed.
    fn extend(&self, st: &mut State, i: usize, cur: VertexId, used: u128, done: &mut dyn FnMut(&Self, &mut State)) {
        let t = self.inst.demands.pairs()[i].1;
        let n = self.inst.n();
        for x in 0..n {
            if st.on_route[x] || x == cur {
                continue;
            }
            let inner = (x != t && !self.terminal[x]).then_some(x);
            if inner.is_some_and(|x| st.q_refs[x] == 0) && st.q_size >= self.q_cap {
                continue;
            }
            let pair = (cur.min(x), cur.max(x));
            let list = self.table.candidates(pair.0, pair.1);
            let fixed = st.assigned[pair.0 * n + pair.1];
            let choices = match fixed {
                Some(c) => c..c + 1,
                None => 0..list.len(),
            };
            for cand in choices {
                let len = used + list[cand].length;
                if len > self.metric.bound {
                    continue;
                }
                self.push(
                    st,
                    Segment {
                        pair,
                        cand,
                        fresh: fixed.is_none(),
                        inner,
                    },
                );
                if !Self::pruned(st) {
                    if x == t {
                        done(self, st);
                    } else {
                        st.on_route[x] = true;
                        self.extend(st, i, x, len, done);
                        st.on_route[x] = false;
                    }
                }
                self.pop(st);
            }
        }
    }

    fn demand(&self, st: &mut State, i: usize) {
        if i == self.inst.p() {
            self.evaluate(st);
            return;
        }
        if self.satisfied(st, i) {
            self.demand(st, i + 1);
            return;
        }
        let s = self.inst.demands.pairs()[i].0;
        let n = self.inst.n();
        st.on_route[s] = true;
        self.extend(st, i, s, 0, &mut |me: &Self, st: &mut State| {
            let route = std::mem::replace(&mut st.on_route, vec![false; n]);
            me.demand(st, i + 1);
            st.on_route = route;
        });
        st.on_route[s] = false;
    }

    fn evaluate(&self, st: &mut State) {
        if Self::pruned(st) {
            return;
        }
        let mask: Vec<bool> = st.refs.iter().map(|&r| r > 0).collect();
        if subset_feasible(self.inst, self.metric, &mask) {
            let edges = (0..mask.len()).filter(|&e| mask[e]).collect();
            st.best = Some((st.union_cost, edges));
        }
    }

    /// Cheapest feasible union over all route systems, first found on ties.
    /// Routes of the first demand are split into `jobs` contiguous chunks.
    pub fn run(&self, jobs: usize) -> Option<(u128, Vec<EdgeId>)> {
        if self.inst.p() == 0 {
            return Some((0, Vec::new()));
        }
        let mut st = self.fresh_state();
        let mut firsts: Vec<Vec<Segment>> = Vec::new();
        let s = self.inst.demands.pairs()[0].0;
        st.on_route[s] = true;
        self.extend(&mut st, 0, s, 0, &mut |_, st: &mut State| firsts.push(st.stack.clone()));
        let jobs = jobs.max(1).min(firsts.len().max(1));
        let chunk = firsts.len().div_ceil(jobs).max(1);
        let work = |routes: &[Vec<Segment>]| {
            let mut st = self.fresh_state();
            for route in routes {
                for &seg in route {
                    self.push(&mut st, seg);
                }
                self.demand(&mut st, 1);
                for _ in route {
                    self.pop(&mut st);
                }
            }
            st.best
        };
        let results: Vec<Option<(u128, Vec<EdgeId>)>> = if jobs == 1 {
            vec![work(&firsts)]
        } else {
            std::thread::scope(|sc| {
                let handles: Vec<_> = firsts.chunks(chunk).map(|c| sc.spawn(move || work(c))).collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            })
        };
        results
            .into_iter()
            .flatten()
            .fold(None, |acc: Option<(u128, Vec<EdgeId>)>, r| match acc {
                Some(a) if a.0 <= r.0 => Some(a),
                _ => Some(r),
            })
    }
}
