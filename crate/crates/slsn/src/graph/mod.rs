//! Graph, instance and solution model plus the shortest-path primitives every
//! solver builds on.

mod expand;
mod paths;

pub use expand::{expand_to_unit, CostMode, Expansion};
pub use paths::{
    canonical_path_assignment, feasibility_check, restricted_min_cost_path,
    restricted_min_length_path, DemandStatus, FeasibilityReport,
};
pub(crate) use paths::{dijkstra, hop_bellman_ford, subset_feasible, HopTable, Metric, INF};

use crate::error::{contract, input, Result, SlsnError};
use crate::rational::{int, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashSet};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: Rational,
    pub cost: Rational,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph with exact positive lengths and nonnegative costs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    labels: Vec<Option<String>>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            edges: Vec::new(),
            labels: vec![None; n],
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_vertex(&mut self, label: Option<String>) -> VertexId {
        self.labels.push(label);
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        length: Rational,
        cost: Rational,
    ) -> Result<EdgeId> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return input(format!("edge ({u},{v}) out of range for {n} vertices"));
        }
        if u == v {
            return input(format!("self-loop at vertex {u}"));
        }
        if !length.is_positive() {
            return input(format!("edge ({u},{v}) has nonpositive length"));
        }
        if cost.is_negative() {
            return input(format!("edge ({u},{v}) has negative cost"));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, length, cost });
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    /// Convenience for integer weights.
    pub fn add(&mut self, u: VertexId, v: VertexId, length: i64, cost: i64) -> Result<EdgeId> {
        self.add_edge(u, v, int(length), int(cost))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn display_label(&self, v: VertexId) -> String {
        self.labels[v].clone().unwrap_or_else(|| v.to_string())
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn has_unit_lengths(&self) -> bool {
        self.edges.iter().all(|e| e.length.is_one())
    }

    pub fn has_unit_costs(&self) -> bool {
        self.edges.iter().all(|e| e.cost.is_one())
    }

    pub fn has_integer_lengths(&self) -> bool {
        self.edges.iter().all(|e| e.length.is_integer())
    }

    pub fn cost_of(&self, edges: &[EdgeId]) -> Rational {
        edges.iter().map(|&e| &self.edges[e].cost).sum()
    }

    /// Copy of the graph with every cost replaced.
    pub fn with_costs(&self, cost: impl Fn(EdgeId, &Edge) -> Rational) -> WeightedGraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.cost = cost(i, &self.edges[i]);
        }
        g
    }

    pub fn with_lengths(&self, length: impl Fn(EdgeId, &Edge) -> Rational) -> WeightedGraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.length = length(i, &self.edges[i]);
        }
        g
    }
}

/// Unordered terminal pairs, stored normalized as (min, max) in input order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DemandGraph {
    pairs: Vec<(VertexId, VertexId)>,
}

impl DemandGraph {
    pub fn new(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (s, t) in pairs {
            if s == t {
                return input(format!("demand ({s},{t}) has equal endpoints"));
            }
            let key = (s.min(t), s.max(t));
            if !seen.insert(key) {
                return input(format!("duplicate demand ({s},{t})"));
            }
            out.push(key);
        }
        Ok(DemandGraph { pairs: out })
    }

    pub fn p(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn contains(&self, a: VertexId, b: VertexId) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted distinct endpoints.
    pub fn vertices(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        set.into_iter().collect()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.pairs.iter().map(|&(a, b)| a.max(b)).max()
    }

    /// Lowest-index vertex incident to every pair, if any.
    pub fn star_root(&self) -> Option<VertexId> {
        let (a, b) = *self.pairs.first()?;
        [a, b]
            .into_iter()
            .find(|&r| self.pairs.iter().all(|&(x, y)| x == r || y == r))
    }

    /// Adjacency lists over `0..=max_vertex`.
    pub fn adjacency(&self, n: usize) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlsnInstance {
    pub graph: WeightedGraph,
    pub bound: Rational,
    pub demands: DemandGraph,
}

impl SlsnInstance {
    pub fn new(graph: WeightedGraph, bound: Rational, demands: DemandGraph) -> Result<Self> {
        if !bound.is_positive() {
            return input("length bound must be positive");
        }
        if let Some(v) = demands.max_vertex() {
            if v >= graph.vertex_count() {
                return input(format!("demand endpoint {v} is not a vertex"));
            }
        }
        Ok(SlsnInstance {
            graph,
            bound,
            demands,
        })
    }

    /// Integer lengths and costs, as `(u, v, length, cost)`.
    pub fn from_integers(
        n: usize,
        edges: &[(VertexId, VertexId, i64, i64)],
        bound: i64,
        demands: &[(VertexId, VertexId)],
    ) -> Result<Self> {
        let mut g = WeightedGraph::new(n);
        for &(u, v, len, cost) in edges {
            g.add(u, v, len, cost)?;
        }
        SlsnInstance::new(g, crate::rational::int(bound), DemandGraph::new(demands.iter().copied())?)
    }

    pub fn n(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn m(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn p(&self) -> usize {
        self.demands.p()
    }

    /// Largest integer hop count allowed when lengths are integral.
    pub fn hop_bound(&self) -> usize {
        use num_traits::ToPrimitive;
        self.bound.floor().to_integer().to_usize().unwrap_or(usize::MAX)
    }

    pub fn all_edges(&self) -> Vec<EdgeId> {
        (0..self.m()).collect()
    }
}

/// A walk given by both its vertices and the (possibly parallel) edges used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn length(&self, g: &WeightedGraph) -> Rational {
        self.edges.iter().map(|&e| &g.edge(e).length).sum()
    }

    pub fn cost(&self, g: &WeightedGraph) -> Rational {
        self.edges.iter().map(|&e| &g.edge(e).cost).sum()
    }

    pub fn is_simple(&self) -> bool {
        let set: HashSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }

    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.vertices.reverse();
        p.edges.reverse();
        p
    }

    /// Checks that consecutive vertices are joined by the recorded edges.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        if self.vertices.is_empty() || self.vertices.len() != self.edges.len() + 1 {
            return contract("malformed path");
        }
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.edge_count() {
                return contract(format!("edge {e} out of range"));
            }
            let ed = g.edge(e);
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            if !((ed.u == a && ed.v == b) || (ed.u == b && ed.v == a)) {
                return contract(format!("edge {e} does not join {a} and {b}"));
            }
        }
        Ok(())
    }

    /// Sub-path between positions `i..=j`.
    pub fn slice(&self, i: usize, j: usize) -> Path {
        Path {
            vertices: self.vertices[i..=j].to_vec(),
            edges: self.edges[i..j].to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub edges: Vec<EdgeId>,
    pub paths: Vec<Path>,
    pub cost: Rational,
}

impl Solution {
    /// Builds a solution from an edge set: dedups, checks feasibility and
    /// attaches canonical witness paths.
    pub fn from_edges(inst: &SlsnInstance, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let set: BTreeSet<EdgeId> = edges.into_iter().collect();
        let edges: Vec<EdgeId> = set.into_iter().collect();
        let paths = canonical_path_assignment(inst, &edges).map_err(|e| match e {
            SlsnError::Precondition(_) => SlsnError::Infeasible,
            other => other,
        })?;
        let cost = inst.graph.cost_of(&edges);
        Ok(Solution { edges, paths, cost })
    }

    pub fn is_zero_cost(&self) -> bool {
        self.cost.is_zero()
    }

    /// Checks the stored invariants against an instance.
    pub fn check(&self, inst: &SlsnInstance) -> Result<()> {
        let set: HashSet<EdgeId> = self.edges.iter().copied().collect();
        if set.len() != self.edges.len() {
            return contract("duplicate edges in solution");
        }
        if self.paths.len() != inst.p() {
            return contract("one witness path per demand expected");
        }
        for (path, &(s, t)) in self.paths.iter().zip(inst.demands.pairs()) {
            path.validate(&inst.graph)?;
            let ends = (path.start().min(path.end()), path.start().max(path.end()));
            if ends != (s, t) {
                return contract(format!("witness path does not join {s} and {t}"));
            }
            if !path.edges.iter().all(|e| set.contains(e)) {
                return contract("witness path leaves the edge subset");
            }
            if path.length(&inst.graph) > inst.bound {
                return contract("witness path exceeds the length bound");
            }
        }
        if inst.graph.cost_of(&self.edges) != self.cost {
            return contract("recorded cost differs from edge costs");
        }
        Ok(())
    }
}

