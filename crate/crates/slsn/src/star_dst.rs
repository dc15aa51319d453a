//! Exact solver for star demands with unit lengths, through a layered
//! directed Steiner tree instance and the subset dynamic program.

use crate::error::{contract, Result, SlsnError};
use crate::graph::{EdgeId, SlsnInstance, Solution, VertexId, INF};
use crate::rational::{common_denominator, scaled_u128, Rational};
use num_bigint::BigInt;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DstArc {
    pub from: VertexId,
    pub to: VertexId,
    pub cost: Rational,
    /// Undirected edge this arc was made from; `None` for stay arcs.
    pub origin: Option<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DstInstance {
    pub n: usize,
    pub arcs: Vec<DstArc>,
    pub root: VertexId,
    pub terminals: Vec<VertexId>,
}

impl DstInstance {
    pub fn new(n: usize, arcs: Vec<DstArc>, root: VertexId, terminals: Vec<VertexId>) -> Result<Self> {
        if root >= n || terminals.iter().any(|&t| t >= n) {
            return crate::error::input("root or terminal out of range");
        }
        if arcs.iter().any(|a| a.from >= n || a.to >= n) {
            return crate::error::input("arc endpoint out of range");
        }
        if arcs.iter().any(|a| a.cost < Rational::from_integer(0.into())) {
            return crate::error::input("negative arc cost");
        }
        Ok(DstInstance {
            n,
            arcs,
            root,
            terminals,
        })
    }
}

/// `(v, i)` ↔ `i * n + v` over layers `0..=layers`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredMap {
    pub n: usize,
    pub layers: usize,
}

impl LayeredMap {
    pub fn id(&self, v: VertexId, layer: usize) -> VertexId {
        layer * self.n + v
    }

    pub fn vertex(&self, id: VertexId) -> (VertexId, usize) {
        (id % self.n, id / self.n)
    }

    pub fn len(&self) -> usize {
        self.n * (self.layers + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Layered instance: a copy of V per hop count, edge arcs between
/// consecutive layers in both directions, and free stay arcs.
pub fn build_layered_dst(inst: &SlsnInstance, root: VertexId) -> Result<(DstInstance, LayeredMap)> {
    if !inst.graph.has_unit_lengths() {
        return contract("layered reduction needs unit lengths");
    }
    if root >= inst.n() {
        return contract("root is not a vertex");
    }
    if !inst.demands.pairs().iter().all(|&(a, b)| a == root || b == root) {
        return contract(format!("demands are not a star rooted at {root}"));
    }
    let layers = inst.hop_bound().min(inst.n().saturating_sub(1));
    let map = LayeredMap { n: inst.n(), layers };
    let zero = Rational::from_integer(0.into());
    let mut arcs = Vec::with_capacity(layers * (2 * inst.m() + inst.n()));
    for i in 1..=layers {
        for (e, edge) in inst.graph.edges().iter().enumerate() {
            for (a, b) in [(edge.u, edge.v), (edge.v, edge.u)] {
                arcs.push(DstArc {
                    from: map.id(a, i - 1),
                    to: map.id(b, i),
                    cost: edge.cost.clone(),
                    origin: Some(e),
                });
            }
        }
        for v in 0..inst.n() {
            arcs.push(DstArc {
                from: map.id(v, i - 1),
                to: map.id(v, i),
                cost: zero.clone(),
                origin: None,
            });
        }
    }
    let terminals = inst
        .demands
        .pairs()
        .iter()
        .map(|&(a, b)| map.id(if a == root { b } else { a }, layers))
        .collect();
    let dst = DstInstance::new(map.len(), arcs, map.id(root, 0), terminals)?;
    Ok((dst, map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Choice {
    Unset,
    Leaf,
    Split(usize),
    Arc(usize),
}

/// `f(v, R)`: cheapest arborescence rooted at `v` reaching every terminal of
/// the subset mask `R`, in cost units scaled by `scale`.
#[derive(Clone, Debug)]
pub struct DstTable {
    terminals: Vec<VertexId>,
    n: usize,
    scale: BigInt,
    value: Vec<Vec<u128>>,
    choice: Vec<Vec<Choice>>,
}

impl DstTable {
    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// `None` when the subset is unreachable from `v`.
    pub fn value(&self, v: VertexId, mask: usize) -> Option<Rational> {
        let x = self.value[mask][v];
        (x != INF).then(|| Rational::new(x.into(), self.scale.clone()))
    }

    fn collect(&self, dst: &DstInstance, v: VertexId, mask: usize, out: &mut Vec<usize>) {
        match self.choice[mask][v] {
            Choice::Unset | Choice::Leaf => {}
            Choice::Split(a) => {
                self.collect(dst, v, a, out);
                self.collect(dst, v, mask & !a, out);
            }
            Choice::Arc(a) => {
                out.push(a);
                self.collect(dst, dst.arcs[a].to, mask, out);
            }
        }
    }
}

/// Fills the subset table over distinct terminals.
pub fn dst_table(dst: &DstInstance) -> Result<DstTable> {
    let terminals: Vec<VertexId> = dst.terminals.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let q = terminals.len();
    if q >= usize::BITS as usize - 1 {
        return Err(SlsnError::Budget(format!("{q} terminals")));
    }
    let scale = common_denominator(dst.arcs.iter().map(|a| &a.cost));
    let cost = dst
        .arcs
        .iter()
        .map(|a| scaled_u128(&a.cost, &scale))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| SlsnError::Overflow("scaled arc costs exceed 128 bits".into()))?;
    let n = dst.n;
    let mut incoming = vec![Vec::new(); n];
    for (i, a) in dst.arcs.iter().enumerate() {
        incoming[a.to].push(i);
    }
    let full = (1usize << q) - 1;
    let mut value = vec![vec![INF; n]; full + 1];
    let mut choice = vec![vec![Choice::Unset; n]; full + 1];
    value[0] = vec![0; n];
    choice[0] = vec![Choice::Leaf; n];
    // Masks in increasing order see all their proper subsets first.
    for mask in 1..=full {
        let (val, ch) = (&mut value, &mut choice);
        let mut g = vec![INF; n];
        let mut c = vec![Choice::Unset; n];
        if mask.count_ones() == 1 {
            let t = terminals[mask.trailing_zeros() as usize];
            g[t] = 0;
            c[t] = Choice::Leaf;
        } else {
            let low = mask & mask.wrapping_neg();
            // Submasks containing the lowest bit, each split counted once.
            let mut a = (mask - 1) & mask;
            while a > 0 {
                if a & low != 0 {
                    let b = mask & !a;
                    for v in 0..n {
                        let (x, y) = (val[a][v], val[b][v]);
                        if x != INF && y != INF && x + y < g[v] {
                            g[v] = x + y;
                            c[v] = Choice::Split(a);
                        }
                    }
                }
                a = (a - 1) & mask;
            }
        }
        // Closure along arcs: f(v) = min(g(v), cost(v→w) + f(w)).
        let mut heap: BinaryHeap<Reverse<(u128, VertexId)>> =
            (0..n).filter(|&v| g[v] != INF).map(|v| Reverse((g[v], v))).collect();
        while let Some(Reverse((d, w))) = heap.pop() {
            if d > g[w] {
                continue;
            }
            for &ai in &incoming[w] {
                let v = dst.arcs[ai].from;
                let nd = d + cost[ai];
                if nd < g[v] {
                    g[v] = nd;
                    c[v] = Choice::Arc(ai);
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        val[mask] = g;
        ch[mask] = c;
    }
    Ok(DstTable {
        terminals,
        n,
        scale,
        value,
        choice,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DstSolution {
    /// Sorted distinct arc indices.
    pub arcs: Vec<usize>,
    pub cost: Rational,
}

/// Minimum-cost arborescence from the root covering every terminal.
pub fn solve_dst(dst: &DstInstance) -> Result<DstSolution> {
    let table = dst_table(dst)?;
    let full = (1usize << table.terminals.len()) - 1;
    let Some(cost) = table.value(dst.root, full) else {
        return Err(SlsnError::Infeasible);
    };
    let mut arcs = Vec::new();
    table.collect(dst, dst.root, full, &mut arcs);
    arcs.sort_unstable();
    arcs.dedup();
    debug_assert_eq!(table.n, dst.n);
    Ok(DstSolution { arcs, cost })
}

/// Exact optimum for star demands and unit lengths.
pub fn solve_slst(inst: &SlsnInstance) -> Result<Solution> {
    if inst.p() == 0 {
        return Solution::from_edges(inst, []);
    }
    let Some(root) = inst.demands.star_root() else {
        return contract("demands do not form a star");
    };
    let (dst, _) = build_layered_dst(inst, root)?;
    let sol = solve_dst(&dst)?;
    let edges = sol.arcs.iter().filter_map(|&a| dst.arcs[a].origin);
    Solution::from_edges(inst, edges)
}
