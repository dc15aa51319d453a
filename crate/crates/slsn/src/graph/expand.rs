use super::{EdgeId, VertexId, WeightedGraph};
use crate::error::{input, Result};
use crate::rational::{int, Rational};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostMode {
    /// Every hop costs 1.
    UnitPerHop,
    /// An edge of length ℓ and cost c becomes ℓ hops of cost c/ℓ.
    DivideEqually,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub graph: WeightedGraph,
    /// Original vertex → expanded vertex (original ids are kept).
    pub vertex_map: Vec<VertexId>,
    /// Original edge → its hop edges, ordered from `u` to `v`.
    pub edge_map: Vec<Vec<EdgeId>>,
    /// Expanded edge → original edge.
    pub origin: Vec<EdgeId>,
}

/// Replaces each integer-length edge by a path of unit edges. Interior
/// vertices are labelled `<u>~<v>#<hop>` after the endpoint labels.
pub fn expand_to_unit(g: &WeightedGraph, mode: CostMode) -> Result<Expansion> {
    let n = g.vertex_count();
    let mut out = WeightedGraph::new(n);
    for v in 0..n {
        if let Some(l) = g.label(v) {
            out.set_label(v, l);
        }
    }
    let mut edge_map = Vec::with_capacity(g.edge_count());
    let mut origin = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        if !e.length.is_integer() {
            return input(format!("edge {id} has non-integer length"));
        }
        let hops = e
            .length
            .to_integer()
            .to_usize()
            .ok_or_else(|| crate::error::SlsnError::Overflow("edge length".into()))?;
        let hop_cost = match mode {
            CostMode::UnitPerHop => int(1),
            CostMode::DivideEqually => &e.cost / Rational::from_integer(hops.into()),
        };
        let stem = format!("{}~{}", g.display_label(e.u), g.display_label(e.v));
        let mut prev = e.u;
        let mut ids = Vec::with_capacity(hops);
        for h in 1..=hops {
            let next = if h == hops {
                e.v
            } else {
                out.add_vertex(Some(format!("{stem}#{h}")))
            };
            ids.push(out.add_edge(prev, next, int(1), hop_cost.clone())?);
            origin.push(id);
            prev = next;
        }
        edge_map.push(ids);
    }
    Ok(Expansion {
        graph: out,
        vertex_map: (0..n).collect(),
        edge_map,
        origin,
    })
}
