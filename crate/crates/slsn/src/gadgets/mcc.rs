use crate::error::{input, Result, SlsnError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// A k-colored simple graph. Colors are `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MccData", into = "MccData")]
pub struct MccInstance {
    k: usize,
    coloring: Vec<usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MccData {
    k: usize,
    coloring: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<MccData> for MccInstance {
    type Error = SlsnError;

    fn try_from(d: MccData) -> Result<Self> {
        MccInstance::new(d.k, d.coloring, d.edges)
    }
}

impl From<MccInstance> for MccData {
    fn from(m: MccInstance) -> Self {
        MccData {
            k: m.k,
            coloring: m.coloring,
            edges: m.edges,
        }
    }
}

impl MccInstance {
    pub fn new(k: usize, coloring: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = coloring.len();
        if k == 0 {
            return input("k must be positive");
        }
        if let Some(v) = coloring.iter().position(|&c| c == 0 || c > k) {
            return input(format!("vertex {v} has color outside 1..={k}"));
        }
        let mut adj = vec![BTreeSet::new(); n];
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return input(format!("bad edge ({a},{b})"));
            }
            if coloring[a] == coloring[b] {
                return input(format!("edge ({a},{b}) joins two vertices of one color"));
            }
            if !adj[a].insert(b) {
                return input(format!("duplicate edge ({a},{b})"));
            }
            adj[b].insert(a);
            norm.push((a.min(b), a.max(b)));
        }
        Ok(MccInstance {
            k,
            coloring,
            edges: norm,
            adj,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.coloring.len()
    }

    pub fn color(&self, v: usize) -> usize {
        self.coloring[v]
    }

    pub fn coloring(&self) -> &[usize] {
        &self.coloring
    }

    /// Edges as `(min, max)` in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n() && self.adj[a].contains(&b)
    }

    /// `classes()[i - 1]` is the sorted color class `C_i`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.coloring.iter().enumerate() {
            out[c - 1].push(v);
        }
        out
    }

    pub(crate) fn require_nonempty_classes(&self) -> Result<()> {
        match self.classes().iter().position(|c| c.is_empty()) {
            Some(i) => input(format!("color class {} is empty", i + 1)),
            None => Ok(()),
        }
    }

    /// Orders a vertex set by color; `None` unless it has exactly one vertex
    /// per color.
    pub fn by_color(&self, vertices: &[usize]) -> Option<Vec<usize>> {
        let mut slot = vec![None; self.k];
        for &v in vertices {
            if v >= self.n() {
                return None;
            }
            let c = self.coloring[v] - 1;
            if slot[c].replace(v).is_some() {
                return None;
            }
        }
        slot.into_iter().collect()
    }

    pub fn is_multicolored_clique(&self, vertices: &[usize]) -> bool {
        let Some(vs) = self.by_color(vertices) else {
            return false;
        };
        (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| self.has_edge(vs[i], vs[j])))
    }
}
