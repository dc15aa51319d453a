//! Hardness gadgets: SLSN instances built from multi-colored clique inputs
//! for every hard demand pattern, with threshold costs `g(H)`, witness
//! solutions for a given clique and checks of the claimed path shapes.
//!
//! Every gadget is first assembled as a small integer-length *skeleton*
//! whose vertices carry a [`Role`] and whose edges carry an [`EdgeFamily`].
//! The instance is the skeleton expanded into unit-length hops; skeleton
//! vertices keep their ids in the instance.

mod build;
mod mcc;
mod verify;
mod witness;

pub use build::{
    apply_poly_cost, build_case1, build_case2, build_case3, build_case4, build_case5, build_gadget,
    build_general, default_side_map, exact_bipartite,
};
pub use mcc::MccInstance;
pub use verify::{verify_structure, StructureCheck, StructureReport};
pub use witness::witness_solution;

use crate::classifier::{verify_witness, CaseTag, HardWitness};
use crate::error::{input, Result};
use crate::graph::{DemandGraph, EdgeId, Path, SlsnInstance, VertexId, WeightedGraph};
use crate::rational::{ceil_int, int, ratio, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// `f_i(j)`: the integer after `j`, skipping `i`.
pub fn f_next(i: usize, j: usize) -> usize {
    if j + 1 == i {
        j + 2
    } else {
        j + 1
    }
}

/// `f_i^t(j)`.
pub fn f_iter(i: usize, t: usize, j: usize) -> usize {
    (0..t).fold(j, |x, _| f_next(i, x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "flavor")]
pub enum CostFlavor {
    UnitCost,
    PolyCost {
        #[serde(with = "crate::rational")]
        eps: Rational,
    },
}

impl fmt::Display for CostFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostFlavor::UnitCost => f.write_str("unit"),
            CostFlavor::PolyCost { eps } => write!(f, "poly(eps={})", crate::rational::format_rational(eps)),
        }
    }
}

/// Which construction a recipe asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GadgetKind {
    H0Star,
    H1Star,
    H2Star,
    Matching,
    Bipartite,
    General,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 6] = [
        GadgetKind::H0Star,
        GadgetKind::H1Star,
        GadgetKind::H2Star,
        GadgetKind::Matching,
        GadgetKind::Bipartite,
        GadgetKind::General,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::H0Star => "h0star",
            GadgetKind::H1Star => "h1star",
            GadgetKind::H2Star => "h2star",
            GadgetKind::Matching => "matching",
            GadgetKind::Bipartite => "bipartite",
            GadgetKind::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<GadgetKind> {
        GadgetKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// The pattern a fixed-shape kind builds.
    pub fn pattern(self) -> Option<CaseTag> {
        match self {
            GadgetKind::H0Star => Some(CaseTag::Hk0Star),
            GadgetKind::H1Star => Some(CaseTag::Hk1Star),
            GadgetKind::H2Star => Some(CaseTag::Hk2Star),
            GadgetKind::Matching => Some(CaseTag::Hkk),
            GadgetKind::Bipartite => Some(CaseTag::H2k),
            GadgetKind::General => None,
        }
    }
}

/// Everything needed to rebuild a gadget deterministically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRecipe {
    pub kind: GadgetKind,
    pub mcc: MccInstance,
    /// Demand graph for `bipartite` and `general`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand_graph: Option<Vec<(VertexId, VertexId)>>,
    /// `[→r_1, →r_2, →l_{1,2}, →l_{1,3}, ...]` for `bipartite`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_map: Option<Vec<VertexId>>,
    pub flavor: CostFlavor,
}

/// Role of a skeleton vertex. Colors and `i, j` are 1-based, MCC vertices
/// keep their 0-based ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Root,
    Root1,
    Root2,
    /// `z_{i,j}` with `i < j`.
    Z(usize, usize),
    /// `z_e` for the MCC edge `{u, v}`, `u < v`.
    ZEdge(usize, usize),
    /// `x_{v,j}`.
    X(usize, usize),
    /// `x'_{v,j}`.
    XPrime(usize, usize),
    /// `l_{i,j}`.
    Leaf(usize, usize),
    /// `l'_{i,j}`.
    LeafPrime(usize, usize),
    /// `y_i`: `0..=k` in the zig-zag gadget, a color in the bipartite one.
    Y(usize),
    /// `y_v` of the bipartite gadget.
    YVertex(usize),
    /// Fresh vertex for a demand-graph vertex outside the pattern.
    Extra(VertexId),
}

impl Role {
    pub fn label(&self) -> String {
        match *self {
            Role::Root => "r".into(),
            Role::Root1 => "r_1".into(),
            Role::Root2 => "r_2".into(),
            Role::Z(i, j) => format!("z_{{{i},{j}}}"),
            Role::ZEdge(u, v) => format!("ze_{{{u},{v}}}"),
            Role::X(v, j) => format!("x_{{{v},{j}}}"),
            Role::XPrime(v, j) => format!("x'_{{{v},{j}}}"),
            Role::Leaf(i, j) => format!("l_{{{i},{j}}}"),
            Role::LeafPrime(i, j) => format!("l'_{{{i},{j}}}"),
            Role::Y(i) => format!("y_{{{i}}}"),
            Role::YVertex(v) => format!("yv_{{{v}}}"),
            Role::Extra(h) => format!("h_{{{h}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeFamily {
    /// `l'_{i,j}` to `r`.
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
    Eyx,
    Exx,
    Exy,
    E11,
    E12,
    E13,
    E21,
    E22,
    E23,
    Exl,
    Ell,
    /// L-hop path for a demand outside the pattern.
    Extra,
}

/// A generated instance with its threshold and the skeleton it came from.
#[derive(Clone, Debug)]
pub struct GadgetBundle {
    /// Hop-expanded instance. Its demands are `demand_graph` mapped through
    /// `terminal_map`, in the same order.
    pub instance: SlsnInstance,
    /// The demand graph in its own vertex ids.
    pub demand_graph: DemandGraph,
    /// Demand-graph vertex → instance vertex.
    pub terminal_map: BTreeMap<VertexId, VertexId>,
    /// Induced pattern inside `demand_graph` the gadget encodes.
    pub pattern: HardWitness,
    pub k: usize,
    pub g_value: Rational,
    pub cost_flavor: CostFlavor,
    pub recipe: GadgetRecipe,
    /// Integer-length graph before hop expansion.
    pub skeleton: WeightedGraph,
    /// Skeleton vertex → role.
    pub roles: Vec<Role>,
    /// Skeleton edge → family.
    pub families: Vec<EdgeFamily>,
    /// Skeleton edge → instance hop edges, ordered from its `u` to its `v`.
    pub edge_map: Vec<Vec<EdgeId>>,
    /// Instance edge → skeleton edge.
    pub origin: Vec<EdgeId>,
    index: BTreeMap<Role, VertexId>,
}

impl GadgetBundle {
    pub fn case_tag(&self) -> CaseTag {
        self.pattern.case_tag
    }

    pub fn vertex(&self, role: Role) -> Option<VertexId> {
        self.index.get(&role).copied()
    }

    /// Role of an instance vertex; `None` for hop interiors.
    pub fn role(&self, v: VertexId) -> Option<Role> {
        self.roles.get(v).copied()
    }

    /// Number of demands outside the pattern.
    pub fn extra_demands(&self) -> usize {
        self.demand_graph.p() - self.pattern.induced_pairs(&self.demand_graph).len()
    }

    /// Skeleton edge joining two skeleton vertices.
    pub fn skeleton_edge(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.skeleton.neighbors(a).iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Instance path along consecutive skeleton vertices given by role.
    pub fn route(&self, roles: &[Role]) -> Result<Path> {
        let ids = roles
            .iter()
            .map(|r| self.vertex(*r).ok_or_else(|| crate::SlsnError::Input(format!("no vertex {}", r.label()))))
            .collect::<Result<Vec<_>>>()?;
        let mut path = Path::trivial(ids[0]);
        for w in ids.windows(2) {
            let Some(e) = self.skeleton_edge(w[0], w[1]) else {
                return input(format!(
                    "no skeleton edge {} - {}",
                    self.skeleton.display_label(w[0]),
                    self.skeleton.display_label(w[1])
                ));
            };
            let hops = &self.edge_map[e];
            let forward = self.skeleton.edge(e).u == w[0];
            let mut cur = w[0];
            let ordered: Vec<EdgeId> = if forward {
                hops.clone()
            } else {
                hops.iter().rev().copied().collect()
            };
            for h in ordered {
                cur = self.instance.graph.edge(h).other(cur);
                path.edges.push(h);
                path.vertices.push(cur);
            }
        }
        Ok(path)
    }
}

/// `4k²` for the zig-zag gadgets, `7` for the bipartite one.
pub fn length_bound(tag: CaseTag, k: usize) -> i64 {
    match tag {
        CaseTag::H2k => 7,
        _ => 4 * (k * k) as i64,
    }
}

fn poly(k: usize, coeffs: &[(u32, Rational)]) -> Rational {
    let k = int(k as i64);
    coeffs.iter().map(|(e, c)| c * num_traits::pow(k.clone(), *e as usize)).sum()
}

/// Threshold for a fixed-shape pattern (every tag but `H_2k`).
pub fn g_pattern(tag: CaseTag, k: usize, flavor: &CostFlavor) -> Result<Rational> {
    let poly_cost = matches!(flavor, CostFlavor::PolyCost { .. });
    let c: Vec<(u32, Rational)> = match (tag, poly_cost) {
        (CaseTag::H2k, _) => return input("H_2k thresholds depend on the demand graph"),
        (CaseTag::Hkk, false) => vec![(4, int(4)), (3, int(-4)), (2, int(2)), (1, int(2))],
        (CaseTag::Hkk, true) => vec![(6, int(6)), (5, int(-6)), (4, int(3)), (2, ratio(1, 2)), (1, ratio(1, 2))],
        (_, false) => vec![(4, int(4)), (3, int(-4)), (2, ratio(3, 2)), (1, ratio(5, 2))],
        (_, true) => vec![(6, int(6)), (5, int(-6)), (4, int(3)), (1, int(1))],
    };
    Ok(poly(k, &c))
}

/// Threshold for the bipartite gadget with `size` demands.
pub fn g_bipartite(k: usize, size: usize, roots_joined: bool, flavor: &CostFlavor) -> Rational {
    let size = int(size as i64);
    let joined = int(if roots_joined { 7 } else { 0 });
    let c = match flavor {
        CostFlavor::UnitCost => vec![(2, int(-7)), (1, int(9))],
        CostFlavor::PolyCost { .. } => vec![(6, int(16)), (5, int(-16)), (2, int(-10)), (1, int(11))],
    };
    poly(k, &c) + int(7) * size - joined
}

/// `⌈L|H|/ε⌉`, the cost multiplier of pattern edges in a polynomial-cost
/// general gadget.
pub fn general_factor(bound: i64, size: usize, eps: &Rational) -> Rational {
    Rational::from_integer(ceil_int(&(int(bound) * int(size as i64) / eps)))
}

/// `g(H)` for a demand graph and the induced pattern the gadget encodes.
pub fn g_value_of(h: &DemandGraph, pattern: &HardWitness, flavor: &CostFlavor) -> Result<Rational> {
    if !verify_witness(h, pattern) {
        return input("pattern is not an induced copy in the demand graph");
    }
    let k = pattern.k;
    let inner = pattern.induced_pairs(h).len();
    let base = match pattern.case_tag {
        CaseTag::H2k => {
            let (a, b) = (pattern.vertex_map[0], pattern.vertex_map[1]);
            g_bipartite(k, inner, h.contains(a, b), flavor)
        }
        tag => g_pattern(tag, k, flavor)?,
    };
    let extra = h.p() - inner;
    if extra == 0 {
        return Ok(base);
    }
    let bound = length_bound(pattern.case_tag, k);
    let scaled = match flavor {
        CostFlavor::UnitCost => base,
        CostFlavor::PolyCost { eps } => general_factor(bound, h.p(), eps) * base,
    };
    Ok(scaled + int(bound) * int(extra as i64))
}
