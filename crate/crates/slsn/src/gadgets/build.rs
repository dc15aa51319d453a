use super::{
    f_iter, f_next, g_value_of, general_factor, length_bound, CostFlavor, EdgeFamily, GadgetBundle,
    GadgetKind, GadgetRecipe, MccInstance, Role,
};
use crate::classifier::{find_hard_pattern, find_pattern_exhaustive, hard_threshold, verify_witness, CaseTag, HardWitness};
use crate::error::{contract, input, Result};
use crate::graph::{expand_to_unit, CostMode, DemandGraph, SlsnInstance, VertexId, WeightedGraph};
use crate::rational::{int, Rational};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Branch budget for the pattern search on demand graphs too small for the
/// constructive extraction.
const SEARCH_STEPS: usize = 5_000_000;

struct Skeleton {
    graph: WeightedGraph,
    roles: Vec<Role>,
    families: Vec<EdgeFamily>,
    index: BTreeMap<Role, VertexId>,
}

impl Skeleton {
    fn new() -> Self {
        Skeleton {
            graph: WeightedGraph::new(0),
            roles: Vec::new(),
            families: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    fn add(&mut self, role: Role) -> VertexId {
        let v = self.graph.add_vertex(Some(role.label()));
        self.roles.push(role);
        self.index.insert(role, v);
        v
    }

    fn id(&self, role: Role) -> VertexId {
        self.index[&role]
    }

    fn join(&mut self, family: EdgeFamily, a: Role, b: Role, length: i64) -> Result<()> {
        let (a, b) = (self.id(a), self.id(b));
        self.graph.add(a, b, length, length)?;
        self.families.push(family);
        Ok(())
    }
}

/// `(i, j)` with `i ≠ j` in lexicographic order.
fn ordered_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn unordered_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect()
}

fn check_mcc(mcc: &MccInstance) -> Result<()> {
    if mcc.k() < 2 {
        return input("gadgets need k ≥ 2");
    }
    mcc.require_nonempty_classes()
}

/// The zig-zag gadget, optionally with the extra `l'` layer of the matching
/// case.
fn zigzag_skeleton(mcc: &MccInstance, matching: bool) -> Result<Skeleton> {
    let k = mcc.k();
    let long = 2 * (k * k) as i64 - 2;
    let c = |v: usize| mcc.color(v);
    let xs: Vec<(usize, usize)> = (0..mcc.n())
        .flat_map(|v| (1..=k).filter(move |&j| j != c(v)).map(move |j| (v, j)))
        .collect();
    let mut sk = Skeleton::new();
    sk.add(Role::Root);
    if matching {
        for (i, j) in ordered_pairs(k) {
            sk.add(Role::LeafPrime(i, j));
        }
    }
    for (i, j) in unordered_pairs(k) {
        sk.add(Role::Z(i, j));
    }
    for &(u, v) in mcc.edges() {
        sk.add(Role::ZEdge(u, v));
    }
    for &(v, j) in &xs {
        sk.add(Role::X(v, j));
    }
    for &(v, j) in &xs {
        sk.add(Role::XPrime(v, j));
    }
    for (i, j) in ordered_pairs(k) {
        sk.add(Role::Leaf(i, j));
    }
    for i in 0..=k {
        sk.add(Role::Y(i));
    }

    if matching {
        for (i, j) in ordered_pairs(k) {
            sk.join(EdgeFamily::E0, Role::LeafPrime(i, j), Role::Root, 1)?;
        }
    }
    for (i, j) in unordered_pairs(k) {
        sk.join(EdgeFamily::E1, Role::Root, Role::Z(i, j), if matching { 1 } else { 2 })?;
    }
    for &(u, v) in mcc.edges() {
        let (a, b) = (c(u).min(c(v)), c(u).max(c(v)));
        sk.join(EdgeFamily::E2, Role::Z(a, b), Role::ZEdge(u, v), 1)?;
    }
    for &(u, v) in mcc.edges() {
        sk.join(EdgeFamily::E3, Role::ZEdge(u, v), Role::X(u, c(v)), long)?;
        sk.join(EdgeFamily::E3, Role::ZEdge(u, v), Role::X(v, c(u)), long)?;
    }
    for &(v, j) in &xs {
        sk.join(EdgeFamily::E4, Role::X(v, j), Role::XPrime(v, j), 1)?;
    }
    for &(v, j) in &xs {
        sk.join(EdgeFamily::E5, Role::XPrime(v, j), Role::Leaf(c(v), j), long)?;
    }
    let classes = mcc.classes();
    for (i, class) in (1..=k).zip(&classes) {
        for &v in class {
            sk.join(EdgeFamily::Eyx, Role::Y(i - 1), Role::X(v, f_next(i, 0)), 4)?;
        }
    }
    for &(v, j) in &xs {
        if j != f_iter(c(v), k - 1, 0) {
            sk.join(EdgeFamily::Exx, Role::XPrime(v, j), Role::X(v, f_next(c(v), j)), 3)?;
        }
    }
    for (i, class) in (1..=k).zip(&classes) {
        for &v in class {
            sk.join(EdgeFamily::Exy, Role::XPrime(v, f_iter(i, k - 1, 0)), Role::Y(i), 3)?;
        }
    }
    Ok(sk)
}

fn bipartite_skeleton(mcc: &MccInstance) -> Result<Skeleton> {
    let k = mcc.k();
    let c = |v: usize| mcc.color(v);
    let xs: Vec<(usize, usize)> = (0..mcc.n())
        .flat_map(|v| (1..=k).filter(move |&j| j != c(v)).map(move |j| (v, j)))
        .collect();
    let leaves = ordered_pairs(k);
    let mut sk = Skeleton::new();
    sk.add(Role::Root1);
    sk.add(Role::Root2);
    for (i, j) in unordered_pairs(k) {
        sk.add(Role::Z(i, j));
    }
    for i in 1..=k {
        sk.add(Role::Y(i));
    }
    for &(u, v) in mcc.edges() {
        sk.add(Role::ZEdge(u, v));
    }
    for v in 0..mcc.n() {
        sk.add(Role::YVertex(v));
    }
    for &(v, j) in &xs {
        sk.add(Role::X(v, j));
    }
    for &(i, j) in &leaves {
        sk.add(Role::Leaf(i, j));
    }

    for (i, j) in unordered_pairs(k) {
        sk.join(EdgeFamily::E11, Role::Root1, Role::Z(i, j), 1)?;
    }
    for &(u, v) in mcc.edges() {
        let (a, b) = (c(u).min(c(v)), c(u).max(c(v)));
        sk.join(EdgeFamily::E12, Role::Z(a, b), Role::ZEdge(u, v), 1)?;
    }
    for &(u, v) in mcc.edges() {
        sk.join(EdgeFamily::E13, Role::ZEdge(u, v), Role::X(u, c(v)), 1)?;
        sk.join(EdgeFamily::E13, Role::ZEdge(u, v), Role::X(v, c(u)), 1)?;
    }
    for i in 1..=k {
        sk.join(EdgeFamily::E21, Role::Root2, Role::Y(i), 1)?;
    }
    for v in 0..mcc.n() {
        sk.join(EdgeFamily::E22, Role::Y(c(v)), Role::YVertex(v), 1)?;
    }
    for &(v, j) in &xs {
        sk.join(EdgeFamily::E23, Role::YVertex(v), Role::X(v, j), 1)?;
    }
    for &(v, j) in &xs {
        sk.join(EdgeFamily::Exl, Role::X(v, j), Role::Leaf(c(v), j), 4)?;
    }
    for (a, &(i, j)) in leaves.iter().enumerate() {
        for &(i2, j2) in &leaves[a + 1..] {
            sk.join(EdgeFamily::Ell, Role::Leaf(i, j), Role::Leaf(i2, j2), 7)?;
        }
    }
    Ok(sk)
}

/// Skeleton for a pattern, plus the roles its pattern vertices take, in the
/// layout of [`HardWitness::vertex_map`].
fn pattern_skeleton(mcc: &MccInstance, tag: CaseTag) -> Result<(Skeleton, Vec<Role>)> {
    check_mcc(mcc)?;
    let k = mcc.k();
    let leaves = ordered_pairs(k);
    let (sk, roles) = match tag {
        CaseTag::Hk0Star | CaseTag::Hk1Star | CaseTag::Hk2Star => {
            let mut roles = vec![Role::Root];
            roles.extend(leaves.iter().map(|&(i, j)| Role::Leaf(i, j)));
            roles.extend([Role::Y(0), Role::Y(k)]);
            (zigzag_skeleton(mcc, false)?, roles)
        }
        CaseTag::Hkk => {
            let mut roles: Vec<Role> =
                leaves.iter().flat_map(|&(i, j)| [Role::LeafPrime(i, j), Role::Leaf(i, j)]).collect();
            roles.extend([Role::Y(0), Role::Y(k)]);
            (zigzag_skeleton(mcc, true)?, roles)
        }
        CaseTag::H2k => {
            let mut roles = vec![Role::Root1, Role::Root2];
            roles.extend(leaves.iter().map(|&(i, j)| Role::Leaf(i, j)));
            (bipartite_skeleton(mcc)?, roles)
        }
    };
    Ok((sk, roles))
}

/// Demands of the exact pattern over a witness layout.
fn pattern_pairs(tag: CaseTag, map: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let n = map.len();
    match tag {
        CaseTag::Hk0Star | CaseTag::Hk1Star | CaseTag::Hk2Star => {
            let (s, u, v) = (map[0], map[n - 2], map[n - 1]);
            let mut out: Vec<_> = map[1..n - 2].iter().map(|&t| (s, t)).collect();
            out.push((u, v));
            if tag != CaseTag::Hk0Star {
                out.push((s, u));
            }
            if tag == CaseTag::Hk2Star {
                out.push((s, v));
            }
            out
        }
        CaseTag::Hkk => map.chunks(2).map(|c| (c[0], c[1])).collect(),
        CaseTag::H2k => [map[0], map[1]]
            .into_iter()
            .flat_map(|r| map[2..].iter().map(move |&w| (r, w)))
            .collect(),
    }
}

fn poly_cost(tag: CaseTag, k: usize, family: EdgeFamily, length: &Rational) -> Rational {
    let k4 = int((k as i64).pow(4));
    match (tag, family) {
        (CaseTag::H2k, EdgeFamily::E22) => int(4) * k4 * int(k as i64 - 1),
        (CaseTag::H2k, EdgeFamily::E12 | EdgeFamily::Exl) => int(8) * k4,
        (CaseTag::H2k, _) => length.clone(),
        (_, EdgeFamily::E2 | EdgeFamily::E4) => int(4) * k4,
        _ => length.clone(),
    }
}

fn check_flavor(flavor: &CostFlavor) -> Result<()> {
    match flavor {
        CostFlavor::PolyCost { eps } if !eps.is_positive() || *eps > int(1) => input("ε must lie in (0, 1]"),
        _ => Ok(()),
    }
}

/// Builds the gadget for `h` given an induced pattern copy in it.
fn assemble(
    mcc: &MccInstance,
    h: DemandGraph,
    pattern: HardWitness,
    flavor: CostFlavor,
    recipe: GadgetRecipe,
) -> Result<GadgetBundle> {
    check_flavor(&flavor)?;
    if pattern.k != mcc.k() || !verify_witness(&h, &pattern) {
        return contract("pattern is not an induced copy in the demand graph");
    }
    let tag = pattern.case_tag;
    let k = mcc.k();
    let bound = length_bound(tag, k);
    let (mut sk, roles) = pattern_skeleton(mcc, tag)?;
    let pattern_edges = sk.graph.edge_count();

    let mut terminal_map = BTreeMap::new();
    for (&hv, &role) in pattern.vertex_map.iter().zip(&roles) {
        terminal_map.insert(hv, sk.id(role));
    }
    for hv in h.vertices() {
        terminal_map.entry(hv).or_insert_with(|| sk.add(Role::Extra(hv)));
    }
    let inner: BTreeSet<(VertexId, VertexId)> = pattern.induced_pairs(&h).into_iter().collect();
    for &(a, b) in h.pairs() {
        if !inner.contains(&(a, b)) {
            let (ra, rb) = (sk.roles[terminal_map[&a]], sk.roles[terminal_map[&b]]);
            sk.join(EdgeFamily::Extra, ra, rb, bound)?;
        }
    }
    let extra = h.p() - inner.len();

    let (graph, mode) = match &flavor {
        CostFlavor::UnitCost => (sk.graph.clone(), CostMode::UnitPerHop),
        CostFlavor::PolyCost { eps } => {
            let factor = if extra == 0 {
                int(1)
            } else {
                general_factor(bound, h.p(), eps)
            };
            let g = sk.graph.with_costs(|id, e| {
                if id < pattern_edges {
                    &factor * poly_cost(tag, k, sk.families[id], &e.length)
                } else {
                    e.length.clone()
                }
            });
            (g, CostMode::DivideEqually)
        }
    };
    let expansion = expand_to_unit(&graph, mode)?;
    let demands = DemandGraph::new(h.pairs().iter().map(|&(a, b)| (terminal_map[&a], terminal_map[&b])))?;
    let instance = SlsnInstance::new(expansion.graph, int(bound), demands)?;
    let g_value = g_value_of(&h, &pattern, &flavor)?;
    debug_assert!(!g_value.is_zero());
    Ok(GadgetBundle {
        instance,
        demand_graph: h,
        terminal_map,
        pattern,
        k,
        g_value,
        cost_flavor: flavor,
        recipe,
        skeleton: graph,
        roles: sk.roles,
        families: sk.families,
        edge_map: expansion.edge_map,
        origin: expansion.origin,
        index: sk.index,
    })
}

/// A fixed-shape gadget whose demand graph lives on the instance ids.
fn build_fixed(mcc: &MccInstance, tag: CaseTag, kind: GadgetKind, flavor: CostFlavor) -> Result<GadgetBundle> {
    let (sk, roles) = pattern_skeleton(mcc, tag)?;
    let map: Vec<VertexId> = roles.iter().map(|&r| sk.id(r)).collect();
    let h = DemandGraph::new(pattern_pairs(tag, &map))?;
    let pattern = HardWitness {
        case_tag: tag,
        k: mcc.k(),
        vertex_map: map,
    };
    let recipe = GadgetRecipe {
        kind,
        mcc: mcc.clone(),
        demand_graph: None,
        side_map: None,
        flavor: flavor.clone(),
    };
    assemble(mcc, h, pattern, flavor, recipe)
}

/// Zig-zag gadget with demands `{r, l_{i,j}}` and `{y_0, y_k}`.
pub fn build_case1(mcc: &MccInstance) -> Result<GadgetBundle> {
    build_fixed(mcc, CaseTag::Hk0Star, GadgetKind::H0Star, CostFlavor::UnitCost)
}

/// Case 1 plus the demand `{r, y_0}`.
pub fn build_case2(mcc: &MccInstance) -> Result<GadgetBundle> {
    build_fixed(mcc, CaseTag::Hk1Star, GadgetKind::H1Star, CostFlavor::UnitCost)
}

/// Case 2 plus the demand `{r, y_k}`.
pub fn build_case3(mcc: &MccInstance) -> Result<GadgetBundle> {
    build_fixed(mcc, CaseTag::Hk2Star, GadgetKind::H2Star, CostFlavor::UnitCost)
}

/// Matching gadget: an `l'` layer before the root and demands
/// `{l'_{i,j}, l_{i,j}}` plus `{y_0, y_k}`.
pub fn build_case4(mcc: &MccInstance) -> Result<GadgetBundle> {
    build_fixed(mcc, CaseTag::Hkk, GadgetKind::Matching, CostFlavor::UnitCost)
}

/// Complete bipartite demand graph between `{0, 1}` and `2..k(k−1)+2`.
pub fn exact_bipartite(k: usize) -> DemandGraph {
    let q = k * (k.max(1) - 1);
    DemandGraph::new([0, 1].into_iter().flat_map(|r| (2..q + 2).map(move |w| (r, w)))).expect("distinct pairs")
}

/// Lowest pair of vertices adjacent to every other vertex, followed by the
/// remaining vertices in increasing order.
pub fn default_side_map(h: &DemandGraph, k: usize) -> Result<Vec<VertexId>> {
    let q = k * (k.max(1) - 1);
    let vs = h.vertices();
    if k < 2 || vs.len() != q + 2 {
        return contract(format!("an H_2k demand graph has exactly {} vertices", q + 2));
    }
    let n = h.max_vertex().map_or(0, |v| v + 1);
    let adj = h.adjacency(n);
    let full: Vec<VertexId> = vs.iter().copied().filter(|&v| adj[v].len() >= q).collect();
    for (x, &a) in full.iter().enumerate() {
        for &b in &full[x + 1..] {
            let covers = |r: VertexId| vs.iter().all(|&w| w == a || w == b || adj[r].binary_search(&w).is_ok());
            if covers(a) && covers(b) {
                let mut map = vec![a, b];
                map.extend(vs.iter().copied().filter(|&w| w != a && w != b));
                return Ok(map);
            }
        }
    }
    contract("demand graph has no two vertices adjacent to all others")
}

/// Bipartite gadget for `h ∈ H_2k`. `side_map` lists the demand-graph
/// vertices sent to `r_1`, `r_2`, then `l_{i,j}` in lexicographic order.
pub fn build_case5(mcc: &MccInstance, h: &DemandGraph, side_map: Option<&[VertexId]>) -> Result<GadgetBundle> {
    build_bipartite(mcc, h, side_map, CostFlavor::UnitCost)
}

fn build_bipartite(
    mcc: &MccInstance,
    h: &DemandGraph,
    side_map: Option<&[VertexId]>,
    flavor: CostFlavor,
) -> Result<GadgetBundle> {
    let k = mcc.k();
    let map = match side_map {
        Some(m) => m.to_vec(),
        None => default_side_map(h, k)?,
    };
    let pattern = HardWitness {
        case_tag: CaseTag::H2k,
        k,
        vertex_map: map.clone(),
    };
    if h.vertices().len() != map.len() || !verify_witness(h, &pattern) {
        return contract("side map does not place the demand graph in H_2k");
    }
    let recipe = GadgetRecipe {
        kind: GadgetKind::Bipartite,
        mcc: mcc.clone(),
        demand_graph: Some(h.pairs().to_vec()),
        side_map: side_map.map(<[VertexId]>::to_vec),
        flavor: flavor.clone(),
    };
    assemble(mcc, h.clone(), pattern, flavor, recipe)
}

/// Induced hard pattern of `h`: the constructive extraction for large
/// graphs, a bounded exhaustive search otherwise.
fn locate_pattern(h: &DemandGraph, k: usize) -> Result<HardWitness> {
    if h.star_root().is_some() {
        return contract("star demand graphs have no hard pattern");
    }
    if (h.p() as u128) >= hard_threshold(k) {
        return find_hard_pattern(h, k);
    }
    match find_pattern_exhaustive(h, k, SEARCH_STEPS) {
        Some(w) => Ok(w),
        None => contract(format!("demand graph has no induced hard pattern for k = {k}")),
    }
}

/// Gadget for an arbitrary demand graph containing an induced hard pattern:
/// the pattern's gadget plus one fresh `L`-hop path per remaining demand.
pub fn build_general(mcc: &MccInstance, h: &DemandGraph) -> Result<GadgetBundle> {
    build_general_with(mcc, h, CostFlavor::UnitCost)
}

fn build_general_with(mcc: &MccInstance, h: &DemandGraph, flavor: CostFlavor) -> Result<GadgetBundle> {
    if mcc.k() < 2 {
        return input("gadgets need k ≥ 2");
    }
    let pattern = locate_pattern(h, mcc.k())?;
    let recipe = GadgetRecipe {
        kind: GadgetKind::General,
        mcc: mcc.clone(),
        demand_graph: Some(h.pairs().to_vec()),
        side_map: None,
        flavor: flavor.clone(),
    };
    assemble(mcc, h.clone(), pattern, flavor, recipe)
}

/// Builds a gadget from a recipe.
pub fn build_gadget(recipe: &GadgetRecipe) -> Result<GadgetBundle> {
    check_flavor(&recipe.flavor)?;
    let mcc = &recipe.mcc;
    let flavor = recipe.flavor.clone();
    let h = recipe.demand_graph.as_ref().map(|p| DemandGraph::new(p.iter().copied())).transpose()?;
    match recipe.kind {
        GadgetKind::Bipartite => {
            let h = h.unwrap_or_else(|| exact_bipartite(mcc.k()));
            build_bipartite(mcc, &h, recipe.side_map.as_deref(), flavor)
        }
        GadgetKind::General => match h {
            Some(h) => build_general_with(mcc, &h, flavor),
            None => input("the general gadget needs a demand graph"),
        },
        kind => build_fixed(mcc, kind.pattern().expect("fixed kind"), kind, flavor),
    }
}

/// Polynomial-cost variant of a unit-cost gadget.
pub fn apply_poly_cost(bundle: &GadgetBundle, eps: &Rational) -> Result<GadgetBundle> {
    if bundle.cost_flavor != CostFlavor::UnitCost {
        return contract("gadget already has polynomial costs");
    }
    let recipe = GadgetRecipe {
        flavor: CostFlavor::PolyCost { eps: eps.clone() },
        ..bundle.recipe.clone()
    };
    build_gadget(&recipe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::feasibility_check;
    use crate::rational::ratio;

    fn edge_mcc() -> MccInstance {
        MccInstance::new(2, vec![1, 2], vec![(0, 1)]).unwrap()
    }

    fn triangle_mcc() -> MccInstance {
        MccInstance::new(3, vec![1, 2, 3], vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn binom2(x: usize) -> usize {
        x * x.saturating_sub(1) / 2
    }

    /// Skeleton and hop-interior vertex counts of the zig-zag gadget.
    fn zigzag_vertices(mcc: &MccInstance, matching: bool) -> usize {
        let (k, n, m) = (mcc.k(), mcc.n(), mcc.edges().len());
        let q = k * (k - 1);
        let long = 2 * k * k - 3;
        let skeleton = 1 + binom2(k) + m + 2 * n * (k - 1) + q + (k + 1) + if matching { q } else { 0 };
        let e1 = if matching { 0 } else { binom2(k) };
        let interior = e1 + 2 * m * long + n * (k - 1) * long + 3 * n + 2 * n * (k - 2) + 2 * n;
        skeleton + interior
    }

    #[test]
    fn case1_shape() {
        for mcc in [edge_mcc(), triangle_mcc()] {
            let b = build_case1(&mcc).unwrap();
            let k = mcc.k();
            assert_eq!(b.instance.bound, int(4 * (k * k) as i64));
            assert!(b.instance.graph.has_unit_lengths() && b.instance.graph.has_unit_costs());
            assert_eq!(b.instance.p(), k * (k - 1) + 1);
            assert_eq!(b.instance.n(), zigzag_vertices(&mcc, false));
            assert!(verify_witness(&b.demand_graph, &b.pattern));
            assert_eq!(b.extra_demands(), 0);
        }
        assert_eq!(build_case1(&edge_mcc()).unwrap().g_value, int(43));
        assert_eq!(build_case1(&triangle_mcc()).unwrap().g_value, int(237));
    }

    #[test]
    fn zigzag_edge_lengths() {
        let b = build_case1(&triangle_mcc()).unwrap();
        let want = |f: EdgeFamily| match f {
            EdgeFamily::E1 => 2,
            EdgeFamily::E3 | EdgeFamily::E5 => 16,
            EdgeFamily::Eyx => 4,
            EdgeFamily::Exx | EdgeFamily::Exy => 3,
            _ => 1,
        };
        for (e, &f) in b.families.iter().enumerate() {
            assert_eq!(b.skeleton.edge(e).length, int(want(f)), "{f:?}");
            assert_eq!(b.edge_map[e].len() as i64, want(f));
        }
        // per vertex: k − 1 E4 edges, k − 2 E_xx edges, one E_yx, one E_xy
        let count = |f| b.families.iter().filter(|&&x| x == f).count();
        assert_eq!(count(EdgeFamily::E4), 3 * 2);
        assert_eq!(count(EdgeFamily::Exx), 3);
        assert_eq!(count(EdgeFamily::Eyx), 3);
        assert_eq!(count(EdgeFamily::Exy), 3);
    }

    #[test]
    fn wrappers_add_root_demands() {
        let m = edge_mcc();
        let r = |b: &GadgetBundle, role| b.vertex(role).unwrap();
        let b2 = build_case2(&m).unwrap();
        assert_eq!(b2.instance.p(), 4);
        assert!(b2.instance.demands.contains(r(&b2, Role::Root), r(&b2, Role::Y(0))));
        let b3 = build_case3(&m).unwrap();
        assert_eq!(b3.instance.p(), 5);
        assert!(b3.instance.demands.contains(r(&b3, Role::Root), r(&b3, Role::Y(2))));
        assert_eq!(b3.g_value, int(43));
        assert_eq!(b3.instance.graph, build_case1(&m).unwrap().instance.graph);
    }

    #[test]
    fn case4_shape() {
        for mcc in [edge_mcc(), triangle_mcc()] {
            let b = build_case4(&mcc).unwrap();
            let k = mcc.k();
            assert_eq!(b.instance.p(), k * (k - 1) + 1);
            assert_eq!(b.instance.n(), zigzag_vertices(&mcc, true));
            let verts: BTreeSet<_> = b.instance.demands.pairs().iter().flat_map(|&(a, c)| [a, c]).collect();
            assert_eq!(verts.len(), 2 * b.instance.p(), "demands form a matching");
        }
        assert_eq!(build_case4(&edge_mcc()).unwrap().g_value, int(44));
    }

    #[test]
    fn case5_shape() {
        let m = edge_mcc();
        let h = exact_bipartite(2);
        let b = build_case5(&m, &h, None).unwrap();
        assert_eq!(b.instance.bound, int(7));
        assert_eq!(b.g_value, int(18));
        assert_eq!(b.instance.p(), 4);
        // 2 roots, 1 z, 2 y, 1 z_e, 2 y_v, 2 x, 2 l; E_xl and E_ll interiors
        assert_eq!(b.instance.n(), 12 + 2 * 3 + 6);
        let mut with_roots = h.pairs().to_vec();
        with_roots.push((0, 1));
        let h5 = DemandGraph::new(with_roots).unwrap();
        let b5 = build_case5(&m, &h5, None).unwrap();
        assert_eq!(b5.g_value, int(18));
        assert_eq!(b5.instance.p(), 5);
        let side = [1, 0, 3, 2];
        let b6 = build_case5(&m, &h, Some(&side)).unwrap();
        assert_eq!(b6.terminal_map[&1], b6.vertex(Role::Root1).unwrap());
        assert_eq!(b6.terminal_map[&3], b6.vertex(Role::Leaf(1, 2)).unwrap());
        assert!(build_case5(&m, &h, Some(&[2, 3, 0, 1])).is_ok());
        assert!(build_case5(&m, &h, Some(&[0, 2, 1, 3])).is_err());
        let not_bipartite = DemandGraph::new([(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(build_case5(&m, &not_bipartite, None).is_err());
    }

    #[test]
    fn case5_extra_leaf_demands() {
        let k = 2;
        let mut pairs = exact_bipartite(k).pairs().to_vec();
        pairs.push((2, 3));
        let h = DemandGraph::new(pairs).unwrap();
        let b = build_case5(&edge_mcc(), &h, None).unwrap();
        // 7·5 − 28 + 18
        assert_eq!(b.g_value, int(25));
        assert!(feasibility_check(&b.instance, &b.instance.all_edges()).unwrap().feasible());
    }

    #[test]
    fn empty_class_rejected() {
        let m = MccInstance::new(3, vec![1, 2, 2], vec![(0, 1)]).unwrap();
        assert!(build_case1(&m).is_err());
        let m = MccInstance::new(1, vec![1], vec![]).unwrap();
        assert!(build_case1(&m).is_err());
    }

    #[test]
    fn no_instance_is_infeasible() {
        let m = MccInstance::new(2, vec![1, 2], vec![]).unwrap();
        let b = build_case1(&m).unwrap();
        let report = feasibility_check(&b.instance, &b.instance.all_edges()).unwrap();
        assert!(!report.feasible());
        let root = b.vertex(Role::Root).unwrap();
        assert!(report
            .unsatisfied()
            .iter()
            .all(|&i| b.instance.demands.pairs()[i].0 == root || b.instance.demands.pairs()[i].1 == root));
    }

    #[test]
    fn general_on_pattern_matches_case() {
        let m = edge_mcc();
        let b1 = build_case1(&m).unwrap();
        let g = build_general(&m, &b1.demand_graph).unwrap();
        assert_eq!(g.case_tag(), CaseTag::Hk0Star);
        assert_eq!(g.instance.graph, b1.instance.graph);
        assert_eq!(g.g_value, b1.g_value);
        let b4 = build_case4(&m).unwrap();
        let g4 = build_general(&m, &b4.demand_graph).unwrap();
        assert_eq!(g4.case_tag(), CaseTag::Hkk);
        assert_eq!(g4.instance.graph, b4.instance.graph);
    }

    #[test]
    fn general_adds_hop_paths() {
        let m = edge_mcc();
        let h = DemandGraph::new([(0, 1), (0, 2), (3, 4), (5, 6)]).unwrap();
        let b = build_general(&m, &h).unwrap();
        assert_eq!(b.case_tag(), CaseTag::Hk0Star);
        assert_eq!(b.g_value, int(59));
        assert_eq!(b.extra_demands(), 1);
        let base = build_case1(&m).unwrap();
        // two fresh endpoints plus 15 hop interiors
        assert_eq!(b.instance.n(), base.instance.n() + 2 + 15);
        assert_eq!(b.instance.m(), base.instance.m() + 16);
        assert!(feasibility_check(&b.instance, &b.instance.all_edges()).unwrap().feasible());
        let star = DemandGraph::new([(0, 1), (0, 2)]).unwrap();
        assert!(build_general(&m, &star).is_err());
        let small = DemandGraph::new([(0, 1), (2, 3)]).unwrap();
        assert!(build_general(&m, &small).is_err());
    }

    #[test]
    fn poly_costs() {
        let m = edge_mcc();
        let b = apply_poly_cost(&build_case1(&m).unwrap(), &ratio(1, 4)).unwrap();
        assert_eq!(b.g_value, int(242));
        assert!(b.instance.graph.has_unit_lengths());
        for (e, &f) in b.families.iter().enumerate() {
            let want = match f {
                EdgeFamily::E2 | EdgeFamily::E4 => int(64),
                _ => int(1),
            };
            assert!(b.edge_map[e].iter().all(|&h| b.instance.graph.edge(h).cost == want), "{f:?}");
        }
        assert!(apply_poly_cost(&b, &ratio(1, 4)).is_err());
        assert!(apply_poly_cost(&build_case1(&m).unwrap(), &int(2)).is_err());
        assert!(apply_poly_cost(&build_case1(&m).unwrap(), &int(0)).is_err());

        let b5 = apply_poly_cost(&build_case5(&m, &exact_bipartite(2), None).unwrap(), &ratio(1, 4)).unwrap();
        assert_eq!(b5.g_value, int(522));
        for (e, &f) in b5.families.iter().enumerate() {
            let want = match f {
                EdgeFamily::E22 => int(64),
                EdgeFamily::E12 => int(128),
                EdgeFamily::Exl => int(32),
                _ => int(1),
            };
            assert!(b5.edge_map[e].iter().all(|&h| b5.instance.graph.edge(h).cost == want), "{f:?}");
        }
    }

    #[test]
    fn poly_general_scales_pattern() {
        let m = edge_mcc();
        let h = DemandGraph::new([(0, 1), (0, 2), (3, 4), (5, 6)]).unwrap();
        let b = apply_poly_cost(&build_general(&m, &h).unwrap(), &ratio(1, 4)).unwrap();
        assert_eq!(b.g_value, int(256 * 242 + 16));
        for (e, &f) in b.families.iter().enumerate() {
            let hop = &b.instance.graph.edge(b.edge_map[e][0]).cost;
            let want = match f {
                EdgeFamily::Extra => int(1),
                EdgeFamily::E2 | EdgeFamily::E4 => int(256 * 64),
                _ => int(256),
            };
            assert_eq!(hop, &want, "{f:?}");
        }
    }

    #[test]
    fn recipe_round_trip() {
        let m = triangle_mcc();
        let b = build_case4(&m).unwrap();
        let text = serde_json::to_string(&b.recipe).unwrap();
        let back: GadgetRecipe = serde_json::from_str(&text).unwrap();
        let again = build_gadget(&back).unwrap();
        assert_eq!(again.instance, b.instance);
        assert_eq!(again.g_value, b.g_value);
    }
}
