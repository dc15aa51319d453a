//! Demand-graph classification: stars, graphs with few edges, and large
//! non-star graphs together with an induced hard pattern.

use crate::error::{contract, Result};
use crate::graph::{DemandGraph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    /// Star with k(k−1) leaves plus a disjoint edge.
    #[serde(rename = "H_k0_star")]
    Hk0Star,
    /// Star with k(k−1)+1 leaves plus an edge from a leaf to a new vertex.
    #[serde(rename = "H_k1_star")]
    Hk1Star,
    /// Star with k(k−1)+2 leaves plus an edge between two leaves.
    #[serde(rename = "H_k2_star")]
    Hk2Star,
    /// Induced matching with k(k−1)+1 edges.
    #[serde(rename = "H_kk")]
    Hkk,
    /// k(k−1)+2 vertices containing a complete 2 by k(k−1) bipartite graph.
    #[serde(rename = "H_2k")]
    H2k,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [
        CaseTag::Hk0Star,
        CaseTag::Hk1Star,
        CaseTag::Hk2Star,
        CaseTag::Hkk,
        CaseTag::H2k,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Hk0Star => "H_k0_star",
            CaseTag::Hk1Star => "H_k1_star",
            CaseTag::Hk2Star => "H_k2_star",
            CaseTag::Hkk => "H_kk",
            CaseTag::H2k => "H_2k",
        }
    }

    /// Number of pattern vertices for a given k.
    pub fn vertex_count(self, k: usize) -> usize {
        let q = k * (k - 1);
        match self {
            CaseTag::Hk0Star | CaseTag::Hk1Star | CaseTag::Hk2Star => q + 3,
            CaseTag::Hkk => 2 * (q + 1),
            CaseTag::H2k => q + 2,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An induced copy of a hard pattern.
///
/// `vertex_map` layouts:
/// - star patterns: `[s, t_1 .. t_{k(k−1)}, u, v]` with `{u, v}` the extra
///   edge (for `H_k1_star`, `u` is the leaf);
/// - `H_kk`: `[a_1, b_1, a_2, b_2, ...]`, one pair per matching edge;
/// - `H_2k`: `[a, b, w_1 .. w_{k(k−1)}]` with `a` and `b` adjacent to every
///   `w_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardWitness {
    pub case_tag: CaseTag,
    pub k: usize,
    pub vertex_map: Vec<VertexId>,
}

impl HardWitness {
    /// Demand pairs of `h` induced on the image.
    pub fn induced_pairs(&self, h: &DemandGraph) -> Vec<(VertexId, VertexId)> {
        let image: BTreeSet<VertexId> = self.vertex_map.iter().copied().collect();
        h.pairs()
            .iter()
            .copied()
            .filter(|(a, b)| image.contains(a) && image.contains(b))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum DemandClass {
    Star { root: VertexId },
    Bounded { p: usize },
    Hard { witness: HardWitness },
}

impl fmt::Display for DemandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DemandClass::Star { root } => write!(f, "Star(root={root})"),
            DemandClass::Bounded { p } => write!(f, "Bounded(p={p})"),
            DemandClass::Hard { witness } => write!(f, "Hard({})", witness.case_tag),
        }
    }
}

/// `8k^10`, saturating.
pub fn hard_threshold(k: usize) -> u128 {
    (k as u128).checked_pow(10).and_then(|x| x.checked_mul(8)).unwrap_or(u128::MAX)
}

/// Sorted adjacency over `0..=max_vertex`.
struct Adj {
    lists: Vec<Vec<VertexId>>,
    pairs: Vec<(VertexId, VertexId)>,
}

impl Adj {
    fn new(h: &DemandGraph) -> Self {
        let n = h.max_vertex().map_or(0, |v| v + 1);
        let mut pairs = h.pairs().to_vec();
        pairs.sort_unstable();
        Adj {
            lists: h.adjacency(n),
            pairs,
        }
    }

    fn n(&self) -> usize {
        self.lists.len()
    }

    fn has(&self, a: VertexId, b: VertexId) -> bool {
        a < self.n() && self.lists[a].binary_search(&b).is_ok()
    }

    fn degree(&self, v: VertexId) -> usize {
        self.lists[v].len()
    }
}

pub fn classify(h: &DemandGraph, k: usize) -> Result<DemandClass> {
    if k < 2 {
        return contract("k must be at least 2");
    }
    if h.is_empty() {
        return Ok(DemandClass::Bounded { p: 0 });
    }
    if let Some(root) = h.star_root() {
        return Ok(DemandClass::Star { root });
    }
    if (h.p() as u128) < hard_threshold(k) {
        return Ok(DemandClass::Bounded { p: h.p() });
    }
    Ok(DemandClass::Hard {
        witness: find_hard_pattern(h, k)?,
    })
}

/// Constructive extraction for non-star graphs with at least `8k^10` edges.
///
/// Among vertices of degree at least `2k^4` the case is chosen by a fixed
/// priority (bipartite, disjoint edge, leaf edge, inner edge) over all of
/// them, so relabeling the graph never changes the tag.
pub fn find_hard_pattern(h: &DemandGraph, k: usize) -> Result<HardWitness> {
    if k < 2 {
        return contract("k must be at least 2");
    }
    if h.is_empty() || h.star_root().is_some() {
        return contract("pattern search needs a non-star demand graph");
    }
    if (h.p() as u128) < hard_threshold(k) {
        return contract(format!("pattern search needs at least {} edges", hard_threshold(k)));
    }
    let adj = Adj::new(h);
    let q = k * (k - 1);
    let big = 2 * k.pow(4);
    let witness = |case_tag, vertex_map| HardWitness {
        case_tag,
        k,
        vertex_map,
    };
    let heavy: Vec<VertexId> = (0..adj.n()).filter(|&v| adj.degree(v) >= big).collect();
    if heavy.is_empty() {
        let m = greedy_induced_matching(&adj, q + 1);
        debug_assert_eq!(m.len(), q + 1);
        return Ok(witness(CaseTag::Hkk, m.into_iter().flat_map(|(a, b)| [a, b]).collect()));
    }
    for &s in &heavy {
        if let Some((w, common)) = second_center(&adj, s, q) {
            let mut map = vec![s, w];
            map.extend(common);
            return Ok(witness(CaseTag::H2k, map));
        }
    }
    let independent: Vec<VertexId> = heavy.iter().copied().filter(|&s| neighborhood_independent(&adj, s)).collect();
    for outside_both in [true, false] {
        for &s in &independent {
            let inner = |x: VertexId| x == s || adj.has(s, x);
            let edge = adj.pairs.iter().find(|&&(a, b)| {
                if outside_both {
                    !inner(a) && !inner(b)
                } else {
                    inner(a) != inner(b)
                }
            });
            let Some(&(a, b)) = edge else { continue };
            let (u, v) = if inner(b) { (b, a) } else { (a, b) };
            let t: Vec<VertexId> = adj.lists[s]
                .iter()
                .copied()
                .filter(|&x| x != u && !adj.has(u, x) && !adj.has(v, x))
                .take(q)
                .collect();
            debug_assert_eq!(t.len(), q);
            let tag = if outside_both { CaseTag::Hk0Star } else { CaseTag::Hk1Star };
            let mut map = vec![s];
            map.extend(t);
            map.extend([u, v]);
            return Ok(witness(tag, map));
        }
    }
    let s = heavy[0];
    let (t, u, v) = min_degree_deletion(&adj, s, q);
    let mut map = vec![s];
    map.extend(t);
    map.extend([u, v]);
    Ok(witness(CaseTag::Hk2Star, map))
}

fn greedy_induced_matching(adj: &Adj, want: usize) -> Vec<(VertexId, VertexId)> {
    let mut dead = vec![false; adj.n()];
    let mut out = Vec::new();
    for &(a, b) in &adj.pairs {
        if out.len() == want {
            break;
        }
        if dead[a] || dead[b] {
            continue;
        }
        out.push((a, b));
        for x in [a, b] {
            dead[x] = true;
            for &y in &adj.lists[x] {
                dead[y] = true;
            }
        }
    }
    out
}

/// Lowest vertex other than `s` adjacent to at least `q` neighbors of `s`,
/// with its `q` lowest such neighbors.
fn second_center(adj: &Adj, s: VertexId, q: usize) -> Option<(VertexId, Vec<VertexId>)> {
    let mut count = vec![0usize; adj.n()];
    for &x in &adj.lists[s] {
        for &w in &adj.lists[x] {
            count[w] += 1;
        }
    }
    let w = (0..adj.n()).find(|&w| w != s && count[w] >= q)?;
    let common = adj.lists[s].iter().copied().filter(|&x| adj.has(w, x)).take(q).collect();
    Some((w, common))
}

fn neighborhood_independent(adj: &Adj, s: VertexId) -> bool {
    adj.lists[s]
        .iter()
        .all(|&x| adj.lists[x].iter().all(|&y| y == s || !adj.has(s, y)))
}

/// Repeatedly keeps a vertex of least inner degree and drops its neighbors;
/// returns the kept set and an edge left inside the remainder.
fn min_degree_deletion(adj: &Adj, s: VertexId, q: usize) -> (Vec<VertexId>, VertexId, VertexId) {
    let mut alive: BTreeSet<VertexId> = adj.lists[s].iter().copied().collect();
    let inner_degree = |alive: &BTreeSet<VertexId>, x: VertexId| adj.lists[x].iter().filter(|y| alive.contains(y)).count();
    let has_inner_edge =
        |alive: &BTreeSet<VertexId>| alive.iter().any(|&x| adj.lists[x].iter().any(|y| alive.contains(y)));
    debug_assert!(has_inner_edge(&alive));
    let mut t = Vec::with_capacity(q);
    while t.len() < q {
        let v = *alive
            .iter()
            .min_by_key(|&&x| (inner_degree(&alive, x), x))
            .expect("enough vertices remain");
        t.push(v);
        alive.remove(&v);
        for y in &adj.lists[v] {
            alive.remove(y);
        }
        debug_assert!(has_inner_edge(&alive), "an edge must remain inside the neighborhood");
    }
    let (u, v) = alive
        .iter()
        .find_map(|&x| adj.lists[x].iter().find(|y| alive.contains(y)).map(|&y| (x, y)))
        .expect("an edge remains inside the neighborhood");
    (t, u, v)
}

/// True iff the induced subgraph on the image has exactly the tagged shape.
pub fn verify_witness(h: &DemandGraph, w: &HardWitness) -> bool {
    if w.k < 2 || w.vertex_map.len() != w.case_tag.vertex_count(w.k) {
        return false;
    }
    let present: BTreeSet<VertexId> = h.vertices().into_iter().collect();
    let image: BTreeSet<VertexId> = w.vertex_map.iter().copied().collect();
    if image.len() != w.vertex_map.len() || !image.is_subset(&present) {
        return false;
    }
    let adj = Adj::new(h);
    let map = &w.vertex_map;
    let q = w.k * (w.k - 1);
    let induced: BTreeSet<(VertexId, VertexId)> = w.induced_pairs(h).into_iter().collect();
    let norm = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let expected: BTreeSet<(VertexId, VertexId)> = match w.case_tag {
        CaseTag::Hk0Star | CaseTag::Hk1Star | CaseTag::Hk2Star => {
            let s = map[0];
            let (u, v) = (map[q + 1], map[q + 2]);
            let mut leaves: Vec<VertexId> = map[1..=q].to_vec();
            match w.case_tag {
                CaseTag::Hk1Star => leaves.push(u),
                CaseTag::Hk2Star => leaves.extend([u, v]),
                _ => {}
            }
            leaves.iter().map(|&l| norm(s, l)).chain([norm(u, v)]).collect()
        }
        CaseTag::Hkk => map.chunks(2).map(|c| norm(c[0], c[1])).collect(),
        CaseTag::H2k => {
            let (a, b) = (map[0], map[1]);
            return map[2..].iter().all(|&x| adj.has(a, x) && adj.has(b, x));
        }
    };
    induced == expected
}

/// Exhaustive search for an induced hard pattern in a small graph, trying
/// the tags in the order of [`CaseTag::ALL`]. Searches are bounded by
/// `max_steps` branch visits each.
pub fn find_pattern_exhaustive(h: &DemandGraph, k: usize, max_steps: usize) -> Option<HardWitness> {
    if k < 2 || h.is_empty() {
        return None;
    }
    let adj = Adj::new(h);
    let q = k * (k - 1);
    let n = adj.n();
    let witness = |case_tag, vertex_map| {
        Some(HardWitness {
            case_tag,
            k,
            vertex_map,
        })
    };
    let mut steps = 0usize;
    // Star patterns: centre s, extra edge {u, v}, independent leaves T.
    for tag in [CaseTag::Hk0Star, CaseTag::Hk1Star, CaseTag::Hk2Star] {
        for s in 0..n {
            for &(a, b) in &adj.pairs {
                for (u, v) in [(a, b), (b, a)] {
                    let (iu, iv) = (adj.has(s, u), adj.has(s, v));
                    let fits = u != s
                        && v != s
                        && match tag {
                            CaseTag::Hk0Star => !iu && !iv && u < v,
                            CaseTag::Hk1Star => iu && !iv,
                            _ => iu && iv && u < v,
                        };
                    if !fits {
                        continue;
                    }
                    let pool: Vec<VertexId> = adj.lists[s]
                        .iter()
                        .copied()
                        .filter(|&x| x != u && x != v && !adj.has(u, x) && !adj.has(v, x))
                        .collect();
                    if let Some(t) = independent_subset(&adj, &pool, q, &mut steps, max_steps) {
                        let mut map = vec![s];
                        map.extend(t);
                        map.extend([u, v]);
                        return witness(tag, map);
                    }
                }
            }
        }
    }
    if let Some(m) = induced_matching(&adj, q + 1, &mut steps, max_steps) {
        return witness(CaseTag::Hkk, m.into_iter().flat_map(|(a, b)| [a, b]).collect());
    }
    for a in 0..n {
        for b in a + 1..n {
            let common: Vec<VertexId> = adj.lists[a].iter().copied().filter(|&x| x != b && adj.has(b, x)).collect();
            if common.len() >= q {
                let mut map = vec![a, b];
                map.extend(common.into_iter().take(q));
                return witness(CaseTag::H2k, map);
            }
        }
    }
    None
}

fn independent_subset(
    adj: &Adj,
    pool: &[VertexId],
    want: usize,
    steps: &mut usize,
    max_steps: usize,
) -> Option<Vec<VertexId>> {
    fn rec(
        adj: &Adj,
        pool: &[VertexId],
        start: usize,
        want: usize,
        cur: &mut Vec<VertexId>,
        steps: &mut usize,
        max_steps: usize,
    ) -> bool {
        if cur.len() == want {
            return true;
        }
        for i in start..pool.len() {
            *steps += 1;
            if *steps > max_steps || pool.len() - i < want - cur.len() {
                return false;
            }
            let x = pool[i];
            if cur.iter().all(|&y| !adj.has(x, y)) {
                cur.push(x);
                if rec(adj, pool, i + 1, want, cur, steps, max_steps) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::with_capacity(want);
    rec(adj, pool, 0, want, &mut cur, steps, max_steps).then_some(cur)
}

fn induced_matching(adj: &Adj, want: usize, steps: &mut usize, max_steps: usize) -> Option<Vec<(VertexId, VertexId)>> {
    fn compatible(adj: &Adj, e: (VertexId, VertexId), f: (VertexId, VertexId)) -> bool {
        [e.0, e.1].iter().all(|&x| [f.0, f.1].iter().all(|&y| x != y && !adj.has(x, y)))
    }
    fn rec(
        adj: &Adj,
        start: usize,
        want: usize,
        cur: &mut Vec<(VertexId, VertexId)>,
        steps: &mut usize,
        max_steps: usize,
    ) -> bool {
        if cur.len() == want {
            return true;
        }
        for i in start..adj.pairs.len() {
            *steps += 1;
            if *steps > max_steps {
                return false;
            }
            let e = adj.pairs[i];
            if cur.iter().all(|&f| compatible(adj, e, f)) {
                cur.push(e);
                if rec(adj, i + 1, want, cur, steps, max_steps) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::with_capacity(want);
    rec(adj, 0, want, &mut cur, steps, max_steps).then_some(cur)
}

/// Relabels a demand graph through a vertex permutation.
pub fn relabel(h: &DemandGraph, perm: &[VertexId]) -> Result<DemandGraph> {
    DemandGraph::new(h.pairs().iter().map(|&(a, b)| (perm[a], perm[b])))
}
