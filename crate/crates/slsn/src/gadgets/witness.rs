use super::{f_iter, GadgetBundle, Role};
use crate::classifier::CaseTag;
use crate::error::{contract, Result};
use crate::graph::{Path, Solution};
use std::collections::BTreeSet;

/// Skeleton route for one demand, given the clique `v[i - 1] ∈ C_i`.
fn route(b: &GadgetBundle, v: &[usize], a: Role, c: Role) -> Option<Vec<Role>> {
    let k = b.k;
    let ze = |i: usize, j: usize| {
        let (p, q) = (v[i - 1], v[j - 1]);
        Role::ZEdge(p.min(q), p.max(q))
    };
    let z = |i: usize, j: usize| Role::Z(i.min(j), i.max(j));
    let zigzag = b.case_tag() != CaseTag::H2k;
    match (a, c) {
        (Role::Root, Role::Leaf(i, j)) if zigzag => Some(vec![
            Role::Root,
            z(i, j),
            ze(i, j),
            Role::X(v[i - 1], j),
            Role::XPrime(v[i - 1], j),
            Role::Leaf(i, j),
        ]),
        (Role::LeafPrime(i, j), Role::Leaf(i2, j2)) if (i, j) == (i2, j2) => {
            let mut r = vec![Role::LeafPrime(i, j)];
            r.extend(route(b, v, Role::Root, Role::Leaf(i, j))?);
            Some(r)
        }
        (Role::Y(0), Role::Y(last)) if zigzag && last == k => {
            let mut r = vec![Role::Y(0)];
            for i in 1..=k {
                for t in 1..k {
                    let j = f_iter(i, t, 0);
                    r.push(Role::X(v[i - 1], j));
                    r.push(Role::XPrime(v[i - 1], j));
                }
                r.push(Role::Y(i));
            }
            Some(r)
        }
        (Role::Root, Role::Y(0)) if zigzag => {
            Some(vec![Role::Root, z(1, 2), ze(1, 2), Role::X(v[0], 2), Role::Y(0)])
        }
        (Role::Root, Role::Y(last)) if zigzag && last == k => Some(vec![
            Role::Root,
            z(k - 1, k),
            ze(k - 1, k),
            Role::X(v[k - 1], k - 1),
            Role::XPrime(v[k - 1], k - 1),
            Role::Y(k),
        ]),
        (Role::Root1, Role::Leaf(i, j)) => Some(vec![
            Role::Root1,
            z(i, j),
            ze(i, j),
            Role::X(v[i - 1], j),
            Role::Leaf(i, j),
        ]),
        (Role::Root2, Role::Leaf(i, j)) => Some(vec![
            Role::Root2,
            Role::Y(i),
            Role::YVertex(v[i - 1]),
            Role::X(v[i - 1], j),
            Role::Leaf(i, j),
        ]),
        (Role::Root1, Role::Root2) => Some(vec![
            Role::Root1,
            z(1, 2),
            ze(1, 2),
            Role::X(v[0], 2),
            Role::YVertex(v[0]),
            Role::Y(1),
            Role::Root2,
        ]),
        (Role::Leaf(..), Role::Leaf(..)) | (Role::Extra(_), _) | (_, Role::Extra(_)) => Some(vec![a, c]),
        _ => None,
    }
}

/// The witness solution of a yes-instance: one explicit route per demand,
/// and the union of their edges.
pub fn witness_solution(b: &GadgetBundle, clique: &[usize]) -> Result<Solution> {
    let mcc = &b.recipe.mcc;
    if !mcc.is_multicolored_clique(clique) {
        return contract("witness needs a multicolored clique with one vertex per color");
    }
    let v = mcc.by_color(clique).expect("checked above");
    let mut paths = Vec::with_capacity(b.instance.p());
    for &(s, t) in b.instance.demands.pairs() {
        let (rs, rt) = (b.roles[s], b.roles[t]);
        let roles = route(b, &v, rs, rt)
            .or_else(|| route(b, &v, rt, rs))
            .ok_or_else(|| crate::SlsnError::Contract(format!("no witness route for {} - {}", rs.label(), rt.label())))?;
        paths.push(b.route(&roles)?);
    }
    let edges: BTreeSet<_> = paths.iter().flat_map(|p: &Path| p.edges.iter().copied()).collect();
    let edges: Vec<_> = edges.into_iter().collect();
    let cost = b.instance.graph.cost_of(&edges);
    Ok(Solution { edges, paths, cost })
}
