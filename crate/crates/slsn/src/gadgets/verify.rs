use super::{f_iter, EdgeFamily, GadgetBundle, Role};
use crate::classifier::CaseTag;
use crate::graph::{EdgeId, Path, Solution, VertexId};
use crate::rational::int;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub name: String,
    pub passed: bool,
    /// One line per offending demand.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn check(&self, name: &str) -> Option<&StructureCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &str, failures: Vec<String>) {
        self.checks.push(StructureCheck {
            name: name.to_string(),
            passed: failures.is_empty(),
            failures,
        });
    }
}

/// A path read back as whole skeleton edges.
struct Route {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Route {
    fn reversed(mut self) -> Route {
        self.vertices.reverse();
        self.edges.reverse();
        self
    }
}

fn skeleton_route(b: &GadgetBundle, p: &Path) -> Option<Route> {
    let mut out = Route {
        vertices: vec![p.start()],
        edges: Vec::new(),
    };
    let mut i = 0;
    while i < p.edges.len() {
        let e = *b.origin.get(p.edges[i])?;
        let len = b.edge_map[e].len();
        if i + len > p.edges.len() || p.edges[i..i + len].iter().any(|&h| b.origin[h] != e) {
            return None;
        }
        i += len;
        out.edges.push(e);
        out.vertices.push(p.vertices[i]);
    }
    out.vertices.iter().all(|&v| v < b.roles.len()).then_some(out)
}

fn roles(b: &GadgetBundle, r: &Route) -> Vec<Role> {
    r.vertices.iter().map(|&v| b.roles[v]).collect()
}

fn families(b: &GadgetBundle, r: &Route) -> Vec<EdgeFamily> {
    r.edges.iter().map(|&e| b.families[e]).collect()
}

fn describe(rs: &[Role]) -> String {
    rs.iter().map(Role::label).collect::<Vec<_>>().join(" - ")
}

/// `z_e` joins a vertex of color `i` in `x_{u,·}` and some vertex of color `j`.
fn edge_fits(b: &GadgetBundle, ze: Role, u: usize, i: usize, j: usize) -> bool {
    let mcc = &b.recipe.mcc;
    match ze {
        Role::ZEdge(a, c) if a == u || c == u => {
            let w = if a == u { c } else { a };
            mcc.color(u) == i && mcc.color(w) == j
        }
        _ => false,
    }
}

fn leaf_form_ok(b: &GadgetBundle, rs: &[Role], fs: &[EdgeFamily]) -> bool {
    use EdgeFamily::*;
    let (rs, fs) = match rs.first() {
        Some(Role::LeafPrime(..)) => {
            if fs.first() != Some(&E0) {
                return false;
            }
            (&rs[1..], &fs[1..])
        }
        _ => (rs, fs),
    };
    if fs != [E1, E2, E3, E4, E5] {
        return false;
    }
    match (rs[0], rs[1], rs[2], rs[3], rs[4], rs[5]) {
        (Role::Root, Role::Z(a, c), ze, Role::X(u, j), Role::XPrime(u2, j2), Role::Leaf(i, j3)) => {
            (a, c) == (i.min(j), i.max(j)) && u == u2 && j == j2 && j == j3 && edge_fits(b, ze, u, i, j)
        }
        _ => false,
    }
}

/// Expected zig-zag role sequence from `y_{i-1}` to `y_i` through `v`.
fn zigzag_segment(k: usize, i: usize, v: usize) -> Vec<Role> {
    let mut out = vec![Role::Y(i - 1)];
    for t in 1..k {
        let j = f_iter(i, t, 0);
        out.push(Role::X(v, j));
        out.push(Role::XPrime(v, j));
    }
    out.push(Role::Y(i));
    out
}

/// Checks a candidate solution of a gadget against the path shapes that
/// every cheap solution must have.
pub fn verify_structure(b: &GadgetBundle, s: &Solution) -> StructureReport {
    let mut report = StructureReport::default();
    let g = &b.instance.graph;
    let k = b.k;
    let mut basic = Vec::new();
    if let Err(e) = s.check(&b.instance) {
        basic.push(e.to_string());
    }
    report.record("witness_paths", basic);
    if s.paths.len() != b.instance.p() {
        return report;
    }

    let mut routes = Vec::new();
    let mut broken = Vec::new();
    for (p, &(x, y)) in s.paths.iter().zip(b.instance.demands.pairs()) {
        match skeleton_route(b, p) {
            Some(r) => routes.push(Some(r)),
            None => {
                broken.push(format!("{} - {}", g.display_label(x), g.display_label(y)));
                routes.push(None);
            }
        }
    }
    report.record("skeleton_routes", broken);

    let zigzag = b.case_tag() != CaseTag::H2k;
    let mut form = (Vec::new(), Vec::new());
    let mut lengths = Vec::new();
    let (mut exclusion, mut zig, mut short) = (Vec::new(), Vec::new(), Vec::new());
    let mut leaf_pairs = Vec::new();
    let mut extra = Vec::new();
    let layer_length = if zigzag { int(4 * (k * k) as i64) } else { int(7) };

    for (idx, r) in routes.into_iter().enumerate() {
        let Some(r) = r else { continue };
        let path = &s.paths[idx];
        let len = path.length(g);
        let (ra, rb) = (b.roles[r.vertices[0]], b.roles[*r.vertices.last().unwrap()]);
        let fam = families(b, &r);
        if matches!(ra, Role::Extra(_)) || matches!(rb, Role::Extra(_)) || fam.contains(&EdgeFamily::Extra) {
            if fam != [EdgeFamily::Extra] {
                extra.push(describe(&roles(b, &r)));
            }
            continue;
        }
        // orient from the root side
        let rank = |x: Role| match x {
            Role::Root | Role::Root1 | Role::LeafPrime(..) => 0,
            Role::Root2 | Role::Y(0) => 1,
            _ => 2,
        };
        let r = if rank(rb) < rank(ra) {
            r.reversed()
        } else {
            r
        };
        let rs = roles(b, &r);
        let fs = families(b, &r);
        let (first, last) = (rs[0], rs[rs.len() - 1]);
        match (first, last) {
            (Role::Root | Role::LeafPrime(..), Role::Leaf(..)) if zigzag => {
                if !leaf_form_ok(b, &rs, &fs) {
                    form.0.push(describe(&rs));
                }
                if len != layer_length {
                    lengths.push(format!("{}: length {}", describe(&rs), len));
                }
            }
            (Role::Y(0), Role::Y(_)) if zigzag => {
                use EdgeFamily::*;
                if fs.iter().any(|f| matches!(f, E0 | E1 | E2 | E3 | E5)) {
                    exclusion.push(describe(&rs));
                }
                let ys: Vec<usize> = rs.iter().enumerate().filter(|(_, r)| matches!(r, Role::Y(_))).map(|(p, _)| p).collect();
                let mut ok = ys.len() == k + 1;
                for (seg, w) in ys.windows(2).enumerate() {
                    if !ok {
                        break;
                    }
                    let i = seg + 1;
                    let part = &rs[w[0]..=w[1]];
                    let v = match part.get(1) {
                        Some(Role::X(v, _)) => *v,
                        _ => usize::MAX,
                    };
                    ok = v != usize::MAX
                        && b.recipe.mcc.color(v) == i
                        && part == zigzag_segment(k, i, v).as_slice()
                        && segment_length(b, &r, w[0], w[1]) == int(4 * k as i64);
                }
                if !ok {
                    zig.push(describe(&rs));
                }
            }
            (Role::Root, Role::Y(_)) | (Role::Root1, Role::Root2) => {
                if len > b.instance.bound {
                    short.push(format!("{}: length {}", describe(&rs), len));
                }
            }
            (Role::Root1 | Role::Root2, Role::Leaf(i, j)) if !zigzag => {
                let fits = match (first, fs.as_slice(), rs.as_slice()) {
                    (Role::Root1, [EdgeFamily::E11, EdgeFamily::E12, EdgeFamily::E13, EdgeFamily::Exl], [_, Role::Z(a, c), ze, Role::X(u, j2), _]) => {
                        (*a, *c) == (i.min(j), i.max(j)) && *j2 == j && edge_fits(b, *ze, *u, i, j)
                    }
                    (Role::Root2, [EdgeFamily::E21, EdgeFamily::E22, EdgeFamily::E23, EdgeFamily::Exl], [_, Role::Y(i2), Role::YVertex(v), Role::X(v2, j2), _]) => {
                        *i2 == i && v == v2 && *j2 == j && b.recipe.mcc.color(*v) == i
                    }
                    _ => false,
                };
                let target = if first == Role::Root1 { &mut form.0 } else { &mut form.1 };
                if !fits {
                    target.push(describe(&rs));
                }
                if len != layer_length {
                    lengths.push(format!("{}: length {}", describe(&rs), len));
                }
            }
            (Role::Leaf(..), Role::Leaf(..)) if !zigzag => {
                if fs != [EdgeFamily::Ell] {
                    leaf_pairs.push(describe(&rs));
                }
            }
            _ => form.0.push(format!("unexpected demand {}", describe(&rs))),
        }
    }
    if zigzag {
        report.record("leaf_path_form", form.0);
        report.record("leaf_path_length", lengths);
        report.record("y_path_exclusion", exclusion);
        report.record("y_path_zigzag", zig);
        report.record("root_y_paths", short);
    } else {
        report.record("root1_path_form", form.0);
        report.record("root2_path_form", form.1);
        report.record("layer_path_length", lengths);
        report.record("leaf_pair_paths", leaf_pairs);
        report.record("root_pair_path", short);
    }
    report.record("extra_paths", extra);
    report
}

fn segment_length(b: &GadgetBundle, r: &Route, from: usize, to: usize) -> crate::Rational {
    r.edges[from..to].iter().map(|&e| &b.skeleton.edge(e).length).sum()
}
