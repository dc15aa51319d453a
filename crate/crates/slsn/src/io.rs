//! File formats: instances (text and JSON), solutions, MCC inputs and bare
//! demand graphs.
//!
//! The text instance format is
//!
//! ```text
//! slsn 1
//! n m p
//! L
//! u v length cost      (m lines)
//! s t                  (p lines)
//! ```
//!
//! Lines starting with `#` are comments. Two comment directives carry extra
//! data: `#! label <v> <text>` names a vertex and `#! gadget <json>` records
//! the recipe a gadget instance was built from.

use crate::error::{input, Result, SlsnError};
use crate::gadgets::{GadgetRecipe, MccInstance};
use crate::graph::{DemandGraph, EdgeId, Path, SlsnInstance, Solution, VertexId, WeightedGraph};
use crate::rational::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// An instance together with the optional gadget recipe stored beside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: SlsnInstance,
    pub gadget: Option<GadgetRecipe>,
}

impl InstanceFile {
    pub fn plain(instance: SlsnInstance) -> Self {
        InstanceFile { instance, gadget: None }
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(SlsnError::Parse { line, msg: msg.into() })
}

/// Non-comment lines with their 1-based line numbers, plus directives.
struct Lines<'a> {
    body: Vec<(usize, &'a str)>,
    directives: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut body = Vec::new();
        let mut directives = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(d) = line.strip_prefix("#!") {
                directives.push((i + 1, d.trim()));
            } else if !line.is_empty() && !line.starts_with('#') {
                body.push((i + 1, line));
            }
        }
        Lines { body, directives, pos: 0 }
    }

    fn last_line(&self) -> usize {
        self.body.last().map_or(1, |l| l.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.body.get(self.pos) {
            Some(&(no, line)) => {
                self.pos += 1;
                Ok((no, line.split_whitespace().collect()))
            }
            None => parse_err(self.last_line(), format!("unexpected end of input, expected {what}")),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.body.get(self.pos) {
            Some(&(no, _)) => parse_err(no, "trailing content"),
            None => Ok(()),
        }
    }

    fn header(&mut self, magic: &str) -> Result<()> {
        let (no, f) = self.next("header")?;
        if f.len() != 2 || f[0] != magic {
            return parse_err(no, format!("expected header `{magic} 1`"));
        }
        if f[1] != "1" {
            return parse_err(no, format!("unsupported version {}", f[1]));
        }
        Ok(())
    }
}

fn fields<const N: usize>(no: usize, f: &[&str], what: &str) -> Result<[usize; N]> {
    if f.len() != N {
        return parse_err(no, format!("expected {N} fields for {what}, found {}", f.len()));
    }
    let mut out = [0; N];
    for (o, s) in out.iter_mut().zip(f) {
        *o = s
            .parse()
            .map_err(|_| SlsnError::Parse { line: no, msg: format!("bad integer `{s}`") })?;
    }
    Ok(out)
}

fn rational_field(no: usize, s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| SlsnError::Parse { line: no, msg: format!("bad rational `{s}`") })
}

fn at_line<T>(no: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        SlsnError::Input(msg) | SlsnError::Contract(msg) => SlsnError::Parse { line: no, msg },
        other => other,
    })
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    if text.trim_start().starts_with('{') {
        return parse_instance_json(text);
    }
    let mut lines = Lines::new(text);
    lines.header("slsn")?;
    let (no, f) = lines.next("`n m p`")?;
    let [n, m, p] = fields::<3>(no, &f, "`n m p`")?;
    let (no, f) = lines.next("the length bound")?;
    if f.len() != 1 {
        return parse_err(no, "expected a single length bound");
    }
    let bound = rational_field(no, f[0])?;
    let mut g = WeightedGraph::new(n);
    for _ in 0..m {
        let (no, f) = lines.next("an edge line")?;
        if f.len() != 4 {
            return parse_err(no, "expected `u v length cost`");
        }
        let [u, v] = fields::<2>(no, &f[..2], "edge endpoints")?;
        let (len, cost) = (rational_field(no, f[2])?, rational_field(no, f[3])?);
        at_line(no, g.add_edge(u, v, len, cost))?;
    }
    let mut pairs = Vec::with_capacity(p);
    for _ in 0..p {
        let (no, f) = lines.next("a demand line")?;
        let [s, t] = fields::<2>(no, &f, "a demand")?;
        if s >= n || t >= n {
            return parse_err(no, format!("demand ({s},{t}) out of range"));
        }
        pairs.push((s, t));
    }
    lines.finish()?;
    let mut gadget = None;
    for &(no, d) in &lines.directives {
        let (key, rest) = d.split_once(char::is_whitespace).unwrap_or((d, ""));
        match key {
            "label" => {
                let (v, label) = rest.trim().split_once(char::is_whitespace).unwrap_or((rest.trim(), ""));
                let [v] = fields::<1>(no, &[v], "a label vertex")?;
                if v >= n || label.trim().is_empty() {
                    return parse_err(no, "bad label directive");
                }
                g.set_label(v, label.trim());
            }
            "gadget" => {
                let recipe: GadgetRecipe = serde_json::from_str(rest)
                    .map_err(|e| SlsnError::Parse { line: no, msg: format!("bad gadget recipe: {e}") })?;
                gadget = Some(recipe);
            }
            _ => return parse_err(no, format!("unknown directive `{key}`")),
        }
    }
    let demands = at_line(lines.last_line(), DemandGraph::new(pairs))?;
    let instance = at_line(1, SlsnInstance::new(g, bound, demands))?;
    Ok(InstanceFile { instance, gadget })
}

pub fn instance_text(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = String::from("slsn 1\n");
    if let Some(recipe) = &file.gadget {
        let json = serde_json::to_string(recipe).expect("recipes serialize");
        let _ = writeln!(out, "#! gadget {json}");
    }
    for (v, label) in inst.graph.labels().iter().enumerate() {
        if let Some(l) = label {
            let _ = writeln!(out, "#! label {v} {l}");
        }
    }
    let _ = writeln!(out, "{} {} {}", inst.n(), inst.m(), inst.p());
    let _ = writeln!(out, "{}", format_rational(&inst.bound));
    for e in inst.graph.edges() {
        let _ = writeln!(out, "{} {} {} {}", e.u, e.v, format_rational(&e.length), format_rational(&e.cost));
    }
    for &(s, t) in inst.demands.pairs() {
        let _ = writeln!(out, "{s} {t}");
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    u: VertexId,
    v: VertexId,
    #[serde(with = "crate::rational")]
    len: Rational,
    #[serde(with = "crate::rational")]
    cost: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInstance {
    version: u32,
    n: usize,
    #[serde(rename = "L", with = "crate::rational")]
    bound: Rational,
    edges: Vec<JsonEdge>,
    demands: Vec<(VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<(VertexId, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gadget: Option<GadgetRecipe>,
}

fn parse_instance_json(text: &str) -> Result<InstanceFile> {
    let j: JsonInstance = serde_json::from_str(text)?;
    if j.version != 1 {
        return input(format!("unsupported version {}", j.version));
    }
    let mut g = WeightedGraph::new(j.n);
    for e in j.edges {
        g.add_edge(e.u, e.v, e.len, e.cost)?;
    }
    for (v, l) in j.labels {
        if v >= j.n {
            return input(format!("label for missing vertex {v}"));
        }
        g.set_label(v, l);
    }
    let instance = SlsnInstance::new(g, j.bound, DemandGraph::new(j.demands)?)?;
    Ok(InstanceFile { instance, gadget: j.gadget })
}

pub fn instance_json(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let j = JsonInstance {
        version: 1,
        n: inst.n(),
        bound: inst.bound.clone(),
        edges: inst
            .graph
            .edges()
            .iter()
            .map(|e| JsonEdge { u: e.u, v: e.v, len: e.length.clone(), cost: e.cost.clone() })
            .collect(),
        demands: inst.demands.pairs().to_vec(),
        labels: inst
            .graph
            .labels()
            .iter()
            .enumerate()
            .filter_map(|(v, l)| l.clone().map(|l| (v, l)))
            .collect(),
        gadget: file.gadget.clone(),
    };
    serde_json::to_string_pretty(&j).expect("instances serialize") + "\n"
}

/// JSON shape of a solution. `paths` lists vertex sequences; `path_edges`
/// pins the edge used for each hop when parallel edges exist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    #[serde(with = "crate::rational")]
    pub cost: Rational,
    pub edges: Vec<EdgeId>,
    pub paths: Vec<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_edges: Option<Vec<Vec<EdgeId>>>,
}

impl From<&Solution> for SolutionJson {
    fn from(s: &Solution) -> Self {
        SolutionJson {
            cost: s.cost.clone(),
            edges: s.edges.clone(),
            paths: s.paths.iter().map(|p| p.vertices.clone()).collect(),
            path_edges: Some(s.paths.iter().map(|p| p.edges.clone()).collect()),
        }
    }
}

pub fn solution_json(s: &Solution) -> String {
    serde_json::to_string_pretty(&SolutionJson::from(s)).expect("solutions serialize") + "\n"
}

/// Reads a solution against its instance. Missing hop edges are resolved to
/// the shortest solution edge joining the two vertices. The recorded cost is
/// kept as written so tampering stays visible to `Solution::check`.
pub fn parse_solution(text: &str, inst: &SlsnInstance) -> Result<Solution> {
    let j: SolutionJson = serde_json::from_str(text)?;
    solution_from_json(j, inst)
}

pub fn solution_from_json(j: SolutionJson, inst: &SlsnInstance) -> Result<Solution> {
    if let Some(&e) = j.edges.iter().find(|&&e| e >= inst.m()) {
        return input(format!("solution edge {e} out of range"));
    }
    let chosen: BTreeSet<EdgeId> = j.edges.iter().copied().collect();
    let mut paths = Vec::with_capacity(j.paths.len());
    for (i, vertices) in j.paths.into_iter().enumerate() {
        if vertices.is_empty() {
            return input(format!("path {i} is empty"));
        }
        let edges = match j.path_edges.as_ref().and_then(|pe| pe.get(i)) {
            Some(es) => es.clone(),
            None => vertices
                .windows(2)
                .map(|w| hop_edge(&inst.graph, &chosen, w[0], w[1]))
                .collect::<Result<_>>()?,
        };
        let path = Path { vertices, edges };
        path.validate(&inst.graph).map_err(|e| SlsnError::Input(format!("path {i}: {e}")))?;
        paths.push(path);
    }
    Ok(Solution { edges: j.edges, paths, cost: j.cost })
}

fn hop_edge(g: &WeightedGraph, chosen: &BTreeSet<EdgeId>, a: VertexId, b: VertexId) -> Result<EdgeId> {
    if a >= g.vertex_count() || b >= g.vertex_count() {
        return input(format!("path vertex out of range in hop {a}-{b}"));
    }
    g.neighbors(a)
        .iter()
        .filter(|&&(w, e)| w == b && chosen.contains(&e))
        .min_by(|x, y| g.edge(x.1).length.cmp(&g.edge(y.1).length).then(x.1.cmp(&y.1)))
        .map(|&(_, e)| e)
        .ok_or_else(|| SlsnError::Input(format!("no solution edge joins {a} and {b}")))
}

/// `mcc 1`, then `n m k`, m lines `u v`, n lines `v color`.
pub fn parse_mcc(text: &str) -> Result<MccInstance> {
    let mut lines = Lines::new(text);
    lines.header("mcc")?;
    let (no, f) = lines.next("`n m k`")?;
    let [n, m, k] = fields::<3>(no, &f, "`n m k`")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, f) = lines.next("an edge line")?;
        let [u, v] = fields::<2>(no, &f, "an edge")?;
        edges.push((u, v));
    }
    let mut coloring = vec![None; n];
    for _ in 0..n {
        let (no, f) = lines.next("a coloring line")?;
        let [v, c] = fields::<2>(no, &f, "a coloring")?;
        if v >= n {
            return parse_err(no, format!("vertex {v} out of range"));
        }
        if coloring[v].replace(c).is_some() {
            return parse_err(no, format!("vertex {v} colored twice"));
        }
    }
    lines.finish()?;
    let coloring: Vec<usize> = coloring.into_iter().map(|c| c.expect("n distinct lines")).collect();
    at_line(1, MccInstance::new(k, coloring, edges))
}

pub fn mcc_text(mcc: &MccInstance) -> String {
    let mut out = String::from("mcc 1\n");
    let _ = writeln!(out, "{} {} {}", mcc.n(), mcc.edges().len(), mcc.k());
    for &(u, v) in mcc.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for v in 0..mcc.n() {
        let _ = writeln!(out, "{v} {}", mcc.color(v));
    }
    out
}

/// One `s t` pair per line; `#` comments allowed.
pub fn parse_demand_graph(text: &str) -> Result<DemandGraph> {
    let lines = Lines::new(text);
    let mut pairs = Vec::with_capacity(lines.body.len());
    for &(no, line) in &lines.body {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [s, t] = fields::<2>(no, &f, "a demand")?;
        pairs.push((s, t));
    }
    at_line(lines.last_line(), DemandGraph::new(pairs))
}

pub fn demand_graph_text(h: &DemandGraph) -> String {
    h.pairs().iter().map(|(s, t)| format!("{s} {t}\n")).collect()
}

/// Parses a clique given as comma or whitespace separated vertex ids.
pub fn parse_vertex_list(s: &str) -> Result<Vec<VertexId>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| SlsnError::Input(format!("bad vertex id `{t}`"))))
        .collect()
}
