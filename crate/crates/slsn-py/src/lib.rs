//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! anything whose `str()` parses as an integer, decimal or `num/den` is
//! accepted on the way in.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use slsn::classifier::DemandClass;
use slsn::exact_const::ExactOptions;
use slsn::gadgets::{CostFlavor, GadgetBundle, GadgetKind, GadgetRecipe, MccInstance};
use slsn::io::{self, InstanceFile};
use slsn::oracle::OracleBudget;
use slsn::rational::{format_rational, parse_rational};
use slsn::{DemandGraph, Rational, SlsnError, SlsnInstance, VertexId, WeightedGraph};

create_exception!(slsn_py, InfeasibleError, PyException, "The full graph cannot satisfy every demand.");

fn err(e: SlsnError) -> PyErr {
    match e {
        SlsnError::Infeasible => InfeasibleError::new_err(e.to_string()),
        SlsnError::Budget(_) | SlsnError::Overflow(_) | SlsnError::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?;
    let s = s.to_str()?;
    parse_rational(s).ok_or_else(|| PyValueError::new_err(format!("`{s}` is not a rational")))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(r),))
}

/// `(u, v, length, cost)` with `Fraction` weights.
type EdgeTuple<'py> = (VertexId, VertexId, Bound<'py, PyAny>, Bound<'py, PyAny>);

#[pyclass(name = "Instance", module = "slsn_py", frozen)]
pub struct PyInstance {
    inner: InstanceFile,
}

#[pymethods]
impl PyInstance {
    /// `edges` holds `(u, v, length, cost)` tuples.
    #[new]
    fn new(
        n: usize,
        edges: Vec<(VertexId, VertexId, Bound<'_, PyAny>, Bound<'_, PyAny>)>,
        bound: Bound<'_, PyAny>,
        demands: Vec<(VertexId, VertexId)>,
    ) -> PyResult<Self> {
        let mut g = WeightedGraph::new(n);
        for (u, v, len, cost) in &edges {
            g.add_edge(*u, *v, rational(len)?, rational(cost)?).map_err(err)?;
        }
        let demands = DemandGraph::new(demands).map_err(err)?;
        let inst = SlsnInstance::new(g, rational(&bound)?, demands).map_err(err)?;
        Ok(PyInstance { inner: InstanceFile::plain(inst) })
    }

    /// Parses the text format or its JSON mirror.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyInstance { inner: io::parse_instance(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        io::instance_text(&self.inner)
    }

    fn to_json(&self) -> String {
        io::instance_json(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.instance.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.instance.m()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.instance.p()
    }

    #[getter]
    fn bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.instance.bound)
    }

    #[getter]
    fn demands(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.instance.demands.pairs().to_vec()
    }

    fn edges<'py>(&self, py: Python<'py>) -> PyResult<Vec<EdgeTuple<'py>>> {
        self.inner
            .instance
            .graph
            .edges()
            .iter()
            .map(|e| Ok((e.u, e.v, fraction(py, &e.length)?, fraction(py, &e.cost)?)))
            .collect()
    }

    fn label(&self, v: VertexId) -> Option<String> {
        self.inner.instance.graph.label(v).map(str::to_string)
    }

    fn __repr__(&self) -> String {
        let i = &self.inner.instance;
        format!("Instance(n={}, m={}, p={}, L={})", i.n(), i.m(), i.p(), format_rational(&i.bound))
    }
}

#[pyclass(name = "Solution", module = "slsn_py", frozen)]
pub struct PySolution {
    inner: slsn::Solution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn cost<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.cost)
    }

    #[getter]
    fn edges(&self) -> Vec<usize> {
        self.inner.edges.clone()
    }

    /// Vertex sequence of the witness path of each demand.
    #[getter]
    fn paths(&self) -> Vec<Vec<VertexId>> {
        self.inner.paths.iter().map(|p| p.vertices.clone()).collect()
    }

    fn to_json(&self) -> String {
        io::solution_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Solution(cost={}, edges={:?})", format_rational(&self.inner.cost), self.inner.edges)
    }
}

fn wrap(s: slsn::Result<slsn::Solution>) -> PyResult<PySolution> {
    Ok(PySolution { inner: s.map_err(err)? })
}

/// Reads a solution JSON against an instance.
#[pyfunction]
fn parse_solution(text: &str, instance: &PyInstance) -> PyResult<PySolution> {
    wrap(io::parse_solution(text, &instance.inner.instance))
}

#[pyfunction]
#[pyo3(signature = (instance, jobs = 1))]
fn solve_unit_length(py: Python<'_>, instance: &PyInstance, jobs: usize) -> PyResult<PySolution> {
    let inst = &instance.inner.instance;
    wrap(py.detach(|| slsn::exact_const::solve_unit_length(inst, ExactOptions { jobs })))
}

#[pyfunction]
#[pyo3(signature = (instance, jobs = 1))]
fn solve_unit_cost(py: Python<'_>, instance: &PyInstance, jobs: usize) -> PyResult<PySolution> {
    let inst = &instance.inner.instance;
    wrap(py.detach(|| slsn::exact_const::solve_unit_cost(inst, ExactOptions { jobs })))
}

#[pyfunction]
fn solve_slst(py: Python<'_>, instance: &PyInstance) -> PyResult<PySolution> {
    let inst = &instance.inner.instance;
    wrap(py.detach(|| slsn::star_dst::solve_slst(inst)))
}

#[pyfunction]
#[pyo3(signature = (instance, eps, jobs = 1))]
fn approx_const(py: Python<'_>, instance: &PyInstance, eps: Bound<'_, PyAny>, jobs: usize) -> PyResult<PySolution> {
    let eps = rational(&eps)?;
    let inst = &instance.inner.instance;
    wrap(py.detach(|| slsn::approx::approx_const(inst, &eps, jobs)))
}

#[pyfunction]
fn approx_star(py: Python<'_>, instance: &PyInstance, eps: Bound<'_, PyAny>) -> PyResult<PySolution> {
    let eps = rational(&eps)?;
    let inst = &instance.inner.instance;
    wrap(py.detach(|| slsn::approx::approx_star(inst, &eps)))
}

/// Exhaustive optimum; refuses more than `max_edges` edges.
#[pyfunction]
#[pyo3(signature = (instance, max_edges = 20, jobs = 1))]
fn brute_force_slsn(py: Python<'_>, instance: &PyInstance, max_edges: usize, jobs: usize) -> PyResult<PySolution> {
    let inst = &instance.inner.instance;
    let budget = OracleBudget { max_edges, ..OracleBudget::default() };
    wrap(py.detach(|| slsn::oracle::brute_force_slsn(inst, budget, jobs)))
}

/// `C` with `C ≤ OPT ≤ n²·C`.
#[pyfunction]
fn opt_low<'py>(py: Python<'py>, instance: &PyInstance) -> PyResult<Bound<'py, PyAny>> {
    let b = slsn::approx::opt_low(&instance.inner.instance).map_err(err)?;
    fraction(py, &b.c)
}

/// Per demand, the shortest length inside the edge subset (`None` when
/// disconnected), and whether every demand is within the bound.
#[pyfunction]
fn feasibility_check<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    edges: Vec<usize>,
) -> PyResult<(bool, Vec<Option<Bound<'py, PyAny>>>)> {
    let r = slsn::graph::feasibility_check(&instance.inner.instance, &edges).map_err(err)?;
    let lengths = r
        .demands
        .iter()
        .map(|d| d.shortest.as_ref().map(|s| fraction(py, s)).transpose())
        .collect::<PyResult<_>>()?;
    Ok((r.feasible(), lengths))
}

#[pyclass(name = "DemandClass", module = "slsn_py", frozen, get_all)]
pub struct PyDemandClass {
    /// `"star"`, `"bounded"` or `"hard"`.
    kind: String,
    root: Option<VertexId>,
    p: Option<usize>,
    case_tag: Option<String>,
    vertex_map: Option<Vec<VertexId>>,
    text: String,
}

#[pymethods]
impl PyDemandClass {
    fn __repr__(&self) -> String {
        self.text.clone()
    }
}

#[pyfunction]
#[pyo3(signature = (demands, k = 2))]
fn classify(py: Python<'_>, demands: Vec<(VertexId, VertexId)>, k: usize) -> PyResult<PyDemandClass> {
    let h = DemandGraph::new(demands).map_err(err)?;
    let class = py.detach(|| slsn::classifier::classify(&h, k)).map_err(err)?;
    let mut out = PyDemandClass {
        kind: String::new(),
        root: None,
        p: None,
        case_tag: None,
        vertex_map: None,
        text: class.to_string(),
    };
    match class {
        DemandClass::Star { root } => {
            out.kind = "star".into();
            out.root = Some(root);
        }
        DemandClass::Bounded { p } => {
            out.kind = "bounded".into();
            out.p = Some(p);
        }
        DemandClass::Hard { witness } => {
            out.kind = "hard".into();
            out.case_tag = Some(witness.case_tag.name().into());
            out.vertex_map = Some(witness.vertex_map);
        }
    }
    Ok(out)
}

#[pyclass(name = "Mcc", module = "slsn_py", frozen)]
pub struct PyMcc {
    inner: MccInstance,
}

#[pymethods]
impl PyMcc {
    /// `coloring[v]` is the color of `v`, in `1..=k`.
    #[new]
    fn new(k: usize, coloring: Vec<usize>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyMcc { inner: MccInstance::new(k, coloring, edges).map_err(err)? })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMcc { inner: io::parse_mcc(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        io::mcc_text(&self.inner)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn is_multicolored_clique(&self, vertices: Vec<usize>) -> bool {
        self.inner.is_multicolored_clique(&vertices)
    }

    fn find_clique(&self) -> PyResult<Option<Vec<usize>>> {
        slsn::oracle::brute_force_mcc(&self.inner, OracleBudget::default()).map_err(err)
    }
}

#[pyclass(name = "Gadget", module = "slsn_py", frozen)]
pub struct PyGadget {
    inner: GadgetBundle,
}

#[pymethods]
impl PyGadget {
    #[getter]
    fn instance(&self) -> PyInstance {
        PyInstance {
            inner: InstanceFile { instance: self.inner.instance.clone(), gadget: Some(self.inner.recipe.clone()) },
        }
    }

    #[getter]
    fn g_value<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.g_value)
    }

    #[getter]
    fn case_tag(&self) -> &'static str {
        self.inner.case_tag().name()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn demand_graph(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.demand_graph.pairs().to_vec()
    }

    /// Solution built from a multicolored clique, one vertex per color.
    fn witness(&self, clique: Vec<usize>) -> PyResult<PySolution> {
        wrap(slsn::gadgets::witness_solution(&self.inner, &clique))
    }

    /// `(check name, passed, failures)` for each structural check.
    fn verify_structure(&self, solution: &PySolution) -> Vec<(String, bool, Vec<String>)> {
        slsn::gadgets::verify_structure(&self.inner, &solution.inner)
            .checks
            .into_iter()
            .map(|c| (c.name.to_string(), c.passed, c.failures))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Gadget(case={}, k={}, g={}, n={})",
            self.inner.case_tag(),
            self.inner.k,
            format_rational(&self.inner.g_value),
            self.inner.instance.n()
        )
    }
}

/// Builds a gadget. `case` is one of h0star, h1star, h2star, matching,
/// bipartite, general; passing `eps` selects polynomial costs.
#[pyfunction]
#[pyo3(signature = (case, mcc, demand_graph = None, side_map = None, eps = None))]
fn build_gadget(
    case: &str,
    mcc: &PyMcc,
    demand_graph: Option<Vec<(VertexId, VertexId)>>,
    side_map: Option<Vec<VertexId>>,
    eps: Option<Bound<'_, PyAny>>,
) -> PyResult<PyGadget> {
    let kind = GadgetKind::parse(case).ok_or_else(|| PyValueError::new_err(format!("unknown gadget case `{case}`")))?;
    let flavor = match eps {
        Some(e) => CostFlavor::PolyCost { eps: rational(&e)? },
        None => CostFlavor::UnitCost,
    };
    let recipe = GadgetRecipe { kind, mcc: mcc.inner.clone(), demand_graph, side_map, flavor };
    Ok(PyGadget { inner: slsn::gadgets::build_gadget(&recipe).map_err(err)? })
}

#[pymodule]
fn slsn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyDemandClass>()?;
    m.add_class::<PyMcc>()?;
    m.add_class::<PyGadget>()?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_function(wrap_pyfunction!(parse_solution, m)?)?;
    m.add_function(wrap_pyfunction!(solve_unit_length, m)?)?;
    m.add_function(wrap_pyfunction!(solve_unit_cost, m)?)?;
    m.add_function(wrap_pyfunction!(solve_slst, m)?)?;
    m.add_function(wrap_pyfunction!(approx_const, m)?)?;
    m.add_function(wrap_pyfunction!(approx_star, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_slsn, m)?)?;
    m.add_function(wrap_pyfunction!(opt_low, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_check, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(build_gadget, m)?)?;
    Ok(())
}
