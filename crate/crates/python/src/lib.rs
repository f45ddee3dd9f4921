//! Python bindings: graphs, minimum bases, the static frequency algorithm,
//! Push-Sum reports, scenarios and the computability matrix.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use anonet::fibration::minimum_base;
use anonet::functions::{nearest_in_qn, Help, TargetFunction};
use anonet::graph::io::{parse_graph, GraphDocument};
use anonet::graph::{DirectedMultigraph, DynamicGraph, Value};
use anonet::linalg::{balance_matrix, kernel_generator, Rational};
use anonet::pushsum::{run_scalar_exact, run_scalar_float};
use anonet::scenario::{generate_static, matrix_report, run_scenario, Family, Scenario};
use anonet::sim::{converged, run, Model, Network, RunOptions};
use anonet::staticfreq::{make_static_algorithm, Label};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json(v: &impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(v).map_err(err)
}

/// A directed multigraph; vertices are numbered from 0.
#[pyclass(name = "Graph", module = "anonet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: DirectedMultigraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: DirectedMultigraph::from_pairs(n, &edges).map_err(err)? })
    }

    /// Build from a generator spec such as `"ring:4:loops"` or `"random:5:7"`.
    #[staticmethod]
    fn generate(spec: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: generate_static(spec).map_err(err)? })
    }

    /// Parse the 1-based JSON document format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: parse_graph(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        to_json(&GraphDocument::from_graph(&self.inner))
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().map(|e| (e.source, e.target)).collect()
    }

    fn outdegree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.vertex_count() {
            return Err(err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.outdegree(v))
    }

    fn is_strongly_connected(&self) -> bool {
        self.inner.is_strongly_connected()
    }

    fn is_bidirectional(&self) -> bool {
        self.inner.is_bidirectional()
    }

    fn diameter(&self) -> Option<usize> {
        self.inner.diameter()
    }

    /// `(base, vertex_map)` of the minimum base, ignoring port labels.
    fn minimum_base(&self) -> PyResult<(PyGraph, Vec<usize>)> {
        let (base, fib) = minimum_base(&self.inner.clone().without_colors()).map_err(err)?;
        Ok((PyGraph { inner: base }, fib.vertex_map().to_vec()))
    }

    /// Primitive positive generator of the balance-matrix kernel, given one
    /// outdegree per vertex of this (base) graph.
    fn fibre_weights(&self, outdegrees: Vec<usize>) -> PyResult<Vec<BigInt>> {
        let m = balance_matrix(&self.inner, &outdegrees).map_err(err)?;
        kernel_generator(&m).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.vertex_count(), self.inner.edges().len())
    }
}

fn values(inputs: &Bound<'_, PyAny>) -> PyResult<Vec<Value>> {
    let mut out = Vec::new();
    for item in inputs.try_iter()? {
        out.push(Value::parse(&item?.str()?.to_cow()?));
    }
    Ok(out)
}

fn rationals(inputs: &Bound<'_, PyAny>) -> PyResult<Vec<Rational>> {
    let mut out = Vec::new();
    for item in inputs.try_iter()? {
        let s = item?.str()?.to_cow()?.into_owned();
        out.push(s.parse::<Rational>().map_err(|_| err(format!("{s:?} is not a rational")))?);
    }
    Ok(out)
}

/// Run the static frequency algorithm. Returns per-round outputs (None
/// before an agent has an answer) and the stabilization round, if any.
#[pyfunction]
#[pyo3(signature = (graph, model, function, inputs, help="none", leaders=Vec::new(), rounds=None))]
#[allow(clippy::type_complexity)]
fn static_compute(
    graph: &PyGraph,
    model: &str,
    function: &str,
    inputs: &Bound<'_, PyAny>,
    help: &str,
    leaders: Vec<usize>,
    rounds: Option<usize>,
) -> PyResult<(Vec<Vec<Option<String>>>, Option<usize>, String)> {
    let model: Model = model.parse().map_err(err)?;
    let f: TargetFunction = function.parse().map_err(err)?;
    let help: Help = help.parse().map_err(err)?;
    let vals = values(inputs)?;
    let labels: Vec<Label> = vals.iter().enumerate().map(|(i, v)| Label::new(v.clone(), leaders.contains(&i))).collect();
    let alg = make_static_algorithm(model, f.clone(), help, None).map_err(err)?;
    let n = graph.inner.vertex_count();
    let rounds = rounds.unwrap_or(2 * n + 2);
    let trace = run(&alg, model, &Network::fixed(graph.inner.clone()), &labels, RunOptions::default(), rounds).map_err(err)?;
    let expected = Some(f.evaluate(&vals).map_err(err)?);
    let at = converged(&trace.outputs, |o| *o == expected);
    let shown = trace.outputs.iter().map(|row| row.iter().map(|o| o.as_ref().map(|o| o.to_string())).collect()).collect();
    Ok((shown, at, expected.map(|e| e.to_string()).unwrap_or_default()))
}

/// Scalar Push-Sum on a static graph; returns the convergence report as JSON.
#[pyfunction]
#[pyo3(signature = (graph, inputs, weights=None, mode="exact", eps=1e-6, rounds=200))]
fn pushsum(
    graph: &PyGraph,
    inputs: &Bound<'_, PyAny>,
    weights: Option<&Bound<'_, PyAny>>,
    mode: &str,
    eps: f64,
    rounds: usize,
) -> PyResult<String> {
    let v = rationals(inputs)?;
    let w = match weights {
        Some(w) => rationals(w)?,
        None => vec![Rational::one(); v.len()],
    };
    if v.len() != w.len() {
        return Err(err("inputs and weights differ in length"));
    }
    let d = graph.inner.diameter().ok_or_else(|| err("graph is not strongly connected"))?.max(1);
    let g = DynamicGraph::constant(graph.inner.clone()).map_err(err)?;
    let initial: Vec<(Rational, Rational)> = v.into_iter().zip(w).collect();
    let report = match mode {
        "exact" => run_scalar_exact(&g, &initial, None, d, eps, rounds),
        "float" => run_scalar_float(&g, &initial, None, d, eps, rounds),
        other => return Err(err(format!("unknown mode {other:?}"))),
    }
    .map_err(err)?;
    to_json(&report)
}

/// Run a JSON scenario; returns the verdict report as JSON.
#[pyfunction]
fn scenario(text: &str) -> PyResult<String> {
    let s = Scenario::from_json(text).map_err(err)?;
    to_json(&run_scenario(&s).map_err(err)?)
}

/// The computability matrix (`"static"` or `"dynamic"`) as JSON.
#[pyfunction]
fn matrix(family: &str) -> PyResult<String> {
    let family: Family = family.parse().map_err(err)?;
    to_json(&matrix_report(family).map_err(err)?)
}

/// Nearest element of `Q_N` to `p/q`, as a `(numerator, denominator)` pair.
#[pyfunction]
fn nearest_fraction(p: i64, q: i64, n: usize) -> PyResult<(BigInt, BigInt)> {
    if q == 0 {
        return Err(err("zero denominator"));
    }
    let r = nearest_in_qn(&Rational::frac(p, q), n);
    Ok((r.numer().clone(), r.denom().clone()))
}

#[pyfunction]
fn convergence_bound(n: usize, d: usize, eps: f64) -> usize {
    anonet::pushsum::convergence_bound(n, d, eps)
}

#[pymodule]
#[pyo3(name = "anonet")]
fn anonet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(static_compute, m)?)?;
    m.add_function(wrap_pyfunction!(pushsum, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    m.add_function(wrap_pyfunction!(matrix, m)?)?;
    m.add_function(wrap_pyfunction!(nearest_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_bound, m)?)?;
    Ok(())
}
