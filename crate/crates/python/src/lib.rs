//! Python bindings: exact rationals cross the boundary as `"p/q"` strings,
//! integers as Python ints, structured results as JSON text.

use atfgerm::atf::{delta_m as core_delta_m, AtfDiagram};
use atfgerm::germ::{self, Germ};
use atfgerm::json::{diagram_to_json, germ_from_json, germ_to_json, invariants_to_json, parse_value, to_line};
use atfgerm::lattice::{integral_index as core_integral_index, IntVec};
use atfgerm::locality::{has_property_cs, ChartSpec};
use atfgerm::markov::{self, path_to_triple, MarkovTriple};
use atfgerm::polytope::vertices_2d;
use atfgerm::rational::{format, parse, ExtRational, Rational};
use atfgerm::reduction::{ProductTorusSpec, UpsilonParams};
use atfgerm::svg::{render_svg, RenderOptions};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    parse(s).map_err(err)
}

fn triple(t: (u64, u64, u64)) -> PyResult<MarkovTriple> {
    MarkovTriple::new([t.0, t.1, t.2]).map_err(err)
}

/// Integral index of a family of integer vectors.
#[pyfunction]
fn integral_index(vectors: Vec<Vec<BigInt>>) -> PyResult<BigInt> {
    let vs = vectors.into_iter().map(IntVec::new).collect::<Result<Vec<_>, _>>().map_err(err)?;
    core_integral_index(&vs).map_err(err)
}

#[pyfunction]
fn is_markov(a: u64, b: u64, c: u64) -> PyResult<bool> {
    markov::is_markov([a, b, c]).map_err(err)
}

/// Sorted Markov triples with largest entry at most `max_entry`, ordered by largest entry.
#[pyfunction]
fn markov_tree(max_entry: u64) -> PyResult<Vec<(u64, u64, u64)>> {
    let tree = markov::markov_tree(max_entry).map_err(err)?;
    Ok(tree.triples().into_iter().map(|t| t.entries().into()).collect())
}

#[pyclass(name = "Germ", module = "atfgerm", frozen)]
struct PyGerm {
    inner: Germ,
}

#[pymethods]
impl PyGerm {
    #[new]
    fn new(constant: &str, vectors: Vec<Vec<BigInt>>) -> PyResult<Self> {
        let vs = vectors.into_iter().map(IntVec::new).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(PyGerm { inner: Germ::new(rational(constant)?, vs).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let (inner, _) = germ_from_json(&parse_value(text).map_err(err)?).map_err(err)?;
        Ok(PyGerm { inner })
    }

    #[getter]
    fn constant(&self) -> String {
        format(self.inner.constant())
    }

    #[getter]
    fn vectors(&self) -> Vec<Vec<BigInt>> {
        self.inner.vectors().iter().map(|v| v.coords().to_vec()).collect()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn invariants(&self) -> String {
        to_line(&invariants_to_json(&germ::germ_invariants(&self.inner)))
    }

    fn equivalent(&self, other: &PyGerm) -> PyResult<bool> {
        Ok(germ::germ_equivalent(&self.inner, &other.inner).map_err(err)?.is_equivalent())
    }

    fn to_json(&self) -> String {
        to_line(&germ_to_json(&self.inner, None))
    }

    fn __repr__(&self) -> String {
        format!("Germ({})", self.to_json())
    }
}

#[pyfunction]
fn germ_upsilon(k: i64, a1: &str, a2: &str) -> PyResult<PyGerm> {
    let p = UpsilonParams::new(k, rational(a1)?, rational(a2)?).map_err(err)?;
    Ok(PyGerm { inner: germ::germ_upsilon(&p) })
}

#[pyfunction]
fn germ_theta(triple_: (u64, u64, u64), area: &str) -> PyResult<PyGerm> {
    Ok(PyGerm { inner: germ::germ_theta(&triple(triple_)?, &rational(area)?).map_err(err)? })
}

#[pyclass(name = "Diagram", module = "atfgerm", frozen)]
struct PyDiagram {
    inner: AtfDiagram,
}

#[pymethods]
impl PyDiagram {
    fn normals(&self) -> Vec<Vec<BigInt>> {
        self.inner.polytope().normals().into_iter().map(IntVec::into_coords).collect()
    }

    fn vertices(&self) -> PyResult<Vec<(String, String)>> {
        let poly = vertices_2d(self.inner.polytope()).map_err(err)?;
        Ok(poly.vertices().iter().map(|[x, y]| (format(x), format(y))).collect())
    }

    fn to_json(&self) -> String {
        to_line(&diagram_to_json(&self.inner))
    }

    #[pyo3(signature = (chambers = false, width = 400, height = 400))]
    fn render_svg(&self, chambers: bool, width: u32, height: u32) -> PyResult<String> {
        let opts = RenderOptions { width, height, chambers, ..RenderOptions::default() };
        render_svg(&self.inner, &opts).map_err(err)
    }
}

/// Markov triangle of a triple with its three nodes.
#[pyfunction]
fn delta_m(triple_: (u64, u64, u64)) -> PyResult<PyDiagram> {
    let path = path_to_triple(triple(triple_)?).map_err(err)?;
    let (inner, _) = core_delta_m(&path).map_err(err)?;
    Ok(PyDiagram { inner })
}

/// Whether a product torus sits in a ball chart with its displacement energy intact.
#[pyfunction]
fn check_cs(torus: Vec<String>, radius: &str, lambda_s: &str) -> PyResult<bool> {
    let a = torus.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?;
    let t = ProductTorusSpec::new(a).map_err(err)?;
    let l: ExtRational = lambda_s.parse().map_err(err)?;
    let chart = ChartSpec::new(rational(radius)?, l).map_err(err)?;
    Ok(has_property_cs(&t, &chart).holds)
}

#[pymodule]
#[pyo3(name = "atfgerm")]
fn atfgerm_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(integral_index, m)?)?;
    m.add_function(wrap_pyfunction!(is_markov, m)?)?;
    m.add_function(wrap_pyfunction!(markov_tree, m)?)?;
    m.add_function(wrap_pyfunction!(germ_upsilon, m)?)?;
    m.add_function(wrap_pyfunction!(germ_theta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_m, m)?)?;
    m.add_function(wrap_pyfunction!(check_cs, m)?)?;
    m.add_class::<PyGerm>()?;
    m.add_class::<PyDiagram>()?;
    m.add("REMARK_DISCREPANCY_FLAG", germ::REMARK_DISCREPANCY_FLAG)?;
    Ok(())
}
