//! Python bindings. Integers cross the boundary as Python `int`; structured
//! results come back as plain dicts decoded from the library's JSON, so
//! large values stay decimal strings exactly as in the CLI output.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use k3ulrich::certificate::to_sorted_json;
use k3ulrich::{DivisorClass, Error, GramLattice};

fn value_error(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (to_sorted_json(value),))
}

fn class(coords: (BigInt, BigInt, BigInt)) -> DivisorClass {
    DivisorClass::new(coords.0, coords.1, coords.2)
}

/// The lattice `M(a, u)` in the basis `(h, A, B)`.
#[pyclass(module = "k3ulrich_py", name = "Lattice", frozen)]
struct PyLattice {
    inner: GramLattice,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(a: BigInt, u: BigInt) -> PyResult<Self> {
        GramLattice::k3(a, u).map(|inner| Self { inner }).map_err(value_error)
    }

    #[getter]
    fn a(&self) -> Option<BigInt> {
        self.inner.params().map(|p| p.a.clone())
    }

    #[getter]
    fn u(&self) -> Option<BigInt> {
        self.inner.params().map(|p| p.u.clone())
    }

    fn gram(&self) -> Vec<Vec<BigInt>> {
        self.inner.gram().iter().map(|row| row.to_vec()).collect()
    }

    /// `(positive, negative, zero)`.
    fn inertia(&self) -> (usize, usize, usize) {
        let s = self.inner.inertia();
        (s.positive, s.negative, s.zero)
    }

    fn is_even(&self) -> bool {
        self.inner.is_even()
    }

    fn determinant(&self) -> BigInt {
        self.inner.determinant()
    }

    /// Intersection of two classes given as `(z, x, y)` = `zh + xA + yB`.
    fn pairing(&self, d: (BigInt, BigInt, BigInt), e: (BigInt, BigInt, BigInt)) -> BigInt {
        self.inner.pairing(&class(d), &class(e))
    }

    /// All classes `E` with `E.h = d` and `E^2 = s`, with the proof box.
    fn enumerate<'py>(&self, py: Python<'py>, d: BigInt, s: BigInt) -> PyResult<Bound<'py, PyAny>> {
        let set = k3ulrich::enumerate(&self.inner, &d, &s).map_err(value_error)?;
        to_py(py, &set)
    }

    fn certify_very_ample<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let cert = k3ulrich::certify_very_ample(&self.inner).map_err(value_error)?;
        to_py(py, &cert)
    }

    fn find_ulrich_line_bundles<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let found = k3ulrich::find_ulrich_line_bundles(&self.inner).map_err(value_error)?;
        to_py(py, &found)
    }

    fn to_json(&self) -> String {
        to_sorted_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        match self.inner.params() {
            Some(p) => format!("Lattice(a={}, u={})", p.a, p.u),
            None => "Lattice(<custom>)".to_owned(),
        }
    }
}

#[pyfunction]
fn build_k3_lattice(a: BigInt, u: BigInt) -> PyResult<PyLattice> {
    PyLattice::new(a, u)
}

#[pyfunction]
fn certify_very_ample<'py>(py: Python<'py>, lattice: &PyLattice) -> PyResult<Bound<'py, PyAny>> {
    lattice.certify_very_ample(py)
}

#[pyfunction]
fn find_ulrich_line_bundles<'py>(py: Python<'py>, lattice: &PyLattice) -> PyResult<Bound<'py, PyAny>> {
    lattice.find_ulrich_line_bundles(py)
}

#[pyfunction]
fn chern_bounds<'py>(py: Python<'py>, a: BigInt, r: BigInt) -> PyResult<Bound<'py, PyAny>> {
    let report = k3ulrich::chern_bounds(&a, &r).map_err(value_error)?;
    to_py(py, &report)
}

#[pyfunction]
fn classify_u<'py>(py: Python<'py>, a: BigInt, u: BigInt) -> PyResult<Bound<'py, PyAny>> {
    let row = k3ulrich::classify_u(&a, &u).map_err(value_error)?;
    to_py(py, &row)
}

/// Rank-2 scan over `a_min..=a_max`. `fmt` is "dict", "json" or "csv".
#[pyfunction]
#[pyo3(signature = (a_min, a_max, verify = false, jobs = 0, fmt = "dict"))]
fn scan_rank2<'py>(
    py: Python<'py>,
    a_min: BigInt,
    a_max: BigInt,
    verify: bool,
    jobs: usize,
    fmt: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let report = py
        .detach(|| k3ulrich::scan_rank2(&a_min, &a_max, verify, jobs))
        .map_err(value_error)?;
    match fmt {
        "dict" => to_py(py, &report),
        "json" => Ok(report.to_json().into_pyobject(py)?.into_any()),
        "csv" => Ok(report.to_csv().into_pyobject(py)?.into_any()),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

#[pymodule]
fn k3ulrich_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(build_k3_lattice, m)?)?;
    m.add_function(wrap_pyfunction!(certify_very_ample, m)?)?;
    m.add_function(wrap_pyfunction!(find_ulrich_line_bundles, m)?)?;
    m.add_function(wrap_pyfunction!(chern_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(classify_u, m)?)?;
    m.add_function(wrap_pyfunction!(scan_rank2, m)?)?;
    Ok(())
}
