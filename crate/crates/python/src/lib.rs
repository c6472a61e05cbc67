//! Python bindings: Stirling numbers, the alternating-sum bound, families of
//! permutations with `k` cycles, matching numbers and the exact search.
//!
//! Permutations cross the boundary as canonical cycle strings such as
//! `"(1 3 2)(4)"`. Reports come back as dictionaries whose large numbers are
//! decimal strings, exactly as the command-line tool prints them.

#![allow(clippy::useless_conversion)]

use std::sync::Arc;

use cyclematch_core::report::{self, Suite};
use cyclematch_core::search::{self, Limits};
use cyclematch_core::{Cycle, CyclePerm, Error, SnkSpace, StirlingTable};
use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

create_exception!(cyclematch, CapacityError, PyException, "A size or search limit was exceeded.");

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity { .. } => CapacityError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for cyclematch_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn json_to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_py(py),
            (None, Some(i)) => i.into_py(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_py(py),
        },
        Value::String(s) => s.into_py(py),
        Value::Array(items) => {
            let list = PyList::empty_bound(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new_bound(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_py(py)
        }
    })
}

/// `[n k]`, the number of permutations of `n` elements with `k` cycles.
#[pyfunction]
fn stirling_unsigned(n: usize, k: i64) -> BigUint {
    cyclematch_core::stirling_unsigned(n, k)
}

/// The alternating sum with its terms, as `{"value", "terms", "threshold_met"}`.
#[pyfunction]
fn emc_bound(py: Python<'_>, n: usize, k: usize, s: usize) -> PyResult<PyObject> {
    let b = cyclematch_core::emc_bound(n, k, s).or_raise()?;
    let dict = PyDict::new_bound(py);
    dict.set_item("value", b.value.clone())?;
    dict.set_item("terms", b.terms.clone())?;
    dict.set_item("threshold_met", b.threshold_met())?;
    Ok(dict.into_py(py))
}

/// Size of the union of the families anchored at the given cycles, which
/// must have pairwise-disjoint supports.
#[pyfunction]
fn union_size_pie(n: usize, k: usize, anchors: Vec<String>) -> PyResult<BigInt> {
    let cycles = anchors
        .iter()
        .map(|a| a.parse::<Cycle>())
        .collect::<cyclematch_core::Result<Vec<_>>>()
        .or_raise()?;
    let spec = cyclematch_core::AnchorSpec::new(cycles).or_raise()?;
    cyclematch_core::union_size_pie(&StirlingTable::new(n), n, k, &spec).or_raise()
}

/// Every permutation with `k` cycles, in canonical cycle notation, sorted.
#[pyfunction]
fn enumerate_snk(n: usize, k: usize) -> PyResult<Vec<String>> {
    Ok(cyclematch_core::enumerate_snk(n, k)
        .or_raise()?
        .iter()
        .map(ToString::to_string)
        .collect())
}

/// Canonical cycle notation of a one-line table `[pi(1), ..., pi(n)]`.
#[pyfunction]
fn canonicalize(mapping: Vec<usize>) -> PyResult<String> {
    Ok(CyclePerm::canonicalize(&mapping).or_raise()?.to_string())
}

/// A subset of the permutations of `[n]` with exactly `k` cycles.
#[pyclass(name = "Family", module = "cyclematch")]
#[derive(Clone)]
struct PyFamily {
    inner: cyclematch_core::Family,
}

fn space(n: usize, k: usize) -> PyResult<Arc<SnkSpace>> {
    Ok(Arc::new(SnkSpace::new(n, k).or_raise()?))
}

#[pymethods]
impl PyFamily {
    /// Family from permutations in cycle notation.
    #[new]
    fn new(n: usize, k: usize, members: Vec<String>) -> PyResult<Self> {
        let sp = space(n, k)?;
        let ids = members
            .iter()
            .map(|m| sp.parse_member(m))
            .collect::<cyclematch_core::Result<Vec<_>>>()
            .or_raise()?;
        Ok(PyFamily {
            inner: cyclematch_core::Family::from_ids(sp, ids).or_raise()?,
        })
    }

    #[staticmethod]
    fn full(n: usize, k: usize) -> PyResult<Self> {
        Ok(PyFamily {
            inner: cyclematch_core::Family::full(space(n, k)?),
        })
    }

    /// All members containing the given cycle.
    #[staticmethod]
    fn anchored(n: usize, k: usize, cycle: &str) -> PyResult<Self> {
        let b: Cycle = cycle.parse().or_raise()?;
        Ok(PyFamily {
            inner: cyclematch_core::Family::anchored(space(n, k)?, &b).or_raise()?,
        })
    }

    /// All members fixing at least one of the given points.
    #[staticmethod]
    fn extremal(n: usize, k: usize, points: Vec<usize>) -> PyResult<Self> {
        Ok(PyFamily {
            inner: cyclematch_core::Family::extremal(space(n, k)?, &points).or_raise()?,
        })
    }

    /// Parses the line format: one permutation per line, `#` comments allowed.
    #[staticmethod]
    fn from_lines(n: usize, k: usize, text: &str) -> PyResult<Self> {
        Ok(PyFamily {
            inner: cyclematch_core::Family::from_lines(space(n, k)?, text).or_raise()?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, perm: &str) -> PyResult<bool> {
        let id = self.inner.space().parse_member(perm).or_raise()?;
        Ok(self.inner.contains(id))
    }

    fn __eq__(&self, other: &PyFamily) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Family(n={}, k={}, size={})", self.inner.n(), self.inner.k(), self.inner.len())
    }

    fn members(&self) -> Vec<String> {
        self.inner.perms().map(ToString::to_string).collect()
    }

    fn to_lines(&self) -> String {
        self.inner.to_lines()
    }

    fn union(&self, other: &PyFamily) -> PyResult<Self> {
        Ok(PyFamily {
            inner: self.inner.union(&other.inner).or_raise()?,
        })
    }

    fn intersection(&self, other: &PyFamily) -> PyResult<Self> {
        Ok(PyFamily {
            inner: self.inner.intersection(&other.inner).or_raise()?,
        })
    }

    /// Matching number and one maximum matching.
    fn nu_p(&self) -> PyResult<(usize, Vec<String>)> {
        let (nu, witness) = cyclematch_core::nu_p(&self.inner).or_raise()?;
        let perms = witness.perms(self.inner.space()).map(ToString::to_string).collect();
        Ok((nu, perms))
    }
}

/// Exact largest family with matching number at most `s`, as a report record.
#[pyfunction]
#[pyo3(signature = (n, k, s, ground_cap=None, hyperedge_cap=None, node_limit=None))]
fn emc_exact(
    py: Python<'_>,
    n: usize,
    k: usize,
    s: usize,
    ground_cap: Option<usize>,
    hyperedge_cap: Option<usize>,
    node_limit: Option<u64>,
) -> PyResult<PyObject> {
    let d = Limits::default();
    let limits = Limits {
        ground_cap: ground_cap.unwrap_or(d.ground_cap),
        hyperedge_cap: hyperedge_cap.unwrap_or(d.hyperedge_cap),
        node_limit: node_limit.unwrap_or(d.node_limit),
    };
    let result = py.allow_threads(|| search::emc_exact(n, k, s, &limits)).or_raise()?;
    json_to_py(py, &report::emc_record(&result))
}

/// The `s = 1` case solved as a maximum clique of the share-a-cycle graph.
#[pyfunction]
#[pyo3(signature = (n, k, ground_cap=None))]
fn emc_exact_s1(py: Python<'_>, n: usize, k: usize, ground_cap: Option<usize>) -> PyResult<PyObject> {
    let cap = ground_cap.unwrap_or(Limits::default().ground_cap);
    let result = py.allow_threads(|| search::emc_exact_s1(n, k, cap)).or_raise()?;
    json_to_py(py, &report::emc_record(&result))
}

/// Runs a verification suite and returns `{"failures", "instances"}`.
#[pyfunction]
#[pyo3(signature = (suite="all", max_n=None))]
fn verify(py: Python<'_>, suite: &str, max_n: Option<usize>) -> PyResult<PyObject> {
    let suite: Suite = suite.parse().or_raise()?;
    let outcome = py.allow_threads(|| report::verify(suite, max_n)).or_raise()?;
    let dict = PyDict::new_bound(py);
    dict.set_item("failures", outcome.failures)?;
    dict.set_item("instances", json_to_py(py, &Value::Array(outcome.records))?)?;
    Ok(dict.into_py(py))
}

#[pymodule]
fn cyclematch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type_bound::<CapacityError>())?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(stirling_unsigned, m)?)?;
    m.add_function(wrap_pyfunction!(emc_bound, m)?)?;
    m.add_function(wrap_pyfunction!(union_size_pie, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_snk, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(emc_exact, m)?)?;
    m.add_function(wrap_pyfunction!(emc_exact_s1, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
