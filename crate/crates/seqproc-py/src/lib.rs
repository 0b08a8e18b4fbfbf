//! Python bindings: parse and check specs, explore them, compare systems,
//! compile GNF specs to PDAs and run the bundled demos.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use seqproc::automata::compile_pda;
use seqproc::equiv::{self, EquivKind};
use seqproc::syntax::{check_guardedness, to_gnf_view};
use seqproc::{experiments, explore_term, parse_spec, ExploreLimits, Mode, Term};

create_exception!(seqproc, SeqprocError, PyValueError);

fn err(e: impl ToString) -> PyErr {
    SeqprocError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

/// An explored labelled transition system.
#[pyclass(name = "Lts", module = "seqproc", frozen)]
pub struct PyLts {
    inner: seqproc::Lts,
}

#[pymethods]
impl PyLts {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyLts> {
        seqproc::Lts::from_json(text).map(|inner| PyLts { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    #[getter]
    fn initial(&self) -> usize {
        self.inner.initial
    }

    #[getter]
    fn num_transitions(&self) -> usize {
        self.inner.transitions.len()
    }

    #[getter]
    fn has_frontier(&self) -> bool {
        self.inner.has_frontier()
    }

    #[getter]
    fn truncated(&self) -> bool {
        self.inner.truncated
    }

    /// Labels of the states, by id.
    fn labels(&self) -> Vec<String> {
        self.inner.states.iter().map(|s| s.label.clone()).collect()
    }

    /// Outgoing transitions of `state` as `(label, target)` pairs.
    fn successors(&self, state: usize) -> PyResult<Vec<(String, usize)>> {
        if state >= self.inner.len() {
            return Err(err(format!("no state {state}")));
        }
        Ok(self.inner.outgoing(state).map(|t| (t.label.to_string(), t.dst)).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Lts({} states, {} transitions)", self.inner.len(), self.inner.transitions.len())
    }
}

/// Parse a spec and report guardedness.
#[pyfunction]
fn check<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let (spec, root) = parse_spec(text).map_err(err)?;
    let report = check_guardedness(&spec);
    let gnf = matches!(&root, Term::Name(n) if to_gnf_view(&spec, n).is_ok());
    to_py(
        py,
        &json!({
            "guarded": report.guarded,
            "offending": report.offending_names,
            "equations": spec.len(),
            "root": root.to_string(),
            "gnf": gnf,
        }),
    )
}

/// Explore the root term of a spec.
#[pyfunction]
#[pyo3(signature = (text, mode = "revised", depth = 10, max_states = ExploreLimits::DEFAULT_MAX_STATES))]
fn explore(text: &str, mode: &str, depth: usize, max_states: usize) -> PyResult<PyLts> {
    let mode: Mode = mode.parse().map_err(err)?;
    let (spec, root) = parse_spec(text).map_err(err)?;
    let inner = explore_term(&root, &spec, mode, ExploreLimits::new(depth, max_states)).map_err(err)?;
    Ok(PyLts { inner })
}

fn parse_kind(kind: &str, k: Option<usize>) -> PyResult<EquivKind> {
    Ok(match (kind, k) {
        ("k", Some(k)) => EquivKind::Bounded(k),
        ("k", None) => return Err(err("kind `k` needs k")),
        ("strong", _) => EquivKind::Strong,
        ("branching", _) => EquivKind::Branching,
        ("dp-branching", _) => EquivKind::DpBranching,
        ("rooted-branching", _) => EquivKind::RootedBranching,
        ("rooted-dp", _) => EquivKind::RootedDp,
        (other, _) => return Err(err(format!("unknown kind `{other}`"))),
    })
}

/// Compare two systems; returns the verdict as a dict.
#[pyfunction]
#[pyo3(signature = (left, right, kind = "strong", k = None))]
fn equivalent<'py>(
    py: Python<'py>,
    left: &PyLts,
    right: &PyLts,
    kind: &str,
    k: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let kind = parse_kind(kind, k)?;
    let verdict = equiv::equivalent(&left.inner, &right.inner, kind).map_err(err)?;
    to_py(py, &verdict.to_value())
}

/// Compile a GNF spec to a PDA, returned as JSON text.
#[pyfunction]
#[pyo3(signature = (text, root = None, full = false))]
fn compile(text: &str, root: Option<String>, full: bool) -> PyResult<String> {
    let (spec, spec_root) = parse_spec(text).map_err(err)?;
    let root = match (root, spec_root) {
        (Some(r), _) => r,
        (None, Term::Name(n)) => n,
        (None, t) => return Err(err(format!("root term {t} is not a name; pass root"))),
    };
    let gnf = to_gnf_view(&spec, &root).map_err(err)?;
    compile_pda(&gnf, &root, !full).map(|p| p.to_json()).map_err(err)
}

/// The bundled demos, as a list of dicts.
#[pyfunction]
fn demos(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &experiments::manifest())
}

/// Run one demo; returns `{"name", "holds", "lines", "data"}`.
#[pyfunction]
fn run_demo<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    let experiment = experiments::find(name).ok_or_else(|| err(format!("unknown demo `{name}`")))?;
    let report = py.detach(|| experiment.run()).map_err(err)?;
    to_py(
        py,
        &json!({"name": experiment.name, "holds": report.holds, "lines": report.lines, "data": report.data}),
    )
}

#[pymodule]
#[pyo3(name = "seqproc")]
pub fn seqproc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SeqprocError", m.py().get_type::<SeqprocError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyLts>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(demos, m)?)?;
    m.add_function(wrap_pyfunction!(run_demo, m)?)?;
    Ok(())
}
