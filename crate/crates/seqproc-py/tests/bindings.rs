use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};
use std::ffi::CString;

/// Run `code` with the bindings importable as `seqproc`.
fn run_python(code: &str) {
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::new(py, "seqproc").unwrap();
        seqproc_py::seqproc_module(&module).unwrap();
        py.import("sys")
            .unwrap()
            .getattr("modules")
            .unwrap()
            .set_item("seqproc", &module)
            .unwrap();
        let globals = PyDict::new(py);
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.display(py);
            panic!("python code failed: {e}");
        }
    });
}

#[test]
fn check_reports_guardedness() {
    run_python(
        r#"
import seqproc
r = seqproc.check("X = a.X ; Y + b.1\nY = c.1 + 1")
assert r == {"guarded": True, "offending": [], "equations": 2, "root": "X", "gnf": True}, r
bad = seqproc.check("X = X ; Y + 1\nY = a.1")
assert bad["offending"] == ["X"], bad
"#,
    );
}

#[test]
fn explore_and_compare() {
    run_python(
        r#"
import seqproc
spec = "X = a.X ; Y + b.1\nY = c.1 + 1"
lts = seqproc.explore(spec, depth=6)
assert len(lts) > 1 and lts.has_frontier and lts.initial == 0
assert seqproc.Lts.from_json(lts.to_json()).to_json() == lts.to_json()
assert lts.to_dot().startswith("digraph")
labels = sorted(l for l, _ in lts.successors(0))
assert labels == ["a", "b"], labels

pda = seqproc.compile(spec)
assert '"initialStack"' in pda
v = seqproc.equivalent(seqproc.explore("a.tau.b.1"), seqproc.explore("a.b.1"), kind="branching")
assert v["outcome"] == "equivalent", v
v = seqproc.equivalent(seqproc.explore("a.b.1"), seqproc.explore("a.c.1"))
assert v["outcome"] == "inequivalent" and "formula" in v["witness"], v
v = seqproc.equivalent(lts, lts, kind="k", k=5)
assert v["outcome"] == "equivalent", v
"#,
    );
}

#[test]
fn errors_raise_seqproc_error() {
    run_python(
        r#"
import seqproc
for call in [
    lambda: seqproc.check("X = a.("),
    lambda: seqproc.explore("X = X ; Y + 1\nY = a.1"),
    lambda: seqproc.explore("a.1", mode="lazy"),
    lambda: seqproc.equivalent(seqproc.explore("a.1"), seqproc.explore("a.1"), kind="k"),
    lambda: seqproc.run_demo("nope"),
    lambda: seqproc.Lts.from_json("{"),
]:
    try:
        call()
    except seqproc.SeqprocError as e:
        assert isinstance(e, ValueError)
    else:
        raise AssertionError("no error")
"#,
    );
}

#[test]
fn demos_run() {
    run_python(
        r#"
import seqproc
names = [d["name"] for d in seqproc.demos()]
assert "branching-degree" in names, names
r = seqproc.run_demo("branching-degree")
assert r["holds"] is True and r["lines"], r
"#,
    );
}
