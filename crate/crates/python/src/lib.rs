//! Python bindings: script checking, goal display, problem export and the
//! report arithmetic.

use hammerforge::basis::{bootstrap, bootstrap_intuitionistic};
use hammerforge::hammer::{gen_bushy, percent as render_percent};
use hammerforge::kernel::Signature;
use hammerforge::script::{elaborate, Development};
use hammerforge::tptp;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn basis(name: &str) -> PyResult<Signature> {
    match name {
        "classical" => Ok(bootstrap()),
        "intuitionistic" => Ok(bootstrap_intuitionistic()),
        other => Err(PyValueError::new_err(format!("unknown basis `{}`", other))),
    }
}

fn develop(text: &str, basis_name: &str) -> PyResult<Development> {
    Ok(elaborate(&basis(basis_name)?, text))
}

/// Elaborates a script. Returns a dict with `theorems`, `holes` and
/// `errors` (a list of dicts with `line`, `col`, `start`, `end`, `message`).
#[pyfunction]
#[pyo3(signature = (text, basis = "classical"))]
fn check<'py>(py: Python<'py>, text: &str, basis: &str) -> PyResult<Bound<'py, PyDict>> {
    let dev = develop(text, basis)?;
    let errors = dev
        .errors
        .iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("line", e.line)?;
            d.set_item("col", e.col)?;
            d.set_item("start", e.span.start)?;
            d.set_item("end", e.span.end)?;
            d.set_item("message", e.kind.to_string())?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let out = PyDict::new(py);
    out.set_item(
        "theorems",
        dev.theorems
            .iter()
            .map(|t| t.name.to_string())
            .collect::<Vec<_>>(),
    )?;
    out.set_item("holes", dev.hole_count())?;
    out.set_item("errors", errors)?;
    Ok(out)
}

/// The open goal at a byte offset, rendered as hypotheses above a rule and
/// the conclusion below it, or `None` outside any proof.
#[pyfunction]
#[pyo3(signature = (text, offset, basis = "classical"))]
fn goal_at(text: &str, offset: usize, basis: &str) -> PyResult<Option<String>> {
    let dev = develop(text, basis)?;
    Ok(dev
        .theorem_at(offset)
        .and_then(|t| t.goal_at(offset))
        .map(|g| g.view().to_string()))
}

/// One TH0 problem per tactic site, as `(id, theorem, text)` triples.
#[pyfunction]
#[pyo3(signature = (text, basis = "classical"))]
fn bushy(text: &str, basis: &str) -> PyResult<Vec<(String, String, String)>> {
    let dev = develop(text, basis)?;
    if let Some(e) = dev.errors.first() {
        return Err(PyValueError::new_err(e.to_string()));
    }
    let g = gen_bushy(&dev).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(g.candidates
        .iter()
        .map(|c| (c.id.clone(), c.theorem.to_string(), tptp::to_th0(&c.bundle)))
        .collect())
}

#[pyfunction]
fn mangle(name: &str) -> String {
    tptp::mangle(name)
}

#[pyfunction]
fn unmangle(symbol: &str) -> PyResult<String> {
    tptp::unmangle(symbol).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// `n/d` as a percentage with the given number of decimals, e.g. `"78.3%"`.
#[pyfunction]
#[pyo3(signature = (n, d, decimals = 1))]
fn percent(n: u64, d: u64, decimals: u32) -> String {
    render_percent(n, d, decimals)
}

#[pymodule(name = "hammerforge")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(goal_at, m)?)?;
    m.add_function(wrap_pyfunction!(bushy, m)?)?;
    m.add_function(wrap_pyfunction!(mangle, m)?)?;
    m.add_function(wrap_pyfunction!(unmangle, m)?)?;
    m.add_function(wrap_pyfunction!(percent, m)?)?;
    Ok(())
}
