//! Python bindings. Documents go in as JSON text and results come back as
//! plain Python objects.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use finconv_core::compact::is_compact_at;
use finconv_core::enumerate::{enumerate, search, ConvClass, EnumerationSpec, Sample, SearchTask, PREDICATES};
use finconv_core::io::{
    context_from_documents, convergence_json, parse_convergence, parse_family, report_json, search_json, validate_text,
};
use finconv_core::laws::run_laws;
use finconv_core::symbolic::{fan_check, prime_check, Exemplar};
use finconv_core::{FilterClass, Functor};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// Checks a convergence or witness document and returns its kind.
#[pyfunction]
fn validate(text: &str) -> PyResult<&'static str> {
    validate_text(text).map_err(err)
}

/// Applies a reflector, coreflector or the identity by name.
#[pyfunction]
fn reflect<'py>(py: Python<'py>, functor: &str, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let functor: Functor = functor.parse().map_err(err)?;
    let conv = parse_convergence(text).map_err(err)?;
    to_py(py, &convergence_json(&functor.apply(&conv)))
}

/// Classifies a surjection; without a target the final convergence is used.
#[pyfunction]
#[pyo3(signature = (map, source, target=None, witness=false))]
fn classify_map<'py>(
    py: Python<'py>,
    map: &str,
    source: &str,
    target: Option<&str>,
    witness: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let ctx = context_from_documents(map, source, target).map_err(err)?;
    let report = ctx.classify().map_err(err)?;
    let witnesses = if witness {
        Some(ctx.witnesses(&report).map_err(err)?)
    } else {
        None
    };
    to_py(py, &report_json(&report, witnesses.as_deref()))
}

/// Whether `family` is compact at `at` for the given filter class.
#[pyfunction]
#[pyo3(signature = (space, family, at, class="F"))]
fn check_compact(space: &str, family: &str, at: &str, class: &str) -> PyResult<bool> {
    let class: FilterClass = class.parse().map_err(err)?;
    let conv = parse_convergence(space).map_err(err)?;
    let fam = parse_family(family, conv.carrier()).map_err(err)?;
    let at = parse_family(at, conv.carrier()).map_err(err)?;
    is_compact_at(&conv, &fam, &at, class).map_err(err)
}

fn spec(size: usize, class: &str, sample: Option<usize>, seed: u64) -> PyResult<EnumerationSpec> {
    Ok(EnumerationSpec {
        size,
        class: class.parse::<ConvClass>().map_err(err)?,
        sample: sample.map(|count| Sample { seed, count }),
    })
}

/// All convergences of a class on `size` points, or a seeded sample.
#[pyfunction(name = "enumerate")]
#[pyo3(signature = (size, class="convergence", sample=None, seed=0))]
fn enumerate_py<'py>(
    py: Python<'py>,
    size: usize,
    class: &str,
    sample: Option<usize>,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let convs = enumerate(&spec(size, class, sample, seed)?).map_err(err)?;
    to_py(py, &Value::from(convs.iter().map(convergence_json).collect::<Vec<_>>()))
}

#[pyfunction]
#[pyo3(signature = (size, class="convergence"))]
fn count(size: usize, class: &str) -> PyResult<usize> {
    Ok(enumerate(&spec(size, class, None, 0)?).map_err(err)?.len())
}

/// Names of the registered search predicates.
#[pyfunction]
fn predicates() -> Vec<&'static str> {
    PREDICATES.iter().map(|p| p.name).collect()
}

/// First triple satisfying a predicate, as a witness document.
#[pyfunction(name = "search")]
fn search_py<'py>(py: Python<'py>, predicate: &str) -> PyResult<Bound<'py, PyAny>> {
    let task = SearchTask::new(predicate).map_err(err)?;
    let outcome = py.detach(|| search(&task)).map_err(err)?;
    to_py(py, &search_json(task.predicate.name, &outcome))
}

/// Runs the law suites on carriers of at most `size` points.
#[pyfunction]
#[pyo3(signature = (size=2))]
fn laws<'py>(py: Python<'py>, size: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| run_laws(size)).map_err(err)?;
    let mut v = serde_json::to_value(&report).map_err(err)?;
    v["passed"] = json!(report.passed());
    to_py(py, &v)
}

/// Checks on the infinite exemplars, `fan` or `prime`.
#[pyfunction]
fn exemplar<'py>(py: Python<'py>, name: &str) -> PyResult<Bound<'py, PyAny>> {
    let (mut v, passed) = match name.parse::<Exemplar>().map_err(err)? {
        Exemplar::Fan => {
            let r = fan_check().map_err(err)?;
            (serde_json::to_value(&r).map_err(err)?, r.passed())
        }
        Exemplar::Prime => {
            let r = prime_check().map_err(err)?;
            (serde_json::to_value(&r).map_err(err)?, r.passed())
        }
    };
    v["passed"] = json!(passed);
    to_py(py, &v)
}

#[pymodule]
fn finconv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(reflect, m)?)?;
    m.add_function(wrap_pyfunction!(classify_map, m)?)?;
    m.add_function(wrap_pyfunction!(check_compact, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_py, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(predicates, m)?)?;
    m.add_function(wrap_pyfunction!(search_py, m)?)?;
    m.add_function(wrap_pyfunction!(laws, m)?)?;
    m.add_function(wrap_pyfunction!(exemplar, m)?)?;
    Ok(())
}
