//! Python bindings: `import alpha_dyn`.

use alpha_dyn::cli::presets::{builtin_spec, figure_presets};
use alpha_dyn::conjugacy::{holder_exponents, theta_exact, theta_f64};
use alpha_dyn::dynamics::{expand, expand_exact, parse_point};
use alpha_dyn::ergodic::{
    farey_lyapunov_estimate, invariant_density_check, luroth_lyapunov_estimate, sample_digits, sum_level_frequency,
};
use alpha_dyn::numeric::format::format_rational;
use alpha_dyn::numeric::Extended;
use alpha_dyn::partition::specfile::parse_spec;
use alpha_dyn::renewal::{renewal_exact, renewal_sequence};
use alpha_dyn::thermo::{self, farey_phase_report, luroth_phase_report};
use alpha_dyn::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::SpecParse { .. } | Error::InvalidPartition(_) | Error::Domain(_) | Error::NotExact => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A countable partition of `(0, 1]` into intervals of lengths `a_1 ≥ a_2 ≥ …`.
#[pyclass(name = "PartitionSpec", frozen, skip_from_py_object)]
pub struct PyPartitionSpec {
    inner: alpha_dyn::PartitionSpec,
}

#[pymethods]
impl PyPartitionSpec {
    /// Parses a JSON spec such as `{"family": "power_atoms", "s": 3.0}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_spec(text).map_err(py_err)? })
    }

    /// `harmonic`, `dyadic` or a figure preset `fig1` … `fig6`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin_spec(name)
            .map(|inner| Self { inner })
            .ok_or_else(|| PyValueError::new_err(format!("unknown builtin partition `{}`", name)))
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    fn atom(&self, n: u64) -> PyResult<f64> {
        self.inner.atom(n).map_err(py_err)
    }

    fn tail(&self, n: u64) -> PyResult<f64> {
        self.inner.tail(n).map_err(py_err)
    }

    fn locate(&self, x: f64) -> PyResult<u64> {
        self.inner.locate(x).map_err(py_err)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, self.inner.classify())
    }

    fn to_json(&self) -> String {
        self.inner.family().to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("PartitionSpec({})", self.inner.family())
    }
}

/// α-Lüroth digits of `x` (a string `p/q` is expanded exactly).
#[pyfunction]
#[pyo3(signature = (spec, x, max_digits = 30))]
fn expand_digits(spec: &PyPartitionSpec, x: &Bound<'_, PyAny>, max_digits: usize) -> PyResult<Vec<u64>> {
    let spec = &spec.inner;
    let word = if let Ok(text) = x.extract::<String>() {
        let q = parse_point(&text).ok_or_else(|| PyValueError::new_err(format!("cannot parse `{}`", text)))?;
        expand_exact(spec, &q, max_digits).map_err(py_err)?
    } else {
        expand(spec, x.extract::<f64>()?, max_digits).map_err(py_err)?
    };
    Ok(word.digits)
}

/// `(θ_α(x), error_bound)`.
#[pyfunction]
#[pyo3(signature = (spec, x, eps = 1e-12))]
fn theta(spec: &PyPartitionSpec, x: &Bound<'_, PyAny>, eps: f64) -> PyResult<(f64, f64)> {
    let spec = &spec.inner;
    let t = if let Ok(text) = x.extract::<String>() {
        let q = parse_point(&text).ok_or_else(|| PyValueError::new_err(format!("cannot parse `{}`", text)))?;
        theta_exact(spec, &q, eps).map_err(py_err)?
    } else {
        theta_f64(spec, x.extract::<f64>()?, eps).map_err(py_err)?
    };
    Ok((t.value, t.error_bound))
}

/// `w_0, …, w_n` as floats.
#[pyfunction]
fn renewal(spec: &PyPartitionSpec, n: usize) -> PyResult<Vec<f64>> {
    Ok(renewal_sequence(&spec.inner, n).map_err(py_err)?.values)
}

/// `w_0, …, w_n` as exact `p/q` strings.
#[pyfunction]
fn renewal_rational(spec: &PyPartitionSpec, n: usize) -> PyResult<Vec<String>> {
    Ok(renewal_exact(&spec.inner, n).map_err(py_err)?.iter().map(format_rational).collect())
}

fn ext(x: Extended) -> f64 {
    x.to_f64()
}

/// `p(u)`; `inf` where the series diverges.
#[pyfunction]
fn pressure(spec: &PyPartitionSpec, u: f64) -> f64 {
    ext(thermo::pressure(&spec.inner, u).value)
}

#[pyfunction]
fn free_energy(spec: &PyPartitionSpec, u: f64) -> PyResult<f64> {
    thermo::free_energy(&spec.inner, u).map_err(py_err)
}

/// `(τ_α(s), minimizer)`.
#[pyfunction]
fn tau(spec: &PyPartitionSpec, s: f64) -> (f64, Option<f64>) {
    let p = thermo::tau(&spec.inner, s);
    (p.value, p.minimizer)
}

/// `(σ_α(s), minimizer)`.
#[pyfunction]
fn sigma(spec: &PyPartitionSpec, s: f64) -> (f64, Option<f64>) {
    let p = thermo::sigma(&spec.inner, s);
    (p.value, p.minimizer)
}

#[pyfunction]
fn spectrum_bounds<'py>(py: Python<'py>, spec: &PyPartitionSpec) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &thermo::spectrum_bounds(&spec.inner))
}

/// Phase report for `map = "luroth"` or `"farey"`.
#[pyfunction]
#[pyo3(signature = (spec, map = "luroth"))]
fn phase_report<'py>(py: Python<'py>, spec: &PyPartitionSpec, map: &str) -> PyResult<Bound<'py, PyAny>> {
    match map {
        "luroth" => json_to_py(py, &luroth_phase_report(&spec.inner)),
        "farey" => json_to_py(py, &farey_phase_report(&spec.inner)),
        _ => Err(PyValueError::new_err("map must be `luroth` or `farey`")),
    }
}

#[pyfunction]
#[pyo3(signature = (spec, n_search = 10_000))]
fn kappa_plus(spec: &PyPartitionSpec, n_search: u64) -> f64 {
    ext(holder_exponents(&spec.inner, n_search).kappa_plus)
}

/// Monte Carlo summary of `n` digits of a uniform point.
#[pyfunction]
#[pyo3(signature = (spec, n, seed = 42))]
fn simulate<'py>(py: Python<'py>, spec: &PyPartitionSpec, n: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let spec = &spec.inner;
    let stats = py.detach(|| sample_digits(spec, n, seed)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("n_steps", stats.n_steps)?;
    d.set_item("seed", stats.seed)?;
    d.set_item("mean_digit", stats.mean_digit())?;
    d.set_item("mean_log_digit", stats.mean_log_digit())?;
    d.set_item("mean_neg_log_atom", stats.mean_neg_log_atom())?;
    d.set_item("digit_histogram", stats.digit_histogram())?;
    d.set_item("luroth_lyapunov", luroth_lyapunov_estimate(spec, &stats).value)?;
    d.set_item("farey_lyapunov", farey_lyapunov_estimate(spec, &stats).value)?;
    Ok(d)
}

#[pyfunction]
fn sum_level(spec: &PyPartitionSpec, n_level: u64, n_samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let e = sum_level_frequency(&spec.inner, n_level, n_samples, seed).map_err(py_err)?;
    Ok((e.value, e.std_error))
}

/// Largest residual of the invariant-density fixed point on the first atoms.
#[pyfunction]
fn density_residual(spec: &PyPartitionSpec, n_atoms: u64) -> PyResult<f64> {
    Ok(invariant_density_check(&spec.inner, n_atoms).map_err(py_err)?.max_residual)
}

#[pyfunction]
fn figure_names<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, figure_presets().iter().map(|p| p.name))
}

#[pymodule(name = "alpha_dyn")]
fn alpha_dyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartitionSpec>()?;
    m.add_function(wrap_pyfunction!(expand_digits, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(renewal, m)?)?;
    m.add_function(wrap_pyfunction!(renewal_rational, m)?)?;
    m.add_function(wrap_pyfunction!(pressure, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(phase_report, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_plus, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sum_level, m)?)?;
    m.add_function(wrap_pyfunction!(density_residual, m)?)?;
    m.add_function(wrap_pyfunction!(figure_names, m)?)?;
    Ok(())
}
