//! Python bindings for `sepcorr`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use sepcorr::analysis::{self, RunOptions, ScenarioConfig};
use sepcorr::lhv::{self, ModelSpec};
use sepcorr::quantum;
use sepcorr::{ComplexMatrix, Error, ProductState, Setting, SphereGrid};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } | Error::NonFinite { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn settings(angles: Vec<(f64, f64)>) -> PyResult<Vec<Setting>> {
    angles
        .into_iter()
        .map(|(t, p)| Setting::new(t, p).map_err(to_py))
        .collect()
}

fn grid(n_theta: usize, n_phi: usize) -> PyResult<SphereGrid> {
    sepcorr::build_grid(n_theta, n_phi).map_err(to_py)
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A single-qubit density matrix.
#[pyclass(module = "pysepcorr", frozen, from_py_object)]
#[derive(Clone)]
struct QubitState(sepcorr::QubitState);

#[pymethods]
impl QubitState {
    /// From a row-major 2×2 matrix given as real and imaginary parts.
    #[new]
    fn new(re: Vec<f64>, im: Vec<f64>) -> PyResult<Self> {
        let rho = matrix(2, &re, &im)?;
        Ok(Self(sepcorr::QubitState::new(rho).map_err(to_py)?))
    }

    #[staticmethod]
    fn from_bloch(b: [f64; 3]) -> PyResult<Self> {
        Ok(Self(sepcorr::QubitState::from_bloch(b).map_err(to_py)?))
    }

    /// Pure state with Bloch vector along (θ, φ).
    #[staticmethod]
    fn pure_along(theta: f64, phi: f64) -> Self {
        Self(sepcorr::QubitState::pure_along(theta, phi))
    }

    #[staticmethod]
    fn zero() -> Self {
        Self(sepcorr::QubitState::zero())
    }

    #[staticmethod]
    fn maximally_mixed() -> Self {
        Self(sepcorr::QubitState::maximally_mixed())
    }

    #[getter]
    fn bloch(&self) -> [f64; 3] {
        self.0.bloch()
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn is_pure(&self, tol: f64) -> bool {
        self.0.is_pure(tol)
    }

    fn __repr__(&self) -> String {
        let b = self.0.bloch();
        format!("QubitState(bloch=[{}, {}, {}])", b[0], b[1], b[2])
    }
}

fn matrix(dim: usize, re: &[f64], im: &[f64]) -> PyResult<ComplexMatrix> {
    if re.len() != dim * dim || im.len() != dim * dim {
        return Err(PyValueError::new_err(format!(
            "expected {} real and imaginary entries",
            dim * dim
        )));
    }
    let entries: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    ComplexMatrix::from_row_major(dim, &entries).map_err(to_py)
}

/// An N-qubit joint state.
#[pyclass(module = "pysepcorr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct JointState(sepcorr::JointState);

#[pymethods]
impl JointState {
    #[staticmethod]
    fn product(parties: Vec<QubitState>) -> PyResult<Self> {
        let p = ProductState::new(parties.into_iter().map(|q| q.0).collect()).map_err(to_py)?;
        Ok(Self(sepcorr::JointState::product(p)))
    }

    #[staticmethod]
    fn ghz(n_parties: usize) -> PyResult<Self> {
        Ok(Self(sepcorr::JointState::ghz(n_parties).map_err(to_py)?))
    }

    #[staticmethod]
    fn bell() -> Self {
        Self(sepcorr::JointState::bell())
    }

    /// General 2^N × 2^N density matrix, row-major real and imaginary parts.
    #[staticmethod]
    fn from_matrix(n_parties: usize, re: Vec<f64>, im: Vec<f64>) -> PyResult<Self> {
        let rho = matrix(1 << n_parties, &re, &im)?;
        Ok(Self(
            sepcorr::JointState::general(n_parties, rho).map_err(to_py)?,
        ))
    }

    #[getter]
    fn n_parties(&self) -> usize {
        self.0.n_parties()
    }

    /// E(n₁,…,n_N) for settings given as (θ, φ) pairs.
    fn e_sep(&self, angles: Vec<(f64, f64)>) -> PyResult<f64> {
        sepcorr::e_sep(&self.0, &settings(angles)?).map_err(to_py)
    }

    /// The 3^N tensor entries, last party fastest.
    fn correlation_tensor(&self) -> Vec<f64> {
        sepcorr::correlation_tensor(&self.0).values().to_vec()
    }

    /// (4π/3)^N·ΣT².
    fn scalar_product_exact(&self) -> f64 {
        sepcorr::scalar_product_exact(&sepcorr::correlation_tensor(&self.0))
    }

    #[pyo3(signature = (n_theta = 4, n_phi = 8))]
    fn scalar_product_numeric(&self, n_theta: usize, n_phi: usize) -> PyResult<f64> {
        let grids = vec![grid(n_theta, n_phi)?; self.0.n_parties()];
        sepcorr::scalar_product_numeric(|s| sepcorr::e_sep(&self.0, s).unwrap_or(f64::NAN), &grids)
            .map_err(to_py)
    }

    /// (violated, ΣT²) against the separability condition ΣT² ≤ 1.
    #[pyo3(signature = (tol = 1e-9))]
    fn separability_check(&self, tol: f64) -> (bool, f64) {
        let v = sepcorr::separability_check(&sepcorr::correlation_tensor(&self.0), tol);
        (v.is_violated(), v.sum_of_squares)
    }
}

/// A finite-ensemble local hidden-variable model.
#[pyclass(module = "pysepcorr", frozen, skip_from_py_object)]
#[derive(Clone)]
struct LhvModel(sepcorr::LhvModel);

#[pymethods]
impl LhvModel {
    #[staticmethod]
    fn saturating(n_parties: usize) -> PyResult<Self> {
        Ok(Self(lhv::saturating_model(n_parties).map_err(to_py)?))
    }

    #[staticmethod]
    fn hemispheric_disagreement(n_parties: usize) -> PyResult<Self> {
        Ok(Self(
            lhv::hemispheric_disagreement_model(n_parties).map_err(to_py)?,
        ))
    }

    #[staticmethod]
    #[pyo3(signature = (bloch, resolution = lhv::DEFAULT_SIMULATOR_RESOLUTION))]
    fn single_qubit_simulator(bloch: [f64; 3], resolution: usize) -> PyResult<Self> {
        Ok(Self(
            lhv::single_qubit_simulator_model(bloch, resolution).map_err(to_py)?,
        ))
    }

    /// Model from a TOML document in the model-file format.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let spec = ModelSpec::from_toml(text).map_err(to_py)?;
        Ok(Self(spec.build().map_err(to_py)?))
    }

    #[getter]
    fn n_parties(&self) -> usize {
        self.0.n_parties()
    }

    fn e_lr(&self, angles: Vec<(f64, f64)>) -> PyResult<f64> {
        lhv::e_lr(&self.0, &settings(angles)?).map_err(to_py)
    }

    #[pyo3(signature = (n_theta = 4, n_phi = 8))]
    fn scalar_product(&self, n_theta: usize, n_phi: usize) -> PyResult<f64> {
        let grids = vec![grid(n_theta, n_phi)?; self.0.n_parties()];
        lhv::scalar_product_lhv(&self.0, &grids).map_err(to_py)
    }
}

#[pyfunction]
fn violation_ratio(n_parties: usize) -> PyResult<f64> {
    analysis::violation_ratio(n_parties).map_err(to_py)
}

#[pyfunction]
fn lhv_upper_bound(n_parties: usize) -> PyResult<f64> {
    lhv::lhv_upper_bound(n_parties).map_err(to_py)
}

#[pyfunction]
fn separable_maximum(n_parties: usize) -> f64 {
    quantum::separable_maximum(n_parties)
}

#[pyfunction]
fn orthogonality_residual(n_theta: usize, n_phi: usize) -> PyResult<f64> {
    Ok(sepcorr::orthogonality_residual(&grid(n_theta, n_phi)?))
}

/// Runs a scenario given as TOML text and returns the report as a dict.
#[pyfunction]
fn run_scenario<'py>(py: Python<'py>, toml_text: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = ScenarioConfig::from_toml(toml_text).map_err(to_py)?;
    let report = analysis::run_scenario(&cfg).map_err(to_py)?;
    json_to_py(py, &report)
}

fn options(seed: Option<u64>, max_parties: Option<usize>) -> RunOptions {
    let mut opts = RunOptions::default();
    if let Some(s) = seed {
        opts.seed = s;
    }
    if let Some(n) = max_parties {
        opts.max_parties = n;
    }
    opts
}

#[pyfunction]
#[pyo3(signature = (name, seed = None, max_parties = None))]
fn run_builtin<'py>(
    py: Python<'py>,
    name: &str,
    seed: Option<u64>,
    max_parties: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = analysis::run_builtin(name, &options(seed, max_parties)).map_err(to_py)?;
    json_to_py(py, &report)
}

/// Runs every built-in scenario and property suite; returns the aggregate report.
#[pyfunction]
#[pyo3(signature = (seed = None, max_parties = None))]
fn verify_all<'py>(
    py: Python<'py>,
    seed: Option<u64>,
    max_parties: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(seed, max_parties);
    let agg = py.detach(|| analysis::verify_all(&opts));
    json_to_py(py, &agg)
}

#[pymodule]
fn pysepcorr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<QubitState>()?;
    m.add_class::<JointState>()?;
    m.add_class::<LhvModel>()?;
    m.add_function(wrap_pyfunction!(violation_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(lhv_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(separable_maximum, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonality_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_builtin, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
