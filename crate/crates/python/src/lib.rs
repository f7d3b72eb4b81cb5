//! Python module `krein`: geometry, kernels, Krein-space linear algebra,
//! the two learners, harmonic diagnostics and the experiment pipeline.
//!
//! Points cross the boundary as flat coordinate lists (SPD matrices
//! row-major) together with a space name such as `"hyperbolic-2"`.
//! Matrices are lists of rows. Structured reports come back as dicts.

use std::path::PathBuf;

use krein_core::experiment::{self, DiagnoseProfile, ExperimentConfig};
use krein_core::geometry::{self, HyperboloidPoint, Point, PoincarePoint, Space};
use krein_core::kernels::{self, KernelExpr};
use krein_core::learners::{self, KreinKrrModel, KsvmModel, LabeledDataset, Predictor};
use krein_core::linalg;
use krein_core::KreinError;
use nalgebra::DMatrix;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: KreinError) -> PyErr {
    let msg = format!("{}: {}", e.kind(), e);
    if e.is_usage() || matches!(e, KreinError::InvalidPoint(_) | KreinError::Dimension { .. } | KreinError::SpaceMismatch { .. } | KreinError::Empty(_)) {
        PyValueError::new_err(msg)
    } else {
        PyRuntimeError::new_err(msg)
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for krein_core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn parse_space(name: &str) -> PyResult<Space> {
    name.parse().py_err()
}

fn points(space: Space, coords: &[Vec<f64>]) -> PyResult<Vec<Point>> {
    coords.iter().map(|c| Point::from_coords(space, c).py_err()).collect()
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| err(e.into()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn dataset(space: Space, coords: &[Vec<f64>], targets: Vec<f64>) -> PyResult<LabeledDataset> {
    LabeledDataset::new(points(space, coords)?, targets).py_err()
}

/// Immutable kernel expression.
#[pyclass(name = "Kernel", module = "krein", frozen, from_py_object)]
#[derive(Clone)]
struct PyKernel {
    inner: KernelExpr,
}

#[pymethods]
impl PyKernel {
    /// `exp(-lam * d(x, y)^2)` with the geodesic distance of `space`.
    #[staticmethod]
    fn geodesic_gaussian(space: &str, lam: f64) -> PyResult<Self> {
        Ok(Self { inner: KernelExpr::geodesic_gaussian(parse_space(space)?, lam).py_err()? })
    }

    #[staticmethod]
    fn minkowski_linear(n: usize) -> PyResult<Self> {
        Ok(Self { inner: KernelExpr::minkowski_linear(n).py_err()? })
    }

    #[staticmethod]
    fn tanh_sphere(n: usize, a: f64, b: f64) -> PyResult<Self> {
        Ok(Self { inner: KernelExpr::tanh_sphere(n, a, b).py_err()? })
    }

    #[staticmethod]
    fn euclidean_gaussian(n: usize, lam: f64) -> PyResult<Self> {
        Ok(Self { inner: KernelExpr::euclidean_gaussian(n, lam).py_err()? })
    }

    #[staticmethod]
    fn lin_comb(kernels: Vec<PyKernel>, coeffs: Vec<f64>) -> PyResult<Self> {
        let ks = kernels.into_iter().map(|k| k.inner).collect();
        Ok(Self { inner: kernels::lin_comb(ks, coeffs).py_err()? })
    }

    #[staticmethod]
    fn product(kernels: Vec<PyKernel>) -> PyResult<Self> {
        Ok(Self { inner: kernels::product(kernels.into_iter().map(|k| k.inner).collect()).py_err()? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: KernelExpr::from_json(text).py_err()? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().py_err()
    }

    #[getter]
    fn space(&self) -> String {
        self.inner.space().to_string()
    }

    #[getter]
    fn is_decomposable(&self) -> bool {
        self.inner.is_decomposable()
    }

    fn eval(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        let s = self.inner.space();
        let (x, y) = (Point::from_coords(s, &x).py_err()?, Point::from_coords(s, &y).py_err()?);
        self.inner.eval(&x, &y).py_err()
    }

    fn gram(&self, points_: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let pts = points(self.inner.space(), &points_)?;
        Ok(rows(&self.inner.gram(&pts).py_err()?))
    }

    fn cross(&self, rows_: Vec<Vec<f64>>, cols: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        let s = self.inner.space();
        Ok(rows(&self.inner.cross(&points(s, &rows_)?, &points(s, &cols)?).py_err()?))
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", self.inner.to_json().unwrap_or_else(|_| format!("<custom on {}>", self.inner.space())))
    }
}

/// Krein kernel ridge regression model.
#[pyclass(name = "KrrModel", module = "krein", frozen)]
struct PyKrr {
    inner: KreinKrrModel,
}

#[pymethods]
impl PyKrr {
    /// Fits `alpha = (K + N c I)^-1 y` on coordinate lists `points`.
    #[staticmethod]
    fn fit(kernel: &PyKernel, points: Vec<Vec<f64>>, targets: Vec<f64>, c: f64) -> PyResult<Self> {
        let data = dataset(kernel.inner.space(), &points, targets)?;
        Ok(Self { inner: learners::krr_fit(&kernel.inner, &data, c).py_err()? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: KreinKrrModel::from_json(text).py_err()? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().py_err()
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<f64> {
        let p = Point::from_coords(self.inner.kernel.space(), &x).py_err()?;
        learners::krr_predict(&self.inner, &p).py_err()
    }

    fn predict_many(&self, xs: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let pts = points(self.inner.kernel.space(), &xs)?;
        pts.iter().map(|p| learners::krr_predict(&self.inner, p).py_err()).collect()
    }

    /// `max |(1/N)(K alpha - y) + c alpha|` on the given training data.
    fn stationarity_residual(&self, points: Vec<Vec<f64>>, targets: Vec<f64>) -> PyResult<f64> {
        let data = dataset(self.inner.kernel.space(), &points, targets)?;
        learners::stationarity_residual(&self.inner, &data).py_err()
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha.clone()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn gram_inertia(&self) -> (usize, usize, usize) {
        self.inner.gram_inertia.counts()
    }
}

/// Krein support vector machine model.
#[pyclass(name = "KsvmModel", module = "krein", frozen)]
struct PyKsvm {
    inner: KsvmModel,
}

#[pymethods]
impl PyKsvm {
    /// Fits on labels in {-1, +1} with box constraint `box_c`.
    #[staticmethod]
    #[pyo3(signature = (kernel, points, labels, box_c, kkt_tol = None))]
    fn fit(kernel: &PyKernel, points: Vec<Vec<f64>>, labels: Vec<f64>, box_c: f64, kkt_tol: Option<f64>) -> PyResult<Self> {
        let data = dataset(kernel.inner.space(), &points, labels)?;
        let inner = match kkt_tol {
            None => learners::ksvm_fit(&kernel.inner, &data, box_c),
            Some(tol) => learners::ksvm_fit_with_tolerance(&kernel.inner, &data, &vec![box_c; data.len()], tol),
        }
        .py_err()?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: KsvmModel::from_json(text).py_err()? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().py_err()
    }

    /// `(score, label)` at `x`.
    fn predict(&self, x: Vec<f64>) -> PyResult<(f64, i8)> {
        let p = Point::from_coords(self.inner.kernel.space(), &x).py_err()?;
        learners::ksvm_predict(&self.inner, &p).py_err()
    }

    fn decision_function(&self, xs: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
        let pts = points(self.inner.kernel.space(), &xs)?;
        pts.iter().map(|p| self.inner.score(p).py_err()).collect()
    }

    fn accuracy(&self, points: Vec<Vec<f64>>, labels: Vec<f64>) -> PyResult<f64> {
        let data = dataset(self.inner.kernel.space(), &points, labels)?;
        learners::accuracy(&self.inner, &data).py_err()
    }

    #[getter]
    fn alpha(&self) -> Vec<f64> {
        self.inner.alpha.clone()
    }

    #[getter]
    fn beta(&self) -> Vec<f64> {
        self.inner.beta.clone()
    }

    #[getter]
    fn bias(&self) -> f64 {
        self.inner.bias
    }

    #[getter]
    fn n_support(&self) -> usize {
        self.inner.n_support
    }

    #[getter]
    fn gram_inertia(&self) -> (usize, usize, usize) {
        self.inner.gram_inertia.counts()
    }
}

/// Geodesic distance between two points of `space`.
#[pyfunction]
fn distance(space: &str, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let s = parse_space(space)?;
    Point::from_coords(s, &x).py_err()?.distance(&Point::from_coords(s, &y).py_err()?).py_err()
}

#[pyfunction]
fn hyperboloid_to_poincare(x: Vec<f64>) -> PyResult<Vec<f64>> {
    let p = HyperboloidPoint::new(x).py_err()?;
    Ok(geometry::hyperboloid_to_poincare(&p).coords().to_vec())
}

#[pyfunction]
fn poincare_to_hyperboloid(p: Vec<f64>) -> PyResult<Vec<f64>> {
    let p = PoincarePoint::new(p).py_err()?;
    Ok(geometry::poincare_to_hyperboloid(&p).coords().to_vec())
}

/// `count` seeded draws on the hyperbolic plane around `center`.
#[pyfunction]
fn riemannian_gaussian_sample(center: Vec<f64>, sigma: f64, count: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    let c = HyperboloidPoint::new(center).py_err()?;
    let pts = geometry::riemannian_gaussian_sample(&c, sigma, count, seed).py_err()?;
    Ok(pts.iter().map(|p| p.coords().to_vec()).collect())
}

/// `(eigenvalues, eigenvectors)` with eigenvalues descending and
/// eigenvectors as the columns of the returned row list.
#[pyfunction]
fn eigh(k: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let spectrum = linalg::sym_eigh(&matrix(&k)?).py_err()?;
    Ok((spectrum.eigenvalues.iter().copied().collect(), rows(&spectrum.eigenvectors)))
}

/// `(n_plus, n_minus, n_zero)` of a symmetric matrix.
#[pyfunction]
#[pyo3(signature = (k, tol = None))]
fn inertia(k: Vec<Vec<f64>>, tol: Option<f64>) -> PyResult<(usize, usize, usize)> {
    let m = matrix(&k)?;
    let tol = tol.unwrap_or_else(|| linalg::default_tol(&m));
    Ok(linalg::inertia_of(&linalg::sym_eigvals(&m).py_err()?, tol).counts())
}

/// Splits `K = K_plus - K_minus`; returns a dict with both parts, the
/// inertia and the relative reconstruction error.
#[pyfunction]
#[pyo3(signature = (k, tol = None))]
fn pd_decompose<'py>(py: Python<'py>, k: Vec<Vec<f64>>, tol: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let m = matrix(&k)?;
    let d = linalg::finite_pd_decompose(&m, tol).py_err()?;
    let out = serde_json::json!({
        "k_plus": rows(&d.k_plus),
        "k_minus": rows(&d.k_minus),
        "inertia": d.inertia,
        "reconstruction_error": d.reconstruction_error(&m),
    });
    to_py(py, &out)
}

/// Solves `(K + shift I) x = y`, refusing shifts that make it singular.
#[pyfunction]
fn solve_shifted(k: Vec<Vec<f64>>, shift: f64, y: Vec<f64>) -> PyResult<Vec<f64>> {
    let x = linalg::solve_shifted(&matrix(&k)?, shift, &nalgebra::DVector::from_vec(y)).py_err()?;
    Ok(x.iter().copied().collect())
}

/// Harmonic diagnostic report for `"gaussian-circle"` (needs `lam`),
/// `"tanh-sphere"` (needs `a`, `b`) or `"series"` (needs `coeffs`).
#[pyfunction]
#[pyo3(signature = (profile, lam = None, a = None, b = None, coeffs = None, k_max = 200, nodes = None, k0 = None))]
#[allow(clippy::too_many_arguments)]
fn diagnose<'py>(
    py: Python<'py>,
    profile: &str,
    lam: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    coeffs: Option<Vec<f64>>,
    k_max: usize,
    nodes: Option<usize>,
    k0: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{profile} needs {name}")));
    let p = match profile {
        "gaussian-circle" => DiagnoseProfile::GaussianCircle { lambda: need(lam, "lam")? },
        "tanh-sphere" => DiagnoseProfile::TanhSphere { a: need(a, "a")?, b: need(b, "b")? },
        "series" => DiagnoseProfile::Series {
            coefficients: coeffs.ok_or_else(|| PyValueError::new_err("series needs coeffs"))?,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown profile {other:?}; expected one of {}",
                DiagnoseProfile::NAMES.join(", ")
            )))
        }
    };
    to_py(py, &experiment::diagnose_cmd(&p, k_max, nodes, k0).py_err()?)
}

fn load_config(preset: Option<&str>, config_json: Option<&str>, seed: Option<u64>) -> PyResult<ExperimentConfig> {
    let mut cfg = match (preset, config_json) {
        (Some(_), Some(_)) => return Err(PyValueError::new_err("pass either preset or config_json")),
        (_, Some(text)) => ExperimentConfig::from_json(text).py_err()?,
        (name, None) => ExperimentConfig::preset(name.unwrap_or("default")).py_err()?,
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

/// Samples and labels an experiment dataset; returns
/// `(poincare_points, labels)`.
#[pyfunction]
#[pyo3(signature = (preset = None, config_json = None, seed = None))]
fn gen_dataset(preset: Option<&str>, config_json: Option<&str>, seed: Option<u64>) -> PyResult<(Vec<[f64; 2]>, Vec<i8>)> {
    let data = experiment::gen_dataset(&load_config(preset, config_json, seed)?).py_err()?;
    Ok((data.poincare, data.labels))
}

/// Runs a full experiment, writing its artifacts to `out_dir`; returns
/// the run report as a dict.
#[pyfunction]
#[pyo3(signature = (out_dir, preset = None, config_json = None, seed = None))]
fn run_experiment<'py>(
    py: Python<'py>,
    out_dir: PathBuf,
    preset: Option<&str>,
    config_json: Option<&str>,
    seed: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = load_config(preset, config_json, seed)?;
    let report = py.detach(|| experiment::run_experiment(&cfg, &out_dir)).py_err()?;
    to_py(py, &report)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    ExperimentConfig::preset_names()
}

#[pymodule]
fn krein(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKernel>()?;
    m.add_class::<PyKrr>()?;
    m.add_class::<PyKsvm>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(hyperboloid_to_poincare, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_to_hyperboloid, m)?)?;
    m.add_function(wrap_pyfunction!(riemannian_gaussian_sample, m)?)?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(inertia, m)?)?;
    m.add_function(wrap_pyfunction!(pd_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(solve_shifted, m)?)?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    m.add_function(wrap_pyfunction!(gen_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
