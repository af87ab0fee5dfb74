//! Python bindings: functionals, vectors, projection norms, the minimax
//! solver and example certificates.

use projconst::designer::{design_for_target_with_levels, DEFAULT_GAP_LEVELS};
use projconst::minimax_solver::DEFAULT_TOLERANCE;
use projconst::{CertificateKind, ExampleCertificate, ExtendedVector, HyperplaneFunctional};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: projconst::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(format!("invalid JSON: {e}"))
}

/// Normalized functional `f = h + g` with atomic part `h` and a singular part
/// of weight `gamma`, which attains its norm iff `attains`.
#[pyclass(name = "Functional", module = "projconst_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFunctional {
    inner: HyperplaneFunctional,
}

#[pymethods]
impl PyFunctional {
    #[new]
    #[pyo3(signature = (h, gamma = 0.0, attains = true))]
    fn new(h: Vec<f64>, gamma: f64, attains: bool) -> PyResult<Self> {
        HyperplaneFunctional::new(h, gamma, attains).map(|inner| Self { inner }).map_err(err)
    }

    /// Rescales `(h, gamma)` to unit norm.
    #[staticmethod]
    #[pyo3(signature = (h, gamma = 0.0, attains = true))]
    fn normalize(h: Vec<f64>, gamma: f64, attains: bool) -> PyResult<Self> {
        HyperplaneFunctional::normalize(h, gamma, attains).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(json_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[getter]
    fn h(&self) -> Vec<f64> {
        self.inner.atomic().to_vec()
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.singular_weight()
    }

    #[getter]
    fn attains(&self) -> bool {
        self.inner.singular_attains()
    }

    fn __repr__(&self) -> String {
        format!("Functional({})", self.to_json())
    }
}

/// Vector `y` given by its prefix, tail magnitude `t = limsup |y_j|` and
/// singular pairing `s`.
#[pyclass(name = "Vector", module = "projconst_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyVector {
    inner: ExtendedVector,
}

#[pymethods]
impl PyVector {
    #[new]
    #[pyo3(signature = (y, t = 0.0, s = 0.0))]
    fn new(y: Vec<f64>, t: f64, s: f64) -> PyResult<Self> {
        ExtendedVector::new(y, t, s).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(json_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.inner.prefix().to_vec()
    }

    #[getter]
    fn t(&self) -> f64 {
        self.inner.tail_mag()
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.tail_pair()
    }

    fn __repr__(&self) -> String {
        format!("Vector({})", self.to_json())
    }
}

#[pyclass(name = "SolverResult", module = "projconst_py", frozen, get_all)]
struct PySolverResult {
    #[pyo3(name = "lambda_")]
    lambda: f64,
    attained: bool,
    minimizer: Option<PyVector>,
    iterations: usize,
}

#[pymethods]
impl PySolverResult {
    fn __repr__(&self) -> String {
        format!("SolverResult(lambda_={}, attained={}, iterations={})", self.lambda, self.attained, self.iterations)
    }
}

/// Hyperplane whose projection constant equals `target` and which admits no
/// minimal projection.
#[pyclass(name = "Certificate", module = "projconst_py", frozen)]
struct PyCertificate {
    inner: ExampleCertificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(|inner| Self { inner }).map_err(json_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[getter]
    fn target(&self) -> f64 {
        self.inner.target
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            CertificateKind::Mixed(_) => "mixed",
            CertificateKind::PureSingular => "pure_singular",
        }
    }

    /// `(n, a, b)` for mixed certificates.
    #[getter]
    fn params(&self) -> Option<(usize, f64, f64)> {
        match &self.inner.kind {
            CertificateKind::Mixed(p) => Some((p.n, p.a, p.b)),
            CertificateKind::PureSingular => None,
        }
    }

    #[getter]
    fn functional(&self) -> PyFunctional {
        PyFunctional { inner: self.inner.functional.clone() }
    }

    #[getter]
    fn lambda_closed_form(&self) -> f64 {
        self.inner.lambda_closed_form
    }

    #[getter]
    fn lambda_solver(&self) -> f64 {
        self.inner.lambda_solver
    }

    #[getter]
    fn levels(&self) -> Vec<u64> {
        self.inner.gap_evidence.levels.clone()
    }

    #[getter]
    fn gaps(&self) -> Vec<f64> {
        self.inner.gap_evidence.gaps.clone()
    }

    fn __repr__(&self) -> String {
        format!("Certificate(target={}, kind={})", self.inner.target, self.kind())
    }
}

#[pyfunction]
fn blatter_cheney(h: Vec<f64>) -> PyResult<f64> {
    projconst::blatter_cheney(&h).map_err(err)
}

#[pyfunction]
fn mixed_lambda(f: &PyFunctional) -> PyResult<f64> {
    projconst::mixed_lambda(&f.inner).map_err(err)
}

#[pyfunction]
fn h_an(n: usize, a: f64) -> PyResult<Vec<f64>> {
    projconst::h_an(n, a).map_err(err)
}

#[pyfunction]
fn curve_g(n: usize, a: f64) -> PyResult<f64> {
    projconst::curve_g(n, a).map_err(err)
}

#[pyfunction]
fn lambda_f_nab(n: usize, a: f64, b: f64) -> PyResult<f64> {
    projconst::FamilyParams::new(n, a, b).and_then(|p| projconst::lambda_f_nab(&p)).map_err(err)
}

#[pyfunction]
fn pairing(f: &PyFunctional, y: &PyVector) -> PyResult<f64> {
    projconst::pairing(&f.inner, &y.inner).map_err(err)
}

/// Exact norm of `x -> x - <f, x> y`.
#[pyfunction]
fn operator_norm(f: &PyFunctional, y: &PyVector) -> PyResult<f64> {
    projconst::operator_norm(&f.inner, &y.inner).map(|r| r.norm).map_err(err)
}

/// Norm by enumeration of sign vectors, with `tail_coords` coordinates
/// standing in for the tail.
#[pyfunction]
#[pyo3(signature = (f, y, tail_coords = 1))]
fn brute_force_norm(f: &PyFunctional, y: &PyVector, tail_coords: usize) -> PyResult<f64> {
    projconst::brute_force_norm(&f.inner, &y.inner, tail_coords).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, tol = DEFAULT_TOLERANCE))]
fn min_projection_norm(f: &PyFunctional, tol: f64) -> PyResult<PySolverResult> {
    let r = projconst::min_projection_norm(&f.inner, tol).map_err(err)?;
    Ok(PySolverResult {
        lambda: r.lambda,
        attained: r.attained,
        minimizer: r.minimizer.map(|inner| PyVector { inner }),
        iterations: r.iterations,
    })
}

/// `(attained, reason)`.
#[pyfunction]
fn attainment_decision(f: &PyFunctional) -> PyResult<(bool, &'static str)> {
    projconst::attainment_decision(&f.inner).map(|(a, tag)| (a, tag.as_str())).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, levels = DEFAULT_GAP_LEVELS.to_vec()))]
fn truncation_gaps(f: &PyFunctional, levels: Vec<u64>) -> PyResult<Vec<f64>> {
    projconst::truncation_gaps(&f.inner, &levels).map(|g| g.gaps).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (target, tol = DEFAULT_TOLERANCE, levels = DEFAULT_GAP_LEVELS.to_vec()))]
fn design_for_target(target: f64, tol: f64, levels: Vec<u64>) -> PyResult<PyCertificate> {
    design_for_target_with_levels(target, tol, &levels).map(|inner| PyCertificate { inner }).map_err(err)
}

#[pyfunction]
fn verify_certificate(c: &PyCertificate) -> PyResult<bool> {
    projconst::verify_certificate(&c.inner).map_err(err)
}

#[pymodule]
fn projconst_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunctional>()?;
    m.add_class::<PyVector>()?;
    m.add_class::<PySolverResult>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(blatter_cheney, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(h_an, m)?)?;
    m.add_function(wrap_pyfunction!(curve_g, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_f_nab, m)?)?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(operator_norm, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_norm, m)?)?;
    m.add_function(wrap_pyfunction!(min_projection_norm, m)?)?;
    m.add_function(wrap_pyfunction!(attainment_decision, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_gaps, m)?)?;
    m.add_function(wrap_pyfunction!(design_for_target, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    Ok(())
}
