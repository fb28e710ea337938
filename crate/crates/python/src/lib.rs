//! Python bindings: `import qortho`.
//!
//! Complex arguments accept Python `complex`, `float` or `int`. Domain errors raise
//! `ValueError`; numerical breakdowns raise `qortho.ConvergenceError`.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qortho::hyper::{
    phi_series_detail, rogers_6w5_rhs as rogers_rhs, very_well_poised as vwp, PhiSpec,
};
use qortho::qcore::qpoch_infinite_detail;
use qortho::qfun::{self, EvaluationPoint, ReducedParams};
use qortho::quad::QuadratureSpec;
use qortho::verify::{self, CheckConfig, IdentityId, SweepSpec};
use qortho::{Complex64, QBase, QError, TruncationPolicy};

create_exception!(
    qortho,
    ConvergenceError,
    PyArithmeticError,
    "A product, series or quadrature failed to converge."
);

fn py_err(e: QError) -> PyErr {
    match e {
        QError::Domain(msg) => PyValueError::new_err(msg),
        other => ConvergenceError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for qortho::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn base(q: Complex64) -> PyResult<QBase> {
    QBase::new(q).py()
}

fn policy(rel_tol: f64, max_terms: usize) -> PyResult<TruncationPolicy> {
    TruncationPolicy::new(rel_tol, max_terms).py()
}

/// The four parameters `(α, β, γ, δ)` with `γ, δ ≠ 0`.
#[pyclass(frozen, skip_from_py_object, name = "ParamSet4", module = "qortho")]
#[derive(Clone, Copy)]
struct PyParamSet4(qfun::ParamSet4);

#[pymethods]
impl PyParamSet4 {
    #[new]
    fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> PyResult<Self> {
        qfun::ParamSet4::new(alpha, beta, gamma, delta)
            .py()
            .map(Self)
    }

    /// `(aγ, bδ, γ, δ)`.
    #[staticmethod]
    fn reduced(a: Complex64, gamma: Complex64, delta: Complex64) -> PyResult<Self> {
        qfun::ParamSet4::reduced(a, gamma, delta).py().map(Self)
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.0.alpha
    }

    #[getter]
    fn beta(&self) -> Complex64 {
        self.0.beta
    }

    #[getter]
    fn gamma(&self) -> Complex64 {
        self.0.gamma
    }

    #[getter]
    fn delta(&self) -> Complex64 {
        self.0.delta
    }

    /// `α/γ`.
    fn alpha_ratio(&self) -> Complex64 {
        self.0.alpha_ratio()
    }

    /// `β/δ`.
    fn beta_ratio(&self) -> Complex64 {
        self.0.beta_ratio()
    }

    /// `(β, α, δ, γ)`.
    fn mirrored(&self) -> Self {
        Self(self.0.mirrored())
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "ParamSet4(alpha={}, beta={}, gamma={}, delta={})",
            p.alpha, p.beta, p.gamma, p.delta
        )
    }
}

/// Outcome of one identity check.
#[pyclass(frozen, name = "VerificationReport", module = "qortho")]
struct PyReport(verify::VerificationReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn identity(&self) -> &'static str {
        self.0.identity().as_str()
    }

    #[getter]
    fn inputs<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in self.0.inputs().iter() {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    #[getter]
    fn lhs(&self) -> Complex64 {
        self.0.lhs()
    }

    #[getter]
    fn rhs(&self) -> Complex64 {
        self.0.rhs()
    }

    #[getter]
    fn abs_residual(&self) -> f64 {
        self.0.abs_residual()
    }

    #[getter]
    fn rel_residual(&self) -> f64 {
        self.0.rel_residual()
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.0.tolerance()
    }

    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }

    #[getter]
    fn flags(&self) -> Vec<String> {
        self.0.flags().iter().map(|f| format!("{f:?}")).collect()
    }

    /// The report as the JSON object written by the command-line tool.
    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("report serializes")
    }

    fn __bool__(&self) -> bool {
        self.0.passed()
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(identity={}, rel_residual={:e}, tolerance={:e}, passed={})",
            self.0.identity(),
            self.0.rel_residual(),
            self.0.tolerance(),
            self.0.passed()
        )
    }
}

fn config(tol: Option<f64>, nodes: usize, max_nodes: usize) -> PyResult<CheckConfig> {
    if tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
        return Err(PyValueError::new_err("tol must be positive"));
    }
    Ok(CheckConfig {
        quad: QuadratureSpec::new(nodes, max_nodes, 1e-10).py()?,
        trunc: TruncationPolicy::default(),
        tolerance: tol,
    })
}

fn report(r: qortho::Result<verify::VerificationReport>) -> PyResult<PyReport> {
    r.py().map(PyReport)
}

/// `(a;q)_n`, or `(a;q)_∞` when `n` is omitted.
#[pyfunction]
#[pyo3(signature = (a, q, n=None, rel_tol=1e-14, max_terms=10_000))]
fn qpoch(
    a: Complex64,
    q: Complex64,
    n: Option<usize>,
    rel_tol: f64,
    max_terms: usize,
) -> PyResult<Complex64> {
    let q = base(q)?;
    match n {
        Some(n) => Ok(qortho::qpoch_finite(a, q, n)),
        None => Ok(qpoch_infinite_detail(a, q, &policy(rel_tol, max_terms)?)
            .py()?
            .value),
    }
}

/// Gaussian binomial coefficient `[n k]_q`.
#[pyfunction]
fn qbinom(n: usize, k: usize, q: Complex64) -> PyResult<Complex64> {
    qortho::qbinom(n, k, base(q)?).py()
}

/// `r+1φr(numerators; denominators; q, z)`; returns `(value, terms_used)`.
#[pyfunction]
#[pyo3(signature = (numerators, denominators, q, z, rel_tol=1e-14, max_terms=10_000))]
fn phi_series(
    numerators: Vec<Complex64>,
    denominators: Vec<Complex64>,
    q: Complex64,
    z: Complex64,
    rel_tol: f64,
    max_terms: usize,
) -> PyResult<(Complex64, usize)> {
    let spec = PhiSpec::new(numerators, denominators, base(q)?, z).py()?;
    let s = phi_series_detail(&spec, &policy(rel_tol, max_terms)?).py()?;
    Ok((s.value, s.terms))
}

/// Very-well-poised `r+1Wr(a1; rest; q, z)`.
#[pyfunction]
#[pyo3(signature = (a1, rest, q, z, rel_tol=1e-14, max_terms=10_000))]
fn very_well_poised(
    a1: Complex64,
    rest: Vec<Complex64>,
    q: Complex64,
    z: Complex64,
    rel_tol: f64,
    max_terms: usize,
) -> PyResult<Complex64> {
    vwp(a1, &rest, base(q)?, z, &policy(rel_tol, max_terms)?).py()
}

/// Product side of the Rogers `6W5` summation.
#[pyfunction]
fn rogers_6w5_rhs(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: Complex64,
) -> PyResult<Complex64> {
    rogers_rhs(a, b, c, d, base(q)?, &TruncationPolicy::default()).py()
}

/// `C_n(e^{iθ})`.
#[pyfunction]
fn big_c(n: usize, theta: f64, params: &PyParamSet4, q: Complex64) -> PyResult<Complex64> {
    Ok(qfun::big_c_eval(
        n,
        EvaluationPoint::new(theta),
        &params.0,
        base(q)?,
    ))
}

/// Coefficients of `e^{i(2k-n)θ}` in `C_n`, for `k = 0..=n`.
#[pyfunction]
fn big_c_coefficients(n: usize, params: &PyParamSet4, q: Complex64) -> PyResult<Vec<Complex64>> {
    Ok(qfun::big_c_coefficients(n, &params.0, base(q)?))
}

/// `Φ_n(x, y)`.
#[pyfunction]
fn phi(
    n: usize,
    x: Complex64,
    y: Complex64,
    params: &PyParamSet4,
    q: Complex64,
) -> PyResult<Complex64> {
    Ok(qfun::phi_eval(n, x, y, &params.0, base(q)?))
}

/// Continuous q-ultraspherical polynomial `C_n(cos θ; β|q)`.
#[pyfunction]
fn cq_ultraspherical(n: usize, theta: f64, beta: Complex64, q: Complex64) -> PyResult<Complex64> {
    Ok(qfun::cq_ultraspherical(n, theta, beta, base(q)?))
}

/// Weight function `ω(θ)`.
#[pyfunction]
fn weight(theta: f64, params: &PyParamSet4, q: Complex64) -> PyResult<Complex64> {
    qfun::weight_omega(
        EvaluationPoint::new(theta),
        &params.0,
        base(q)?,
        &TruncationPolicy::default(),
    )
    .py()
}

/// Normalisation `h_n(a)`.
#[pyfunction]
fn h_norm(n: usize, a: Complex64, q: Complex64) -> PyResult<Complex64> {
    qfun::h_norm(n, a, base(q)?, &TruncationPolicy::default()).py()
}

/// Connection coefficients of degree `m` for reduced parameters `(a, b)` and the product `γδ`.
#[pyfunction]
fn connection_coeffs(
    m: usize,
    a: Complex64,
    b: Complex64,
    gamma_delta: Complex64,
    q: Complex64,
) -> PyResult<Vec<Complex64>> {
    let r = ReducedParams::new(a, b).py()?;
    qfun::connection_coeffs(m, &r, gamma_delta, base(q)?).py()
}

/// Positive root governing the growth bound of `C_n` at degree `n`.
#[pyfunction]
fn growth_root(n: usize, params: &PyParamSet4, q: Complex64) -> PyResult<f64> {
    qfun::growth_root(n, &params.0, base(q)?).py()
}

/// Orthogonality of `C_m` against `C_n` on the full circle.
#[pyfunction]
#[pyo3(signature = (params, q, m, n, tol=None, nodes=256, max_nodes=8192))]
fn check_orthogonality(
    params: &PyParamSet4,
    q: Complex64,
    m: usize,
    n: usize,
    tol: Option<f64>,
    nodes: usize,
    max_nodes: usize,
) -> PyResult<PyReport> {
    report(verify::check_thm_1_1(
        &params.0,
        base(q)?,
        m,
        n,
        &config(tol, nodes, max_nodes)?,
    ))
}

/// Bilinear generating function at `(s, t)`.
#[pyfunction]
#[pyo3(signature = (params, s, t, q, tol=None, nodes=256, max_nodes=8192))]
fn check_bilinear(
    params: &PyParamSet4,
    s: Complex64,
    t: Complex64,
    q: Complex64,
    tol: Option<f64>,
    nodes: usize,
    max_nodes: usize,
) -> PyResult<PyReport> {
    report(verify::check_thm_1_2(
        &params.0,
        s,
        t,
        base(q)?,
        &config(tol, nodes, max_nodes)?,
    ))
}

/// Half-circle relation between `C_m` and `C_n` for parameters `(aγ, bδ, γ, δ)`.
#[pyfunction]
#[pyo3(signature = (a, b, gamma, delta, q, m, n, tol=None, nodes=256, max_nodes=8192))]
#[allow(clippy::too_many_arguments)]
fn check_half_circle(
    a: Complex64,
    b: Complex64,
    gamma: Complex64,
    delta: Complex64,
    q: Complex64,
    m: usize,
    n: usize,
    tol: Option<f64>,
    nodes: usize,
    max_nodes: usize,
) -> PyResult<PyReport> {
    let r = ReducedParams::new(a, b).py()?;
    report(verify::check_thm_1_3(
        &r,
        gamma,
        delta,
        base(q)?,
        m,
        n,
        &config(tol, nodes, max_nodes)?,
    ))
}

/// Any identity through the seeded sampler: `draws` reports from `seed`.
#[pyfunction]
#[pyo3(signature = (identity, seed, draws, m_max=None, n_max=None, tol=None))]
fn sweep(
    identity: &str,
    seed: u64,
    draws: usize,
    m_max: Option<usize>,
    n_max: Option<usize>,
    tol: Option<f64>,
) -> PyResult<Vec<PyReport>> {
    let id: IdentityId = identity.parse().py()?;
    let mut spec = SweepSpec::new(id, seed, draws);
    spec.m_max = m_max.unwrap_or(spec.m_max);
    spec.n_max = n_max.unwrap_or(spec.n_max);
    let reports = verify::run_sweep(id, &spec, &config(tol, 256, 8192)?).py()?;
    Ok(reports.into_iter().map(PyReport).collect())
}

/// Names accepted by `sweep`.
#[pyfunction]
fn identities() -> Vec<&'static str> {
    IdentityId::ALL.iter().map(|id| id.as_str()).collect()
}

#[pymodule]
#[pyo3(name = "qortho")]
fn qortho_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    m.add_class::<PyParamSet4>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(qpoch, m)?)?;
    m.add_function(wrap_pyfunction!(qbinom, m)?)?;
    m.add_function(wrap_pyfunction!(phi_series, m)?)?;
    m.add_function(wrap_pyfunction!(very_well_poised, m)?)?;
    m.add_function(wrap_pyfunction!(rogers_6w5_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(big_c, m)?)?;
    m.add_function(wrap_pyfunction!(big_c_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(cq_ultraspherical, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(h_norm, m)?)?;
    m.add_function(wrap_pyfunction!(connection_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(growth_root, m)?)?;
    m.add_function(wrap_pyfunction!(check_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(check_bilinear, m)?)?;
    m.add_function(wrap_pyfunction!(check_half_circle, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    Ok(())
}
