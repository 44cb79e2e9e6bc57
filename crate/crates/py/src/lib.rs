//! Python bindings: matrices, the update maps, simulation, balance checks,
//! fixed-point classification and the Monte Carlo estimator.

use appraisal_dynamics::experiments::{chernoff_sample_size as chernoff, mc_convergence_probability, InitKind, McConfig};
use appraisal_dynamics::{self as core, ModelKind, SimConfig, StepOutcome, ToleranceConfig};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Resolves a model name (`hbm`, `ibm`, `hbm-memory`) and its memory weight.
pub fn parse_model(name: &str, epsilon: Option<f64>) -> Result<ModelKind, String> {
    match (name, epsilon) {
        ("hbm", _) => Ok(ModelKind::Hbm),
        ("ibm", _) => Ok(ModelKind::Ibm),
        ("hbm-memory", Some(e)) => ModelKind::hbm_memory(e).map_err(|e| e.to_string()),
        ("hbm-memory", None) => Err("hbm-memory needs epsilon".into()),
        (other, _) => Err(format!("unknown model {other:?}")),
    }
}

pub fn parse_init(name: &str, a: f64, x_min: f64, x_max: f64) -> Result<InitKind, String> {
    match name {
        "nz-row" => Ok(InitKind::UniformNzRow { a }),
        "rs-symm" => Ok(InitKind::RsSymm),
        "interval" => Ok(InitKind::UniformInterval { x_min, x_max }),
        other => Err(format!("unknown init {other:?}")),
    }
}

#[pyclass(name = "AppraisalMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMatrix {
    inner: core::AppraisalMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = core::AppraisalMatrix::from_rows(&rows).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = core::io::matrix_from_str(text).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    fn to_text(&self) -> String {
        core::io::matrix_to_text(&self.inner)
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("index ({i}, {j}) out of range for n = {n}")));
        }
        Ok(self.inner.get(i, j))
    }

    fn max_norm(&self) -> f64 {
        self.inner.max_norm()
    }

    fn min_abs(&self) -> f64 {
        self.inner.min_abs()
    }

    fn sign_pattern(&self) -> Vec<Vec<i8>> {
        self.inner.sign_pattern(&tol()).to_rows()
    }

    fn is_nz_row(&self) -> bool {
        self.inner.is_nz_row(&tol())
    }

    fn is_s_symm_pos(&self) -> bool {
        self.inner.is_s_symm_pos(&tol())
    }

    fn is_rs_symm_pos(&self) -> bool {
        self.inner.is_rs_symm_pos(&tol())
    }

    /// Positive weights that make `diag(gamma) X` symmetric, if any exist.
    fn find_gamma(&self) -> Option<Vec<f64>> {
        self.inner.find_gamma(&tol()).map(|w| w.gamma)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("AppraisalMatrix({:?})", self.inner.to_rows())
    }
}

fn next_state(outcome: StepOutcome) -> PyResult<PyMatrix> {
    match outcome {
        StepOutcome::Next(inner) => Ok(PyMatrix { inner }),
        StepOutcome::ZeroRow(row) => Err(PyArithmeticError::new_err(format!("row {row} is zero; next state undefined"))),
    }
}

/// One step of the named model.
#[pyfunction]
#[pyo3(signature = (x, model, epsilon=None))]
fn step(x: &PyMatrix, model: &str, epsilon: Option<f64>) -> PyResult<PyMatrix> {
    let kind = parse_model(model, epsilon).map_err(PyValueError::new_err)?;
    next_state(kind.step(&x.inner, &tol()).map_err(value_err)?)
}

#[pyfunction]
#[pyo3(signature = (x0, model, epsilon=None, max_steps=10_000, convergence_tol=1e-12))]
fn simulate<'py>(
    py: Python<'py>,
    x0: &PyMatrix,
    model: &str,
    epsilon: Option<f64>,
    max_steps: usize,
    convergence_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = parse_model(model, epsilon).map_err(PyValueError::new_err)?;
    let cfg = SimConfig {
        max_steps,
        convergence_tol,
        ..SimConfig::default()
    };
    let traj = core::simulate(&x0.inner, kind, &cfg, &tol()).map_err(value_err)?;
    let out = PyDict::new(py);
    let (reason, zero_row) = match traj.stop_reason {
        core::StopReason::Converged => ("converged", None),
        core::StopReason::BudgetExhausted => ("budget_exhausted", None),
        core::StopReason::ZeroRowEncountered { t, row } => ("zero_row", Some((t, row))),
    };
    out.set_item("stop_reason", reason)?;
    out.set_item("zero_row", zero_row)?;
    out.set_item("final_time", traj.final_time())?;
    out.set_item("balance_time", traj.balance_time)?;
    out.set_item("max_norm", traj.summaries.iter().map(|s| s.max_norm).collect::<Vec<_>>())?;
    out.set_item("min_abs", traj.summaries.iter().map(|s| s.min_abs).collect::<Vec<_>>())?;
    out.set_item(
        "final",
        PyMatrix {
            inner: traj.final_state().clone(),
        },
    )?;
    Ok(out)
}

/// `(balanced, factions)`; isolated blocks are balanced separately.
#[pyfunction]
fn is_socially_balanced(x: &PyMatrix) -> (bool, Option<Vec<Vec<usize>>>) {
    let r = core::is_balanced_multi(&x.inner, &tol());
    (r.balanced, r.factions.map(|f| f.groups()))
}

fn fixed_point_dict<'py>(py: Python<'py>, c: core::FixedPointClass) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("member", c.member)?;
    out.set_item("rank_one", c.rank_one)?;
    out.set_item("residual", c.residual)?;
    out.set_item("partition", c.partition)?;
    Ok(out)
}

#[pyfunction]
fn classify_q_hbm<'py>(py: Python<'py>, x: &PyMatrix) -> PyResult<Bound<'py, PyDict>> {
    fixed_point_dict(py, core::classify_q_hbm(&x.inner, &tol()))
}

#[pyfunction]
fn classify_q_ibm<'py>(py: Python<'py>, x: &PyMatrix) -> PyResult<Bound<'py, PyDict>> {
    fixed_point_dict(py, core::classify_q_ibm(&x.inner, &tol()))
}

#[pyfunction]
fn chernoff_sample_size(epsilon: f64, xi: f64) -> PyResult<u64> {
    chernoff(epsilon, xi).map_err(value_err)
}

/// Returns `(p_hat, std_err, successes)`.
#[pyfunction]
#[pyo3(signature = (n, model, trials, seed=0, init="nz-row", epsilon=None, a=1.0, x_min=-1.0, x_max=1.0))]
#[allow(clippy::too_many_arguments)]
fn mc_probability(
    py: Python<'_>,
    n: usize,
    model: &str,
    trials: u64,
    seed: u64,
    init: &str,
    epsilon: Option<f64>,
    a: f64,
    x_min: f64,
    x_max: f64,
) -> PyResult<(f64, f64, u64)> {
    let kind = parse_model(model, epsilon).map_err(PyValueError::new_err)?;
    let init = parse_init(init, a, x_min, x_max).map_err(PyValueError::new_err)?;
    let cfg = McConfig::new(n, kind, init, trials, seed);
    let r = py
        .detach(|| mc_convergence_probability(&cfg, &tol()))
        .map_err(value_err)?;
    Ok((r.p_hat, r.std_err, r.successes))
}

#[pymodule]
fn appraisal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(is_socially_balanced, m)?)?;
    m.add_function(wrap_pyfunction!(classify_q_hbm, m)?)?;
    m.add_function(wrap_pyfunction!(classify_q_ibm, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_sample_size, m)?)?;
    m.add_function(wrap_pyfunction!(mc_probability, m)?)?;
    Ok(())
}
