//! Python bindings: configuration, sensing abilities, pattern design,
//! misalignment, coverage and the Monte-Carlo estimators.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use isac_thz_core::channel::LinkBudget;
use isac_thz_core::coverage::{coverage_probability as core_coverage, db_to_linear, CoverageQuery, LowerBoundMode};
use isac_thz_core::mcsim::{self, BlockerSharing, CoverageSim, McEstimate};
use isac_thz_core::misalignment;
use isac_thz_core::pattern::{optimal_allocation, PatternRequirement};
use isac_thz_core::report::{self, ComparePlan};
use isac_thz_core::sensing::{sensing_ability, SensingAbility, SensingPattern};
use isac_thz_core::{specfun, Error, Scheme};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(to_py)
}

fn lower_bound(name: &str) -> PyResult<LowerBoundMode> {
    name.parse().map_err(to_py)
}

fn sharing(name: &str) -> PyResult<BlockerSharing> {
    match name {
        "per_link" | "perlink" => Ok(BlockerSharing::PerLink),
        "shared" => Ok(BlockerSharing::Shared),
        other => Err(PyValueError::new_err(format!("unknown sharing '{other}'"))),
    }
}

/// Full parameter set of an analysis run.
#[pyclass(name = "Config", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: isac_thz_core::Config,
}

macro_rules! config_fields {
    ($($get:ident, $set:ident, $($path:ident).+ : $ty:ty;)*) => {
        #[pymethods]
        impl PyConfig {
            $(
                #[getter]
                fn $get(&self) -> $ty {
                    self.inner.$($path).+
                }
                #[setter]
                fn $set(&mut self, v: $ty) {
                    self.inner.$($path).+ = v;
                }
            )*
        }
    };
}

config_fields! {
    f_c, set_f_c, system.f_c: f64;
    k, set_k, system.k: f64;
    p_t, set_p_t, system.p_t: f64;
    tau, set_tau, system.tau: f64;
    n_rs, set_n_rs, system.n_rs: u64;
    lambda_b, set_lambda_b, deployment.lambda_b: f64;
    lambda_m, set_lambda_m, deployment.lambda_m: f64;
    lambda_s, set_lambda_s, deployment.lambda_s: f64;
    r_b, set_r_b, deployment.r_b: f64;
    n_b, set_n_b, deployment.n_b: u32;
    n_m, set_n_m, deployment.n_m: u32;
    v, set_v, deployment.v: f64;
    d_max_req, set_d_max_req, requirement.d_max_req: f64;
    v_max_req, set_v_max_req, requirement.v_max_req: f64;
}

#[pymethods]
impl PyConfig {
    #[new]
    fn new() -> Self {
        Self { inner: isac_thz_core::Config::default() }
    }

    /// Parses TOML text; relative table paths resolve against `base_dir`.
    #[staticmethod]
    #[pyo3(signature = (text, base_dir=None))]
    fn from_toml(text: &str, base_dir: Option<std::path::PathBuf>) -> PyResult<Self> {
        Ok(Self { inner: isac_thz_core::parse_config(text, base_dir.as_deref()).map_err(to_py)? })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self { inner: isac_thz_core::load_config(path).map_err(to_py)? })
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml_string()
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.system.validate().map_err(to_py)?;
        self.inner.deployment.validate().map_err(to_py)?;
        self.inner.requirement.validate().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Config(\n{})", self.inner.to_toml_string())
    }
}

fn ability_dict<'py>(py: Python<'py>, a: &SensingAbility) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("delta_r", a.delta_r)?;
    d.set_item("delta_db", a.delta_db)?;
    d.set_item("delta_v", a.delta_v)?;
    d.set_item("d_max", a.d_max.value())?;
    d.set_item("v_max", a.v_max.value())?;
    Ok(d)
}

fn estimate_dict<'py>(py: Python<'py>, e: &McEstimate, analytic: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mean", e.mean)?;
    d.set_item("std_error", e.std_error)?;
    d.set_item("trials", e.trials)?;
    if let Some(a) = analytic {
        d.set_item("analytic", a)?;
        d.set_item("sigmas_off", e.sigmas_off(a))?;
    }
    Ok(d)
}

/// Sensing ability of a scheme ("jsrs", "perfect", "5g", "ssb").
#[pyfunction]
#[pyo3(signature = (config, scheme_name="jsrs"))]
fn sensing_ability_of<'py>(py: Python<'py>, config: &PyConfig, scheme_name: &str) -> PyResult<Bound<'py, PyDict>> {
    let a = scheme(scheme_name)?.ability(&config.inner).map_err(to_py)?;
    ability_dict(py, &a)
}

/// Rows of the sensing-ability table as dicts.
#[pyfunction]
fn table2<'py>(py: Python<'py>, config: &PyConfig) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = report::emit_table2(&config.inner.system, &config.inner.deployment).map_err(to_py)?;
    rows.iter()
        .map(|r| {
            let d = ability_dict(py, &r.ability)?;
            d.set_item("signal", r.signal)?;
            d.set_item("U", r.u)?;
            d.set_item("V", r.v)?;
            d.set_item("B_s", r.b_s)?;
            d.set_item("T_s", r.t_s)?;
            d.set_item("f_c", r.f_c)?;
            Ok(d)
        })
        .collect()
}

/// Optimal (α, U, V) and the resulting pattern and ability.
#[pyfunction]
#[pyo3(signature = (config, d_max_req=None, v_max_req=None, n_rs=None))]
fn optimal_pattern<'py>(
    py: Python<'py>,
    config: &PyConfig,
    d_max_req: Option<f64>,
    v_max_req: Option<f64>,
    n_rs: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = &config.inner;
    let req = PatternRequirement {
        d_max_req: d_max_req.unwrap_or(c.requirement.d_max_req),
        v_max_req: v_max_req.unwrap_or(c.requirement.v_max_req),
        n_rs: n_rs.unwrap_or(c.system.n_rs),
    };
    let sys = isac_thz_core::SystemParams { n_rs: req.n_rs, ..c.system };
    let theta_b = c.deployment.theta_b();
    let alloc = optimal_allocation(&req, &sys, theta_b).map_err(to_py)?;
    let pat = SensingPattern::from_allocation(alloc.alpha, alloc.u, alloc.v, &sys).map_err(to_py)?;
    let d = ability_dict(py, &sensing_ability(&pat, &sys, theta_b).map_err(to_py)?)?;
    d.set_item("alpha", pat.alpha)?;
    d.set_item("alpha_raw", alloc.alpha_raw)?;
    d.set_item("U", pat.u)?;
    d.set_item("V", pat.v)?;
    d.set_item("N_s", pat.n_s)?;
    d.set_item("N_f", pat.n_f)?;
    d.set_item("B_s", pat.b_s)?;
    d.set_item("T_s", pat.t_s)?;
    Ok(d)
}

/// Misalignment breakdown (p_err, p_to, p_ms) of a scheme.
#[pyfunction]
#[pyo3(signature = (config, scheme_name="jsrs"))]
fn beam_misalignment<'py>(py: Python<'py>, config: &PyConfig, scheme_name: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = config.inner;
    let s = scheme(scheme_name)?;
    let b = py
        .detach(|| {
            let ab = s.ability(&c)?;
            misalignment::beam_misalignment(&c.deployment, &ab, c.system.tau)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p_err", b.p_err)?;
    d.set_item("p_to", b.p_to)?;
    d.set_item("p_ms", b.p_ms)?;
    d.set_item("mu_g", b.mu_g)?;
    Ok(d)
}

#[pyfunction]
fn blockage_probability(config: &PyConfig, r: f64) -> PyResult<f64> {
    misalignment::blockage_probability(&config.inner.deployment, r).map_err(to_py)
}

#[pyfunction]
fn timeout_probability(py: Python<'_>, config: &PyConfig) -> PyResult<f64> {
    let d = config.inner.deployment;
    py.detach(|| misalignment::timeout_probability(&d)).map_err(to_py)
}

#[pyfunction]
fn expected_closest_blockage(config: &PyConfig) -> PyResult<f64> {
    misalignment::expected_closest_blockage(&config.inner.deployment).map_err(to_py)
}

/// Coverage probability at serving distance r1 and threshold in dB.
#[pyfunction]
#[pyo3(signature = (config, r1, threshold_db, scheme_name="jsrs", lower_bound="theorem"))]
fn coverage_probability<'py>(
    py: Python<'py>,
    config: &PyConfig,
    r1: f64,
    threshold_db: f64,
    scheme_name: &str,
    lower_bound: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let c = config.inner;
    let s = scheme(scheme_name)?;
    let mode = lower_bound_mode(lower_bound)?;
    let res = py
        .detach(|| {
            let budget = LinkBudget::new(&c.system, &c.deployment)?;
            let ab = s.ability(&c)?;
            let q = CoverageQuery { lower_bound_mode: mode, ..CoverageQuery::new(r1, db_to_linear(threshold_db), s) };
            core_coverage(&q, &budget, &c.deployment, &c.system, &ab)
        })
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("p_cvp", res.p_cvp)?;
    d.set_item("p_cm", res.p_cm)?;
    d.set_item("p_ms", res.p_ms)?;
    d.set_item("abs_error", res.integral_abs_error)?;
    Ok(d)
}

fn lower_bound_mode(name: &str) -> PyResult<LowerBoundMode> {
    lower_bound(name)
}

#[pyfunction]
#[pyo3(signature = (config, r, trials=100_000, seed=1))]
fn estimate_blockage<'py>(py: Python<'py>, config: &PyConfig, r: f64, trials: u64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let d = config.inner.deployment;
    let e = py.detach(|| mcsim::estimate_blockage(&d, r, trials, seed)).map_err(to_py)?;
    estimate_dict(py, &e, misalignment::blockage_probability(&d, r).ok())
}

#[pyfunction]
#[pyo3(signature = (config, trials=100_000, seed=1, sharing_mode="per_link"))]
fn estimate_timeout<'py>(
    py: Python<'py>,
    config: &PyConfig,
    trials: u64,
    seed: u64,
    sharing_mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let d = config.inner.deployment;
    let sh = sharing(sharing_mode)?;
    let (e, a) = py
        .detach(|| Ok::<_, Error>((mcsim::estimate_timeout_with(&d, trials, seed, sh)?, misalignment::timeout_probability(&d)?)))
        .map_err(to_py)?;
    estimate_dict(py, &e, Some(a))
}

#[pyfunction]
#[pyo3(signature = (config, r1, threshold_db, scheme_name="jsrs", trials=100_000, seed=1, lower_bound="theorem", window_m=400.0))]
#[allow(clippy::too_many_arguments)]
fn estimate_coverage<'py>(
    py: Python<'py>,
    config: &PyConfig,
    r1: f64,
    threshold_db: f64,
    scheme_name: &str,
    trials: u64,
    seed: u64,
    lower_bound: &str,
    window_m: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = config.inner;
    let s = scheme(scheme_name)?;
    let mode = lower_bound_mode(lower_bound)?;
    let (e, analytic) = py
        .detach(|| {
            let budget = LinkBudget::new(&c.system, &c.deployment)?;
            let ab = s.ability(&c)?;
            let q = CoverageQuery { lower_bound_mode: mode, ..CoverageQuery::new(r1, db_to_linear(threshold_db), s) };
            let an = core_coverage(&q, &budget, &c.deployment, &c.system, &ab)?;
            let sim = CoverageSim {
                lower_bound_mode: mode,
                window_radius: window_m,
                ..CoverageSim::new(r1, db_to_linear(threshold_db), an.p_ms)
            };
            Ok::<_, Error>((mcsim::estimate_coverage_given_misalignment(&c.deployment, &budget, &c.system, &sim, trials, seed)?, an.p_cvp))
        })
        .map_err(to_py)?;
    estimate_dict(py, &e, Some(analytic))
}

/// Markdown comparison of all schemes on the given grids.
#[pyfunction]
#[pyo3(signature = (config, nb_grid=None, nrs_grid=None, r1_grid=None, threshold_db_grid=None, lower_bound="theorem"))]
fn compare_markdown(
    py: Python<'_>,
    config: &PyConfig,
    nb_grid: Option<Vec<f64>>,
    nrs_grid: Option<Vec<f64>>,
    r1_grid: Option<Vec<f64>>,
    threshold_db_grid: Option<Vec<f64>>,
    lower_bound: &str,
) -> PyResult<String> {
    let d = ComparePlan::default();
    let plan = ComparePlan {
        nb_grid: nb_grid.unwrap_or(d.nb_grid.clone()),
        nrs_grid: nrs_grid.unwrap_or(d.nrs_grid.clone()),
        r1_grid: r1_grid.unwrap_or(d.r1_grid.clone()),
        threshold_db_grid: threshold_db_grid.unwrap_or(d.threshold_db_grid.clone()),
        lower_bound_mode: lower_bound_mode(lower_bound)?,
        ..d
    };
    let c = config.inner;
    py.detach(|| report::run_compare(&c, &plan)).map(|r| r.markdown()).map_err(to_py)
}

#[pyfunction]
fn exp_integral_e1(x: f64) -> PyResult<f64> {
    specfun::exp_integral_e1(x).map_err(to_py)
}

#[pyfunction]
fn erfc(x: f64) -> f64 {
    specfun::erfc(x)
}

#[pymodule]
fn isac_thz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(sensing_ability_of, m)?)?;
    m.add_function(wrap_pyfunction!(table2, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(beam_misalignment, m)?)?;
    m.add_function(wrap_pyfunction!(blockage_probability, m)?)?;
    m.add_function(wrap_pyfunction!(timeout_probability, m)?)?;
    m.add_function(wrap_pyfunction!(expected_closest_blockage, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_blockage, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_timeout, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_coverage, m)?)?;
    m.add_function(wrap_pyfunction!(compare_markdown, m)?)?;
    m.add_function(wrap_pyfunction!(exp_integral_e1, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    Ok(())
}
