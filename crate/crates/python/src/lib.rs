//! Python bindings. Structured results come back as JSON strings; small
//! fixed-size results come back as tuples and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use tubedyn::checklist::{render_table, run_checklist, CheckConfig};
use tubedyn::dynamo::{self, LyapunovConvention, RadialFlowModel};
use tubedyn::geodesic::{self, GeodesicOptions, GeodesicState, SymmetryFactor, TimeMode};
use tubedyn::maps::{self, MapSpec};
use tubedyn::{riemann_at, ChartPoint, ExponentConvention, MetricField, MetricKind, MetricParams, TubeChart};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn name_to<T: DeserializeOwned>(what: &str, name: &str) -> PyResult<T> {
    serde_json::from_value(serde_json::Value::String(name.to_owned()))
        .map_err(|_| PyValueError::new_err(format!("unknown {what} '{name}'")))
}

fn json<T: Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(err)
}

#[allow(clippy::too_many_arguments)]
fn build_metric(
    kind: &str,
    lambda: f64,
    tau0: f64,
    v_r_mean: f64,
    t: f64,
    convention: &str,
    chart: &str,
) -> PyResult<MetricField> {
    let kind: MetricKind = name_to("metric", kind)?;
    let params = MetricParams {
        lambda,
        tau0,
        v_r_mean,
        t,
        exponent_convention: name_to::<ExponentConvention>("convention", convention)?,
        tube_chart: name_to::<TubeChart>("chart", chart)?,
    };
    MetricField::new(kind, params).map_err(err)
}

fn point(p: [f64; 3]) -> ChartPoint {
    ChartPoint::new(p[0], p[1], p[2])
}

/// Metric tensor `g_ij` at a chart point, as a 3x3 nested list.
#[pyfunction]
#[pyo3(signature = (kind, x, lambda_=1.0, tau0=0.0, v_r_mean=0.0, t=0.0, convention="doubled", chart="frenet"))]
#[allow(clippy::too_many_arguments)]
pub fn metric_at(
    kind: &str,
    x: [f64; 3],
    lambda_: f64,
    tau0: f64,
    v_r_mean: f64,
    t: f64,
    convention: &str,
    chart: &str,
) -> PyResult<Vec<Vec<f64>>> {
    let m = build_metric(kind, lambda_, tau0, v_r_mean, t, convention, chart)?;
    let g = m.metric_at(&point(x)).map_err(err)?;
    Ok((0..3).map(|i| (0..3).map(|j| g.get(i, j)).collect()).collect())
}

/// Christoffel symbols, Riemann, Ricci and scalar curvature at a point (JSON).
#[pyfunction]
#[pyo3(signature = (kind, x, lambda_=1.0, tau0=0.0, v_r_mean=0.0, t=0.0, convention="doubled", chart="frenet"))]
#[allow(clippy::too_many_arguments)]
pub fn curvature(
    kind: &str,
    x: [f64; 3],
    lambda_: f64,
    tau0: f64,
    v_r_mean: f64,
    t: f64,
    convention: &str,
    chart: &str,
) -> PyResult<String> {
    let m = build_metric(kind, lambda_, tau0, v_r_mean, t, convention, chart)?;
    json(&riemann_at(&m, &point(x)).map_err(err)?)
}

/// Scalar curvature only.
#[pyfunction]
#[pyo3(signature = (kind, x, lambda_=1.0, tau0=0.0, v_r_mean=0.0, t=0.0, convention="doubled", chart="frenet"))]
#[allow(clippy::too_many_arguments)]
pub fn scalar_curvature(
    kind: &str,
    x: [f64; 3],
    lambda_: f64,
    tau0: f64,
    v_r_mean: f64,
    t: f64,
    convention: &str,
    chart: &str,
) -> PyResult<f64> {
    let m = build_metric(kind, lambda_, tau0, v_r_mean, t, convention, chart)?;
    Ok(riemann_at(&m, &point(x)).map_err(err)?.scalar)
}

/// Spectrum of a 2x2 or 3x3 map given row-major, or of the cat map when
/// `entries` is omitted (JSON).
#[pyfunction]
#[pyo3(signature = (entries=None))]
pub fn map_spectrum(entries: Option<Vec<f64>>) -> PyResult<String> {
    let map = match entries {
        Some(e) => MapSpec::new("custom", e).map_err(err)?,
        None => MapSpec::cat(),
    };
    json(&maps::analyze(&map))
}

/// Iterate a 2x2 integer torus automorphism; returns `(points, report JSON)`.
#[pyfunction]
#[pyo3(signature = (steps, start=[0.5, 0.5], entries=None))]
pub fn torus_orbit(steps: usize, start: [f64; 2], entries: Option<Vec<f64>>) -> PyResult<(Vec<[f64; 2]>, String)> {
    let map = match entries {
        Some(e) => MapSpec::new("custom", e).map_err(err)?,
        None => MapSpec::cat(),
    };
    let (orbit, report) = maps::iterate_torus_map(&map, start, steps).map_err(err)?;
    Ok((orbit, json(&report)?))
}

/// `(λ_r, λ_θ, λ_s)` of the stretch metric.
#[pyfunction]
#[pyo3(signature = (v_r_mean, tau0, theta, t, convention="half_log"))]
pub fn lyapunov_exponents(v_r_mean: f64, tau0: f64, theta: f64, t: f64, convention: &str) -> PyResult<(f64, f64, f64)> {
    let flow = RadialFlowModel::new(v_r_mean).map_err(err)?;
    let conv: LyapunovConvention = name_to("convention", convention)?;
    let r = dynamo::finite_time_exponents(&flow, tau0, theta, t, conv).map_err(err)?;
    Ok((r.lambda_r, r.lambda_theta, r.lambda_s))
}

/// `(B_θ, B_s, B_r)`.
#[pyfunction]
pub fn magnetic_growth(v_r_mean: f64, tau0: f64, theta: f64, t: f64) -> PyResult<(f64, f64, f64)> {
    let flow = RadialFlowModel::new(v_r_mean).map_err(err)?;
    let b = dynamo::magnetic_growth(&flow, tau0, theta, t).map_err(err)?;
    Ok((b.b_theta, b.b_s, b.b_r))
}

#[pyfunction]
#[pyo3(signature = (v_r_mean, tau0=1e-3, theta=1.0, horizon=10.0, samples=50))]
pub fn anti_dynamo_check(v_r_mean: f64, tau0: f64, theta: f64, horizon: f64, samples: usize) -> PyResult<String> {
    let flow = RadialFlowModel::new(v_r_mean).map_err(err)?;
    json(&dynamo::anti_dynamo_check(&flow, tau0, theta, horizon, samples).map_err(err)?)
}

/// Integrate a geodesic with RK4 (JSON trajectory). `frozen_t` evaluates a
/// time-dependent metric at that fixed time instead of coupling it to the
/// integration parameter.
#[pyfunction]
#[pyo3(signature = (
    kind, x0, v0, dt=1e-3, t_end=1.0, stride=1, lambda_=1.0, tau0=0.0, v_r_mean=0.0,
    convention="doubled", chart="frenet", symmetry_factor=2, frozen_t=None
))]
#[allow(clippy::too_many_arguments)]
pub fn integrate_geodesic(
    kind: &str,
    x0: [f64; 3],
    v0: [f64; 3],
    dt: f64,
    t_end: f64,
    stride: usize,
    lambda_: f64,
    tau0: f64,
    v_r_mean: f64,
    convention: &str,
    chart: &str,
    symmetry_factor: u8,
    frozen_t: Option<f64>,
) -> PyResult<String> {
    let m = build_metric(kind, lambda_, tau0, v_r_mean, 0.0, convention, chart)?;
    let opts = GeodesicOptions {
        dt,
        t_end,
        stride,
        symmetry_factor: SymmetryFactor::from_value(symmetry_factor).map_err(err)?,
        time_mode: frozen_t.map_or(TimeMode::default(), TimeMode::Frozen),
        ..GeodesicOptions::default()
    };
    let traj = geodesic::integrate(&m, &GeodesicState::new(x0, v0), &opts).map_err(err)?;
    json(&traj)
}

/// Run the reproduction checklist. `config` is an optional JSON object with
/// the same keys as the `[check]` table of the CLI config.
#[pyfunction]
#[pyo3(signature = (config=None, table=false))]
pub fn check_paper(config: Option<&str>, table: bool) -> PyResult<String> {
    let cfg: CheckConfig = match config {
        Some(s) => serde_json::from_str(s).map_err(err)?,
        None => CheckConfig::default(),
    };
    let report = run_checklist(&cfg);
    if table {
        Ok(render_table(&report))
    } else {
        json(&report)
    }
}

#[pymodule]
fn tubedyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(metric_at, m)?)?;
    m.add_function(wrap_pyfunction!(curvature, m)?)?;
    m.add_function(wrap_pyfunction!(scalar_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(map_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(torus_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(magnetic_growth, m)?)?;
    m.add_function(wrap_pyfunction!(anti_dynamo_check, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(check_paper, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
