//! Geodesic integration `dv^i/dt + Γ^i_jk v^j v^k = 0` on catalog metrics,
//! with closed-form cross-checks for the Arnold and stretch metrics.

use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::curvature::{christoffel_with, Christoffel};
use crate::diff::DiffScheme;
use crate::dynamo::{finite_time_exponents, LyapunovConvention, RadialFlowModel};
use crate::error::{Error, Result};
use crate::metric::{Admissibility, ExponentConvention, MetricField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub x: ChartPoint,
    pub v: [f64; 3],
}

impl GeodesicState {
    pub fn new(x: [f64; 3], v: [f64; 3]) -> Self {
        Self {
            x: ChartPoint::from_array(x),
            v,
        }
    }

    fn to_vec(self) -> [f64; 6] {
        let x = self.x.to_array();
        [x[0], x[1], x[2], self.v[0], self.v[1], self.v[2]]
    }

    fn from_vec(y: [f64; 6]) -> Self {
        Self::new([y[0], y[1], y[2]], [y[3], y[4], y[5]])
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.v.iter().all(|v| v.is_finite())
    }
}

/// How the off-diagonal terms of `Γ^i_jk v^j v^k` are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryFactor {
    /// Each unordered pair `{j, k}` counted once (cross terms without the 2).
    One,
    /// The full double sum over `(j, k)`.
    #[default]
    Two,
}

impl SymmetryFactor {
    pub fn value(self) -> u8 {
        match self {
            SymmetryFactor::One => 1,
            SymmetryFactor::Two => 2,
        }
    }

    pub fn from_value(v: u8) -> Result<Self> {
        match v {
            1 => Ok(SymmetryFactor::One),
            2 => Ok(SymmetryFactor::Two),
            _ => Err(Error::InvalidInput(format!("symmetry factor must be 1 or 2, got {v}"))),
        }
    }
}

/// Relation between the integration parameter and the metric's own time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "t0")]
pub enum TimeMode {
    /// Metric time is `t0 + τ` along the trajectory.
    Coupled(f64),
    /// Metric evaluated at fixed time `t0`.
    Frozen(f64),
}

impl Default for TimeMode {
    fn default() -> Self {
        TimeMode::Coupled(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Record every `stride`-th step (the final state is always recorded).
    pub stride: usize,
    pub symmetry_factor: SymmetryFactor,
    pub time_mode: TimeMode,
    pub scheme: DiffScheme,
    /// Step-doubling local error estimate (two extra half steps per step).
    pub error_estimate: bool,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            stride: 1,
            symmetry_factor: SymmetryFactor::Two,
            time_mode: TimeMode::default(),
            scheme: DiffScheme::default(),
            error_estimate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDerivative {
    pub dx: [f64; 3],
    pub dv: [f64; 3],
}

fn acceleration(gamma: &Christoffel, v: &[f64; 3], factor: SymmetryFactor) -> [f64; 3] {
    match factor {
        SymmetryFactor::Two => gamma.contract(v, v).map(|a| -a),
        SymmetryFactor::One => {
            let mut out = [0.0; 3];
            for (i, o) in out.iter_mut().enumerate() {
                for j in 0..3 {
                    for k in j..3 {
                        *o -= gamma.get(i, j, k) * v[j] * v[k];
                    }
                }
            }
            out
        }
    }
}

/// `(dx/dt, dv/dt) = (v, −Γ^i_jk v^j v^k)`.
pub fn geodesic_rhs(
    metric: &MetricField,
    state: &GeodesicState,
    factor: SymmetryFactor,
) -> Result<StateDerivative> {
    rhs_with(metric, state, factor, DiffScheme::default())
}

fn rhs_with(
    metric: &MetricField,
    state: &GeodesicState,
    factor: SymmetryFactor,
    scheme: DiffScheme,
) -> Result<StateDerivative> {
    let gamma = christoffel_with(metric, &state.x, scheme)?;
    Ok(StateDerivative {
        dx: state.v,
        dv: acceleration(&gamma, &state.v, factor),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: GeodesicState,
    /// `g_ij v^i v^j`.
    pub speed2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Termination {
    Completed,
    LeftDomain { t: f64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub termination: Termination,
    /// Largest step-doubling error estimate (0 when estimation is off).
    pub max_step_error: f64,
}

impl Trajectory {
    pub fn truncated(&self) -> bool {
        matches!(self.termination, Termination::LeftDomain { .. })
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectories hold at least the initial sample")
    }
}

struct Integrator<'a> {
    metric: &'a MetricField,
    opts: &'a GeodesicOptions,
}

impl Integrator<'_> {
    fn metric_at_time(&self, tau: f64) -> MetricField {
        if !self.metric.is_time_dependent() {
            return self.metric.clone();
        }
        match self.opts.time_mode {
            TimeMode::Coupled(t0) => self.metric.with_time(t0 + tau),
            TimeMode::Frozen(t0) => self.metric.with_time(t0),
        }
    }

    fn f(&self, tau: f64, y: [f64; 6]) -> Result<[f64; 6]> {
        let state = GeodesicState::from_vec(y);
        if !state.is_finite() {
            return Err(Error::DegenerateMetric {
                point: state.x,
                reason: "non-finite state".into(),
            });
        }
        let d = rhs_with(
            &self.metric_at_time(tau),
            &state,
            self.opts.symmetry_factor,
            self.opts.scheme,
        )?;
        Ok([d.dx[0], d.dx[1], d.dx[2], d.dv[0], d.dv[1], d.dv[2]])
    }

    fn rk4(&self, tau: f64, y: [f64; 6], h: f64) -> Result<[f64; 6]> {
        let axpy = |a: &[f64; 6], s: f64, b: &[f64; 6]| {
            let mut out = *a;
            for (o, v) in out.iter_mut().zip(b) {
                *o += s * v;
            }
            out
        };
        let k1 = self.f(tau, y)?;
        let k2 = self.f(tau + 0.5 * h, axpy(&y, 0.5 * h, &k1))?;
        let k3 = self.f(tau + 0.5 * h, axpy(&y, 0.5 * h, &k2))?;
        let k4 = self.f(tau + h, axpy(&y, h, &k3))?;
        let mut out = y;
        for i in 0..6 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(out)
    }

    fn speed2(&self, tau: f64, state: &GeodesicState) -> Result<f64> {
        let g = self.metric_at_time(tau).metric_at(&state.x)?;
        Ok(g.contract(&state.v, &state.v))
    }

    fn sample(&self, tau: f64, y: [f64; 6]) -> Result<TrajectorySample> {
        let state = GeodesicState::from_vec(y);
        Ok(TrajectorySample {
            t: tau,
            state,
            speed2: self.speed2(tau, &state)?,
        })
    }
}

/// Fixed-step classical RK4 integration from `s0` over `[0, t_end]`.
///
/// If a step leaves the admissible domain the integration stops and the
/// trajectory so far is returned with `Termination::LeftDomain`.
pub fn integrate(
    metric: &MetricField,
    s0: &GeodesicState,
    opts: &GeodesicOptions,
) -> Result<Trajectory> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {}", opts.dt)));
    }
    if !(opts.t_end > 0.0 && opts.t_end.is_finite()) {
        return Err(Error::NonPositiveTime(opts.t_end));
    }
    if opts.stride == 0 {
        return Err(Error::InvalidInput("stride must be at least 1".into()));
    }
    let integ = Integrator { metric, opts };
    if integ.metric_at_time(0.0).admissibility(&s0.x) != Admissibility::Admissible {
        integ.metric_at_time(0.0).metric_at(&s0.x)?;
    }

    let steps = (opts.t_end / opts.dt - 1e-9).ceil().max(1.0) as usize;
    let mut y = s0.to_vec();
    let mut samples = vec![integ.sample(0.0, y)?];
    let mut termination = Termination::Completed;
    let mut max_err: f64 = 0.0;
    let mut last_recorded = 0;

    for n in 0..steps {
        let tau = n as f64 * opts.dt;
        let tau_next = if n + 1 == steps {
            opts.t_end
        } else {
            (n + 1) as f64 * opts.dt
        };
        let h = tau_next - tau;
        let stepped = integ.rk4(tau, y, h).and_then(|full| {
            if opts.error_estimate {
                let half = integ.rk4(tau, y, 0.5 * h)?;
                let two_half = integ.rk4(tau + 0.5 * h, half, 0.5 * h)?;
                let err = full
                    .iter()
                    .zip(&two_half)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
                    / 15.0;
                max_err = max_err.max(err);
            }
            // the new state itself must be admissible
            let sample = integ.sample(tau_next, full)?;
            Ok((full, sample))
        });
        match stepped {
            Ok((next, sample)) => {
                y = next;
                if (n + 1) % opts.stride == 0 || n + 1 == steps {
                    samples.push(sample);
                    last_recorded = n + 1;
                }
            }
            Err(e) => {
                if last_recorded != n {
                    samples.push(integ.sample(tau, y)?);
                }
                termination = Termination::LeftDomain {
                    t: tau,
                    reason: e.to_string(),
                };
                break;
            }
        }
    }

    Ok(Trajectory {
        samples,
        termination,
        max_step_error: max_err,
    })
}

/// `max |speed²(t) − speed²(0)| / speed²(0)`.
pub fn speed_drift(traj: &Trajectory) -> Result<f64> {
    if traj.samples.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let s0 = traj.samples[0].speed2;
    if s0 == 0.0 {
        return Err(Error::ZeroSpeed);
    }
    Ok(traj
        .samples
        .iter()
        .fold(0.0f64, |m, s| m.max((s.speed2 - s0).abs()))
        / s0.abs())
}

/// Integrate forward, reverse the velocity, integrate back; returns the
/// largest deviation of position and velocity from the start.
pub fn time_reversal_error(
    metric: &MetricField,
    s0: &GeodesicState,
    opts: &GeodesicOptions,
) -> Result<f64> {
    let forward = integrate(metric, s0, opts)?;
    if forward.truncated() {
        return Err(Error::InvalidInput("forward run left the domain".into()));
    }
    let end = forward.last().state;
    let reversed = GeodesicState {
        x: end.x,
        v: end.v.map(|v| -v),
    };
    let back = integrate(metric, &reversed, opts)?;
    let fin = back.last().state;
    let dx = s0
        .x
        .to_array()
        .iter()
        .zip(fin.x.to_array())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let dv = s0
        .v
        .iter()
        .zip(fin.v)
        .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
    Ok(dx.max(dv))
}

/// Closed-form velocities `v¹ = v₀ e^{λ(z + v³t)}`, `v² = v₀ e^{−λ(z − v³t)}`
/// with `z = z₀ + v³ t`, as printed (constant `v³` assumed).
pub fn arnold_closed_form(v0: f64, lambda: f64, v3: f64, z0: f64, t: f64) -> (f64, f64) {
    let z = z0 + v3 * t;
    (
        v0 * (lambda * (z + v3 * t)).exp(),
        v0 * (-lambda * (z - v3 * t)).exp(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSample {
    pub t: f64,
    pub numeric: [f64; 3],
    pub closed_form: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArnoldComparison {
    pub symmetry_factor: u8,
    pub samples: Vec<ClosedFormSample>,
    pub max_rel_diff_v1: f64,
    pub max_rel_diff_v2: f64,
    pub max_v3_change: f64,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Numerically integrates the Arnold geodesic (doubled convention) from the
/// closed form's own `t = 0` velocities, which satisfy the balance
/// `e^{−2λz}(v¹)² = e^{2λz}(v²)²`, and compares against [`arnold_closed_form`].
pub fn compare_arnold_closed_form(
    v0: f64,
    lambda: f64,
    v3: f64,
    z0: f64,
    t_end: f64,
    dt: f64,
    stride: usize,
    factor: SymmetryFactor,
) -> Result<ArnoldComparison> {
    let metric = MetricField::arnold(lambda, ExponentConvention::Doubled);
    let (v1, v2) = arnold_closed_form(v0, lambda, v3, z0, 0.0);
    let s0 = GeodesicState::new([0.0, 0.0, z0], [v1, v2, v3]);
    let opts = GeodesicOptions {
        dt,
        t_end,
        stride,
        symmetry_factor: factor,
        ..GeodesicOptions::default()
    };
    let traj = integrate(&metric, &s0, &opts)?;
    let mut out = ArnoldComparison {
        symmetry_factor: factor.value(),
        samples: Vec::with_capacity(traj.samples.len()),
        max_rel_diff_v1: 0.0,
        max_rel_diff_v2: 0.0,
        max_v3_change: 0.0,
    };
    for s in &traj.samples {
        let cf = arnold_closed_form(v0, lambda, v3, z0, s.t);
        out.max_rel_diff_v1 = out.max_rel_diff_v1.max(rel_diff(s.state.v[0], cf.0));
        out.max_rel_diff_v2 = out.max_rel_diff_v2.max(rel_diff(s.state.v[1], cf.1));
        out.max_v3_change = out.max_v3_change.max((s.state.v[2] - v3).abs());
        out.samples.push(ClosedFormSample {
            t: s.t,
            numeric: s.state.v,
            closed_form: [cf.0, cf.1],
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    /// Least-squares amplitude `R²`.
    pub radius2: f64,
    /// `max |p² + q² − R² f(t)| / max(p² + q²)`.
    pub relative_residual: f64,
}

/// Fits `p² + q² = R² e^{λ_L t} sinh(λ z)` with `λ_L = v₀λ`, `z = v₀t` to a
/// numeric trajectory and reports the residual.
pub fn expanding_circle_fit(traj: &Trajectory, v0: f64, lambda: f64) -> CircleFit {
    let model = |t: f64| (v0 * lambda * t).exp() * (lambda * v0 * t).sinh();
    let (mut num, mut den) = (0.0, 0.0);
    let mut lhs_max: f64 = 0.0;
    for s in &traj.samples {
        let lhs = s.state.x.x1.powi(2) + s.state.x.x2.powi(2);
        let f = model(s.t);
        num += lhs * f;
        den += f * f;
        lhs_max = lhs_max.max(lhs.abs());
    }
    let radius2 = if den > 0.0 { num / den } else { 0.0 };
    let worst = traj.samples.iter().fold(0.0f64, |m, s| {
        let lhs = s.state.x.x1.powi(2) + s.state.x.x2.powi(2);
        m.max((lhs - radius2 * model(s.t)).abs())
    });
    CircleFit {
        radius2,
        relative_residual: if lhs_max > 0.0 { worst / lhs_max } else { worst },
    }
}

/// Torsion at which the stretch-metric geodesic ratio is evaluated.
pub const RATIO_TORSION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub t: f64,
    pub theta: f64,
    /// `v_s / v^θ` from the integrated geodesic.
    pub numeric: f64,
    /// `e^{(1 + cos θ)⟨v_r⟩ t}`.
    pub closed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub tau0: f64,
    pub v_r_mean: f64,
    pub samples: Vec<RatioSample>,
    pub max_rel_diff: f64,
    pub truncated: bool,
}

impl RatioReport {
    pub fn ratio_at_start(&self) -> f64 {
        self.samples[0].numeric
    }
}

/// Integrates the stretch-metric geodesic at `τ₀ = 1/2` with metric time
/// coupled to the geodesic parameter, starting from equal poloidal and
/// toroidal velocities, and compares `v_s/v^θ` against
/// `e^{(1 + cos θ)⟨v_r⟩t}`.
pub fn tube_geodesic_ratio_check(
    flow: &RadialFlowModel,
    theta0: f64,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<RatioReport> {
    let metric = flow.stretch_metric(RATIO_TORSION, 0.0)?;
    let s0 = GeodesicState::new([1.0, theta0, 0.0], [flow.v_r_mean, 1.0, 1.0]);
    let opts = GeodesicOptions {
        dt,
        t_end,
        stride,
        time_mode: TimeMode::Coupled(0.0),
        ..GeodesicOptions::default()
    };
    let traj = integrate(&metric, &s0, &opts)?;
    let mut max_rel: f64 = 0.0;
    let samples: Vec<RatioSample> = traj
        .samples
        .iter()
        .map(|s| {
            let theta = s.state.x.x2;
            let numeric = s.state.v[2] / s.state.v[1];
            let closed_form = ((1.0 + theta.cos()) * flow.v_r_mean * s.t).exp();
            max_rel = max_rel.max(rel_diff(numeric, closed_form));
            RatioSample {
                t: s.t,
                theta,
                numeric,
                closed_form,
            }
        })
        .collect();
    Ok(RatioReport {
        tau0: RATIO_TORSION,
        v_r_mean: flow.v_r_mean,
        samples,
        max_rel_diff: max_rel,
        truncated: traj.truncated(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonAnosovReport {
    pub t: Vec<f64>,
    pub lambda_r: Vec<f64>,
    pub lambda_theta: Vec<f64>,
    pub lambda_s: Vec<f64>,
    pub radial_identically_zero: bool,
    pub all_constant: bool,
}

fn spread(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Finite-time exponents evaluated along a stretch-metric trajectory at the
/// current `(θ(t), t)`. A flow whose exponents are not all constant is not
/// Anosov.
pub fn non_anosov_witness(
    traj: &Trajectory,
    flow: &RadialFlowModel,
    tau0: f64,
    convention: LyapunovConvention,
) -> Result<NonAnosovReport> {
    let mut out = NonAnosovReport {
        t: vec![],
        lambda_r: vec![],
        lambda_theta: vec![],
        lambda_s: vec![],
        radial_identically_zero: true,
        all_constant: true,
    };
    for s in traj.samples.iter().filter(|s| s.t > 0.0) {
        let r = finite_time_exponents(flow, tau0, s.state.x.x2, s.t, convention)?;
        out.t.push(s.t);
        out.lambda_r.push(r.lambda_r);
        out.lambda_theta.push(r.lambda_theta);
        out.lambda_s.push(r.lambda_s);
    }
    out.radial_identically_zero = out.lambda_r.iter().all(|&v| v == 0.0);
    let tol = 1e-9;
    out.all_constant = [&out.lambda_r, &out.lambda_theta, &out.lambda_s]
        .iter()
        .all(|series| spread(series) <= tol);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_rhs_vanishes() {
        let d = geodesic_rhs(
            &MetricField::euclidean(),
            &GeodesicState::new([1.0, 2.0, 3.0], [0.3, -1.0, 2.0]),
            SymmetryFactor::Two,
        )
        .unwrap();
        assert_eq!(d.dv, [0.0; 3]);
        assert_eq!(d.dx, [0.3, -1.0, 2.0]);
    }

    #[test]
    fn arnold_rhs_examples() {
        let m = MetricField::arnold(1.0, ExponentConvention::Doubled);
        let vertical = geodesic_rhs(&m, &GeodesicState::new([0.2, 0.1, 0.4], [0.0, 0.0, 1.0]), SymmetryFactor::Two)
            .unwrap();
        assert_eq!(vertical.dv, [0.0; 3]);
        let horizontal = geodesic_rhs(&m, &GeodesicState::new([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]), SymmetryFactor::Two)
            .unwrap();
        assert!((horizontal.dv[2] + 1.0).abs() < 1e-12);
        assert_eq!(horizontal.dv[0], 0.0);
    }

    #[test]
    fn symmetry_factor_halves_cross_terms() {
        let m = MetricField::arnold(0.7, ExponentConvention::Doubled);
        let s = GeodesicState::new([0.0, 0.0, 0.3], [1.2, 0.0, 0.5]);
        let two = geodesic_rhs(&m, &s, SymmetryFactor::Two).unwrap();
        let one = geodesic_rhs(&m, &s, SymmetryFactor::One).unwrap();
        // dv¹/dt = −2Γ¹₁₃ v¹v³ = 2λ v¹v³ with the full sum
        assert!((two.dv[0] - 2.0 * 0.7 * 1.2 * 0.5).abs() < 1e-12);
        assert!((one.dv[0] - 0.7 * 1.2 * 0.5).abs() < 1e-12);
        // diagonal terms are unaffected
        assert!((two.dv[2] - one.dv[2]).abs() < 1e-15);
    }

    #[test]
    fn straight_line() {
        let traj = integrate(
            &MetricField::euclidean(),
            &GeodesicState::new([0.0; 3], [1.0, 2.0, 3.0]),
            &GeodesicOptions {
                dt: 0.01,
                t_end: 1.0,
                ..GeodesicOptions::default()
            },
        )
        .unwrap();
        let end = traj.last();
        assert_eq!(end.t, 1.0);
        for (x, e) in end.state.x.to_array().iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-13);
        }
        assert!(speed_drift(&traj).unwrap() < 1e-14);
    }

    #[test]
    fn vertical_arnold_geodesic() {
        let traj = integrate(
            &MetricField::arnold(1.0, ExponentConvention::Doubled),
            &GeodesicState::new([0.0; 3], [0.0, 0.0, 1.0]),
            &GeodesicOptions {
                dt: 0.01,
                t_end: 5.0,
                stride: 10,
                ..GeodesicOptions::default()
            },
        )
        .unwrap();
        let end = traj.last();
        assert!((end.state.x.x3 - 5.0).abs() < 1e-12);
        assert_eq!(end.state.v, [0.0, 0.0, 1.0]);
        assert!(speed_drift(&traj).unwrap() < 1e-12);
        assert_eq!(traj.samples.len(), 51);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(arnold_closed_form(1.3, 0.8, 0.4, 0.0, 0.0), (1.3, 1.3));
        let (v1, v2) = arnold_closed_form(1.0, 1.0, 1.0, 0.0, 1.0);
        assert!((v1 - 7.389_056_098_930_65).abs() < 1e-12);
        assert_eq!(v2, 1.0);
    }

    #[test]
    fn leaving_the_tube_domain_truncates() {
        // heads straight for the axis r = 0
        let traj = integrate(
            &MetricField::twisted_tube(0.1),
            &GeodesicState::new([0.5, 0.0, 0.0], [-1.0, 0.0, 0.0]),
            &GeodesicOptions {
                dt: 0.01,
                t_end: 2.0,
                ..GeodesicOptions::default()
            },
        )
        .unwrap();
        assert!(traj.truncated());
        assert!(traj.last().t < 0.5);
        assert!(traj.last().state.x.x1 > 0.0);
    }

    #[test]
    fn inadmissible_start_is_an_error() {
        let err = integrate(
            &MetricField::twisted_tube(0.5),
            &GeodesicState::new([3.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
            &GeodesicOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateMetric { .. }));
    }

    #[test]
    fn zero_speed_drift_is_an_error() {
        let traj = integrate(
            &MetricField::euclidean(),
            &GeodesicState::new([0.0; 3], [0.0; 3]),
            &GeodesicOptions::default(),
        )
        .unwrap();
        assert_eq!(speed_drift(&traj), Err(Error::ZeroSpeed));
    }

    #[test]
    fn ratio_starts_at_equipartition() {
        let flow = RadialFlowModel::new(0.1).unwrap();
        let r = tube_geodesic_ratio_check(&flow, 1.0, 1.0, 0.01, 10).unwrap();
        assert_eq!(r.ratio_at_start(), 1.0);
        let still = tube_geodesic_ratio_check(&RadialFlowModel::new(0.0).unwrap(), 1.0, 2.0, 0.01, 10)
            .unwrap();
        assert!(still.samples.iter().all(|s| (s.numeric - 1.0).abs() < 1e-14));
        assert!(still.max_rel_diff < 1e-14);
    }
}
