//! Stretching exponents, magnetic growth factors and the anti-dynamo check
//! for a constant mean radial flow ⟨v_r⟩ inside the tube.

use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::error::{Error, Result};
use crate::maps::Verdict;
use crate::metric::MetricField;

pub const ANTI_DYNAMO_TOL: f64 = 1e-12;

/// Mean radial flow, constant over the observation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialFlowModel {
    pub v_r_mean: f64,
}

impl RadialFlowModel {
    pub fn new(v_r_mean: f64) -> Result<Self> {
        if !(v_r_mean >= 0.0 && v_r_mean.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mean radial velocity must be finite and nonnegative, got {v_r_mean}"
            )));
        }
        Ok(Self { v_r_mean })
    }

    /// `⟨r⟩ = ⟨v_r⟩ t`.
    pub fn mean_radius(&self, t: f64) -> f64 {
        self.v_r_mean * t
    }

    /// The stretch metric generated by this flow at time `t`.
    pub fn stretch_metric(&self, tau0: f64, t: f64) -> Result<MetricField> {
        MetricField::lyapunov_stretch(self.v_r_mean, tau0, t)
    }
}

/// Divisor convention in `λ_i = ln Λ_i / (c t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LyapunovConvention {
    /// `c = 2`: `λ_i = ln Λ_i / 2t`.
    #[default]
    HalfLog,
    /// `c = 1`.
    Log,
}

impl LyapunovConvention {
    pub fn factor(self) -> f64 {
        match self {
            LyapunovConvention::HalfLog => 2.0,
            LyapunovConvention::Log => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovReport {
    pub lambda_r: f64,
    pub lambda_theta: f64,
    pub lambda_s: f64,
    pub t: f64,
    pub convention_factor: f64,
}

/// Finite-time exponents read off the diagonal of the stretch metric
/// `diag(1, e^{⟨v_r⟩t}, e^{−τ₀⟨v_r⟩ t cos θ})`.
pub fn finite_time_exponents(
    flow: &RadialFlowModel,
    tau0: f64,
    theta: f64,
    t: f64,
    convention: LyapunovConvention,
) -> Result<LyapunovReport> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let metric = flow.stretch_metric(tau0, t)?;
    let g = metric.metric_at(&ChartPoint::new(1.0, theta, 0.0))?;
    let c = convention.factor();
    let exponent = |lyapunov_number: f64| lyapunov_number.ln() / (c * t);
    Ok(LyapunovReport {
        lambda_r: exponent(g.get(0, 0)),
        lambda_theta: exponent(g.get(1, 1)),
        lambda_s: exponent(g.get(2, 2)),
        t,
        convention_factor: c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticGrowth {
    pub b_theta: f64,
    pub b_s: f64,
    /// Time independent, normalized to 1.
    pub b_r: f64,
}

/// `B_θ = e^{⟨v_r⟩t}`, `B_s = e^{−τ₀⟨v_r⟩ t sin θ}`, `B_r = 1`.
pub fn magnetic_growth(
    flow: &RadialFlowModel,
    tau0: f64,
    theta: f64,
    t: f64,
) -> Result<MagneticGrowth> {
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("time must be nonnegative, got {t}")));
    }
    let v = flow.v_r_mean;
    Ok(MagneticGrowth {
        b_theta: (v * t).exp(),
        b_s: (-tau0 * v * theta.sin() * t).exp(),
        b_r: 1.0,
    })
}

/// Least-squares slope of `ln B` against `t`.
pub fn growth_rate_estimate(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::DegenerateSeries("need at least two samples".into()));
    }
    if let Some(&(t, b)) = series.iter().find(|(_, b)| !(*b > 0.0)) {
        return Err(Error::DegenerateSeries(format!("B = {b} at t = {t} is not positive")));
    }
    let n = series.len() as f64;
    let t_mean = series.iter().map(|(t, _)| t).sum::<f64>() / n;
    let y_mean = series.iter().map(|(_, b)| b.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, b) in series {
        let dt = t - t_mean;
        sxy += dt * (b.ln() - y_mean);
        sxx += dt * dt;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateSeries("all sample times are equal".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntiDynamoReport {
    pub verdict: Verdict,
    /// `max |ln B|` over the sampled window, for both components.
    pub max_log_growth: f64,
    /// Fitted growth rate of `ln B_θ`.
    pub growth_rate_theta: f64,
    /// Fitted growth rate of `ln B_s`.
    pub growth_rate_s: f64,
}

/// No stretching, no growth: passes when the sampled fields stay at their
/// initial values, fails (reporting the growth rate) otherwise.
pub fn anti_dynamo_check(
    flow: &RadialFlowModel,
    tau0: f64,
    theta: f64,
    horizon: f64,
    samples: usize,
) -> Result<AntiDynamoReport> {
    if samples < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::NonPositiveTime(horizon));
    }
    let mut theta_series = Vec::with_capacity(samples);
    let mut s_series = Vec::with_capacity(samples);
    let mut max_log: f64 = 0.0;
    for k in 1..=samples {
        let t = horizon * k as f64 / samples as f64;
        let b = magnetic_growth(flow, tau0, theta, t)?;
        max_log = max_log.max(b.b_theta.ln().abs()).max(b.b_s.ln().abs());
        theta_series.push((t, b.b_theta));
        s_series.push((t, b.b_s));
    }
    Ok(AntiDynamoReport {
        verdict: if max_log <= ANTI_DYNAMO_TOL {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        max_log_growth: max_log,
        growth_rate_theta: growth_rate_estimate(&theta_series)?,
        growth_rate_s: growth_rate_estimate(&s_series)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Unstable,
    Stable,
    Neutral,
}

/// Long-time behaviour of `R_2323 ∝ e^{2⟨v_r⟩τ₀(1 − cos θ)t}`, decided by the
/// sign of the exponent.
pub fn curvature_stability(flow: &RadialFlowModel, tau0: f64, theta: f64) -> (f64, Stability) {
    let rate = 2.0 * flow.v_r_mean * tau0 * (1.0 - theta.cos());
    let verdict = if rate > 0.0 {
        Stability::Unstable
    } else if rate < 0.0 {
        Stability::Stable
    } else {
        Stability::Neutral
    };
    (rate, verdict)
}
