//! Parametrized chart metrics.
//!
//! The catalog covers the flat metric, the Arnold stretching metric on
//! `T² × [0, 1]`, the twisted flux-tube metric `dr² + r²dθ² + K²ds²` with
//! `K = 1 − τ₀ r cos θ`, and the stretch metric built from the Lyapunov
//! numbers of a mean radial flow,
//! `dr² + e^{⟨v_r⟩t} dθ² + e^{−τ₀⟨v_r⟩ t cos θ} ds²`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, SymMatrix3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Euclidean,
    Arnold,
    #[serde(alias = "tube")]
    TwistedTube,
    #[serde(alias = "stretch")]
    LyapunovStretch,
    Custom,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Arnold => "arnold",
            MetricKind::TwistedTube => "tube",
            MetricKind::LyapunovStretch => "stretch",
            MetricKind::Custom => "custom",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exponent convention of the Arnold metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentConvention {
    /// `e^{−λz}dp² + e^{λz}dq² + dz²`.
    PaperEq13,
    /// `e^{−2λz}dp² + e^{2λz}dq² + dz²`, the form whose Christoffel symbols are
    /// `Γ¹₁₃ = −λ`, `Γ³₁₁ = λe^{−2λz}`.
    #[default]
    Doubled,
}

impl ExponentConvention {
    pub fn factor(self) -> f64 {
        match self {
            ExponentConvention::PaperEq13 => 1.0,
            ExponentConvention::Doubled => 2.0,
        }
    }
}

/// Which angle the twisted-tube chart uses as its second coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TubeChart {
    /// `θ` is the Frenet angle itself: `K = 1 − τ₀ r cos θ`.
    #[default]
    Frenet,
    /// The coordinate is the rotated angle `θ_R = θ + τ₀ s`, so
    /// `K = 1 − τ₀ r cos(θ_R − τ₀ s)`.
    Rotated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricParams {
    /// Arnold stretching rate λ.
    pub lambda: f64,
    /// Constant Frenet torsion τ₀ of the tube axis; the axis curvature κ is
    /// taken equal to it.
    pub tau0: f64,
    /// Mean random radial velocity ⟨v_r⟩.
    pub v_r_mean: f64,
    /// Elapsed time of the stretch metric.
    pub t: f64,
    pub exponent_convention: ExponentConvention,
    pub tube_chart: TubeChart,
}

impl Default for MetricParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            tau0: 0.0,
            v_r_mean: 0.0,
            t: 0.0,
            exponent_convention: ExponentConvention::Doubled,
            tube_chart: TubeChart::Frenet,
        }
    }
}

/// Result of [`MetricField::admissibility`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    /// The metric matrix is not positive definite (or `K ≤ 0` on a tube).
    Degenerate,
    /// The chart itself breaks down (the tube axis `r = 0`).
    CoordinateSingular,
}

type Evaluator = dyn Fn(&ChartPoint) -> SymMatrix3 + Send + Sync;

/// A named metric `point ↦ g_ij(point)`.
#[derive(Clone)]
pub struct MetricField {
    kind: MetricKind,
    params: MetricParams,
    name: String,
    custom: Option<Arc<Evaluator>>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("kind", &self.kind)
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

impl MetricField {
    pub fn new(kind: MetricKind, params: MetricParams) -> Result<Self> {
        if kind == MetricKind::Custom {
            return Err(Error::InvalidInput(
                "custom metrics need an evaluator; use MetricField::custom".into(),
            ));
        }
        if !(params.t >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "metric time must be nonnegative, got {}",
                params.t
            )));
        }
        Ok(Self {
            kind,
            params,
            name: kind.as_str().to_string(),
            custom: None,
        })
    }

    pub fn euclidean() -> Self {
        Self::new(MetricKind::Euclidean, MetricParams::default()).unwrap()
    }

    pub fn arnold(lambda: f64, convention: ExponentConvention) -> Self {
        let params = MetricParams {
            lambda,
            exponent_convention: convention,
            ..MetricParams::default()
        };
        Self::new(MetricKind::Arnold, params).unwrap()
    }

    pub fn twisted_tube(tau0: f64) -> Self {
        let params = MetricParams {
            tau0,
            ..MetricParams::default()
        };
        Self::new(MetricKind::TwistedTube, params).unwrap()
    }

    pub fn twisted_tube_in(tau0: f64, chart: TubeChart) -> Self {
        let params = MetricParams {
            tau0,
            tube_chart: chart,
            ..MetricParams::default()
        };
        Self::new(MetricKind::TwistedTube, params).unwrap()
    }

    pub fn lyapunov_stretch(v_r_mean: f64, tau0: f64, t: f64) -> Result<Self> {
        let params = MetricParams {
            tau0,
            v_r_mean,
            t,
            ..MetricParams::default()
        };
        Self::new(MetricKind::LyapunovStretch, params)
    }

    pub fn custom<F>(name: impl Into<String>, evaluator: F) -> Self
    where
        F: Fn(&ChartPoint) -> SymMatrix3 + Send + Sync + 'static,
    {
        Self {
            kind: MetricKind::Custom,
            params: MetricParams::default(),
            name: name.into(),
            custom: Some(Arc::new(evaluator)),
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn params(&self) -> &MetricParams {
        &self.params
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the metric depends on its time parameter.
    pub fn is_time_dependent(&self) -> bool {
        self.kind == MetricKind::LyapunovStretch
    }

    /// Same metric with the time parameter replaced.
    pub fn with_time(&self, t: f64) -> Self {
        let mut out = self.clone();
        out.params.t = t;
        out
    }

    /// Raw evaluation without domain checks.
    pub fn evaluate(&self, p: &ChartPoint) -> SymMatrix3 {
        let prm = &self.params;
        match self.kind {
            MetricKind::Euclidean => SymMatrix3::identity(),
            MetricKind::Arnold => {
                let rate = prm.exponent_convention.factor() * prm.lambda * p.x3;
                SymMatrix3::diagonal((-rate).exp(), rate.exp(), 1.0)
            }
            MetricKind::TwistedTube => {
                let k = self.tube_stretch(p);
                SymMatrix3::diagonal(1.0, p.x1 * p.x1, k * k)
            }
            MetricKind::LyapunovStretch => {
                let vt = prm.v_r_mean * prm.t;
                SymMatrix3::diagonal(1.0, vt.exp(), (-prm.tau0 * vt * p.x2.cos()).exp())
            }
            MetricKind::Custom => (self.custom.as_ref().expect("custom evaluator"))(p),
        }
    }

    /// Toroidal stretch factor `K = 1 − τ₀ r cos θ` of the tube metric.
    pub fn tube_stretch(&self, p: &ChartPoint) -> f64 {
        let tau0 = self.params.tau0;
        let theta = match self.params.tube_chart {
            TubeChart::Frenet => p.x2,
            TubeChart::Rotated => p.x2 - tau0 * p.x3,
        };
        1.0 - tau0 * p.x1 * theta.cos()
    }

    pub fn admissibility(&self, p: &ChartPoint) -> Admissibility {
        if !p.is_finite() {
            return Admissibility::Degenerate;
        }
        if self.kind == MetricKind::TwistedTube {
            if p.x1 <= 0.0 {
                return Admissibility::CoordinateSingular;
            }
            if self.tube_stretch(p) <= 0.0 {
                return Admissibility::Degenerate;
            }
        }
        let g = self.evaluate(p);
        if g.is_finite() && g.is_positive_definite() {
            Admissibility::Admissible
        } else {
            Admissibility::Degenerate
        }
    }

    /// Metric components at `p`, or `DegenerateMetric` outside the domain.
    pub fn metric_at(&self, p: &ChartPoint) -> Result<SymMatrix3> {
        match self.admissibility(p) {
            Admissibility::Admissible => Ok(self.evaluate(p)),
            Admissibility::CoordinateSingular => Err(Error::DegenerateMetric {
                point: *p,
                reason: "tube chart is singular on the axis r = 0".into(),
            }),
            Admissibility::Degenerate => Err(Error::DegenerateMetric {
                point: *p,
                reason: self.degeneracy_reason(p),
            }),
        }
    }

    pub fn metric_determinant(&self, p: &ChartPoint) -> Result<f64> {
        Ok(self.metric_at(p)?.determinant())
    }

    fn degeneracy_reason(&self, p: &ChartPoint) -> String {
        if !p.is_finite() {
            return "non-finite chart coordinates".into();
        }
        if self.kind == MetricKind::TwistedTube {
            let k = self.tube_stretch(p);
            if k <= 0.0 {
                return format!("stretch factor K = 1 - tau0 r cos(theta) = {k} is not positive");
            }
        }
        let g = self.evaluate(p);
        format!("metric {g} is not positive definite (minors {:?})", g.leading_minors())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_is_identity() {
        let g = MetricField::euclidean()
            .metric_at(&ChartPoint::new(1.0, 2.0, 3.0))
            .unwrap();
        assert_eq!(g, SymMatrix3::identity());
    }

    #[test]
    fn arnold_at_origin_is_identity() {
        let m = MetricField::arnold(1.0, ExponentConvention::PaperEq13);
        assert_eq!(m.metric_at(&ChartPoint::new(0.0, 0.0, 0.0)).unwrap(), SymMatrix3::identity());
    }

    #[test]
    fn arnold_conventions_differ_by_factor_two_in_exponent() {
        let p = ChartPoint::new(0.0, 0.0, 0.7);
        let single = MetricField::arnold(1.0, ExponentConvention::PaperEq13).evaluate(&p);
        let doubled = MetricField::arnold(1.0, ExponentConvention::Doubled).evaluate(&p);
        assert!((single.get(0, 0) - (-0.7f64).exp()).abs() < 1e-15);
        assert!((doubled.get(0, 0) - (-1.4f64).exp()).abs() < 1e-15);
        assert!((doubled.get(1, 1) - 1.4f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn tube_metric_substitution() {
        // K = 1 − 0.1·1·cos 0 = 0.9, K² = 0.81
        let g = MetricField::twisted_tube(0.1)
            .metric_at(&ChartPoint::new(1.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert_eq!(g.get(1, 1), 1.0);
        assert!((g.get(2, 2) - 0.81).abs() < 1e-15);
        assert!(g.is_diagonal());
    }

    #[test]
    fn tube_determinant_and_stretch_determinant() {
        let tube = MetricField::twisted_tube(0.1);
        let det = tube.metric_determinant(&ChartPoint::new(1.0, 0.0, 5.0)).unwrap();
        assert!((det - 0.81).abs() < 1e-15);

        let stretch = MetricField::lyapunov_stretch(1.0, 0.0, 2.0).unwrap();
        let det = stretch.metric_determinant(&ChartPoint::new(0.3, 1.1, 0.0)).unwrap();
        assert!((det - 2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn admissibility_verdicts() {
        let tube = MetricField::twisted_tube(0.1);
        assert_eq!(
            tube.admissibility(&ChartPoint::new(0.0, 0.3, 0.0)),
            Admissibility::CoordinateSingular
        );
        let tight = MetricField::twisted_tube(0.5);
        assert_eq!(
            tight.admissibility(&ChartPoint::new(3.0, 0.0, 0.0)),
            Admissibility::Degenerate
        );
        assert!(matches!(
            tight.metric_at(&ChartPoint::new(3.0, 0.0, 0.0)),
            Err(Error::DegenerateMetric { .. })
        ));
        assert_eq!(
            MetricField::euclidean().admissibility(&ChartPoint::new(-4.0, 9.0, 1e6)),
            Admissibility::Admissible
        );
        assert_eq!(
            MetricField::euclidean().admissibility(&ChartPoint::new(f64::NAN, 0.0, 0.0)),
            Admissibility::Degenerate
        );
    }

    #[test]
    fn rotated_chart_shifts_angle_with_arclength() {
        let frenet = MetricField::twisted_tube_in(0.2, TubeChart::Frenet);
        let rotated = MetricField::twisted_tube_in(0.2, TubeChart::Rotated);
        let s = 1.5;
        let p_rot = ChartPoint::new(1.0, 0.4 + 0.2 * s, s);
        let p_fre = ChartPoint::new(1.0, 0.4, s);
        assert!((frenet.tube_stretch(&p_fre) - rotated.tube_stretch(&p_rot)).abs() < 1e-15);
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(MetricField::lyapunov_stretch(1.0, 0.0, -1.0).is_err());
    }
}
