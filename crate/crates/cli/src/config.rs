//! Run configuration: a sectioned TOML file, every key also settable by flag.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};
use std::path::Path;

use serde::{Deserialize, Serialize};
use tubedyn::checklist::CheckConfig;
use tubedyn::dynamo::LyapunovConvention;
use tubedyn::geodesic::{GeodesicOptions, GeodesicState, SymmetryFactor, TimeMode};
use tubedyn::{ChartPoint, DiffScheme, ExponentConvention, MetricField, MetricKind, MetricParams, TubeChart};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub metric: MetricSection,
    pub points: PointsSection,
    pub map: MapSection,
    pub geodesic: GeodesicSection,
    pub lyapunov: LyapunovSection,
    pub check: CheckConfig,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSection {
    pub kind: MetricKind,
    pub lambda: f64,
    pub tau0: f64,
    pub v_r_mean: f64,
    pub t: f64,
    pub convention: ExponentConvention,
    pub chart: TubeChart,
    pub scheme: DiffScheme,
}

impl Default for MetricSection {
    fn default() -> Self {
        let p = MetricParams::default();
        Self {
            kind: MetricKind::Euclidean,
            lambda: p.lambda,
            tau0: p.tau0,
            v_r_mean: p.v_r_mean,
            t: p.t,
            convention: p.exponent_convention,
            chart: p.tube_chart,
            scheme: DiffScheme::default(),
        }
    }
}

impl MetricSection {
    pub fn params(&self) -> MetricParams {
        MetricParams {
            lambda: self.lambda,
            tau0: self.tau0,
            v_r_mean: self.v_r_mean,
            t: self.t,
            exponent_convention: self.convention,
            tube_chart: self.chart,
        }
    }

    pub fn build(&self) -> Result<MetricField, CliError> {
        MetricField::new(self.kind, self.params()).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// `[start, stop, n]` along one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis(pub f64, pub f64, pub usize);

impl Axis {
    fn values(&self) -> Vec<f64> {
        let Axis(a, b, n) = *self;
        match n {
            0 => vec![],
            1 => vec![a],
            _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct PointsSection {
    pub list: Vec<[f64; 3]>,
    /// Tensor grid, `x1` slowest.
    pub grid: Option<[Axis; 3]>,
}

impl PointsSection {
    pub fn expand(&self) -> Vec<ChartPoint> {
        let mut out: Vec<ChartPoint> = self.list.iter().map(|p| ChartPoint::from_array(*p)).collect();
        if let Some([a1, a2, a3]) = &self.grid {
            for x1 in a1.values() {
                for x2 in a2.values() {
                    for x3 in a3.values() {
                        out.push(ChartPoint::new(x1, x2, x3));
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSection {
    /// `cat`, `twist`, `stf3d`, `identity2`, `identity3`, or `custom`.
    pub name: String,
    /// Row-major entries when `name = "custom"`.
    pub entries: Vec<f64>,
    pub k0: f64,
    pub k1: f64,
    pub tau0: f64,
    pub orbit_steps: usize,
    pub orbit_start: [f64; 2],
}

impl Default for MapSection {
    fn default() -> Self {
        Self {
            name: "cat".into(),
            entries: vec![],
            k0: 2.0,
            k1: 0.5,
            tau0: 1.0,
            orbit_steps: 0,
            orbit_start: [0.5, 0.5],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeModeName {
    #[default]
    Coupled,
    Frozen,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeodesicSection {
    pub x0: [f64; 3],
    pub v0: [f64; 3],
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
    pub symmetry_factor: u8,
    pub time_mode: TimeModeName,
    pub t0: f64,
    pub error_estimate: bool,
}

impl Default for GeodesicSection {
    fn default() -> Self {
        let o = GeodesicOptions::default();
        Self {
            x0: [1.0, 0.5, 0.0],
            v0: [0.2, 0.3, 0.4],
            dt: o.dt,
            t_end: o.t_end,
            stride: o.stride,
            symmetry_factor: o.symmetry_factor.value(),
            time_mode: TimeModeName::Coupled,
            t0: 0.0,
            error_estimate: o.error_estimate,
        }
    }
}

impl GeodesicSection {
    pub fn state(&self) -> GeodesicState {
        GeodesicState::new(self.x0, self.v0)
    }

    pub fn options(&self, scheme: DiffScheme) -> Result<GeodesicOptions, CliError> {
        let symmetry_factor =
            SymmetryFactor::from_value(self.symmetry_factor).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(GeodesicOptions {
            dt: self.dt,
            t_end: self.t_end,
            stride: self.stride,
            symmetry_factor,
            time_mode: match self.time_mode {
                TimeModeName::Coupled => TimeMode::Coupled(self.t0),
                TimeModeName::Frozen => TimeMode::Frozen(self.t0),
            },
            scheme,
            error_estimate: self.error_estimate,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LyapunovSection {
    pub theta: Vec<f64>,
    pub t: Vec<f64>,
    pub convention: LyapunovConvention,
}

impl Default for LyapunovSection {
    fn default() -> Self {
        Self {
            theta: vec![FRAC_PI_6, FRAC_PI_3, FRAC_PI_2],
            t: vec![0.5, 1.0, 2.0, 5.0],
            convention: LyapunovConvention::HalfLog,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<OutputFormat>,
    pub path: Option<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Normalized text form; parsing it back yields an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
