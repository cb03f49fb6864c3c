use thiserror::Error;

use crate::chart::ChartPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric is degenerate at {point}: {reason}")]
    DegenerateMetric { point: ChartPoint, reason: String },

    #[error("differentiation stencil around {point} leaves the admissible domain")]
    StencilOutOfDomain { point: ChartPoint },

    #[error("stretch factors must be positive (K0 = {k0}, K1 = {k1})")]
    NonPositiveStretch { k0: f64, k1: f64 },

    #[error("map is not a torus automorphism: {0}")]
    NotAutomorphism(String),

    #[error("time window must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("trajectory has zero initial speed")]
    ZeroSpeed,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
