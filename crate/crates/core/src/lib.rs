//! Differential geometry and stretching diagnostics for chaotic dynamo flows
//! in twisted magnetic flux tubes.
//!
//! - [`metric`], [`curvature`]: chart metrics and their numerically
//!   differentiated Christoffel symbols, Riemann, Ricci and scalar curvature.
//! - [`maps`]: spectra and hyperbolicity of twist, stretch-twist and cat-map
//!   Jacobians; torus orbits.
//! - [`dynamo`]: stretching exponents, magnetic growth, anti-dynamo check.
//! - [`geodesic`]: geodesic integration and closed-form cross-checks.
//! - [`checklist`]: the reproduction report comparing closed-form claims
//!   against the engines above.

pub mod chart;
pub mod checklist;
pub mod curvature;
pub mod diff;
pub mod dynamo;
pub mod error;
pub mod geodesic;
pub mod maps;
pub mod metric;
pub mod poly;

pub use chart::{ChartPoint, SymMatrix3};
pub use curvature::{
    christoffel_at, christoffel_with, ricci_and_scalar_at, riemann_at, riemann_with, Christoffel,
    CurvatureBundle, Riemann,
};
pub use diff::DiffScheme;
pub use error::{Error, Result};
pub use metric::{Admissibility, ExponentConvention, MetricField, MetricKind, MetricParams, TubeChart};
