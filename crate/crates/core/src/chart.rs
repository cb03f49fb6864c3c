//! Chart points and symmetric 3×3 metric matrices.

use std::fmt;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

/// A point in a 3D coordinate chart.
///
/// The meaning of the components depends on the metric: `(p, q, z)` for the
/// Arnold metric, `(r, θ, s)` for the tube metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl ChartPoint {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn coord(&self, i: usize) -> f64 {
        match i {
            0 => self.x1,
            1 => self.x2,
            2 => self.x3,
            _ => panic!("chart index {i} out of range"),
        }
    }

    /// Returns a copy with coordinate `i` shifted by `delta`.
    pub fn shifted(self, i: usize, delta: f64) -> Self {
        let mut a = self.to_array();
        a[i] += delta;
        Self::from_array(a)
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

/// Symmetric 3×3 matrix stored as its six independent entries
/// `[g11, g12, g13, g22, g23, g33]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix3 {
    entries: [f64; 6],
}

const fn packed_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

impl SymMatrix3 {
    pub const fn from_packed(entries: [f64; 6]) -> Self {
        Self { entries }
    }

    pub const fn diagonal(d1: f64, d2: f64, d3: f64) -> Self {
        Self::from_packed([d1, 0.0, 0.0, d2, 0.0, d3])
    }

    pub const fn identity() -> Self {
        Self::diagonal(1.0, 1.0, 1.0)
    }

    /// Builds from a full matrix using its upper triangle.
    pub fn from_upper(m: &[[f64; 3]; 3]) -> Self {
        Self::from_packed([m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]])
    }

    pub fn packed(&self) -> [f64; 6] {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[packed_index(i, j)]
    }

    pub fn to_array(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.get(i, j))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[1] == 0.0 && self.entries[2] == 0.0 && self.entries[4] == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn determinant(&self) -> f64 {
        let [a, b, c, d, e, f] = self.entries;
        a * (d * f - e * e) - b * (b * f - c * e) + c * (b * e - c * d)
    }

    /// Leading principal minors `(m1, m2, m3)`; all positive iff the matrix is
    /// positive definite.
    pub fn leading_minors(&self) -> [f64; 3] {
        let [a, b, _, d, _, _] = self.entries;
        [a, a * d - b * b, self.determinant()]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(|&m| m > 0.0)
    }

    /// Inverse via the adjugate; `None` if the determinant is not positive
    /// and finite.
    pub fn inverse(&self) -> Option<SymMatrix3> {
        let det = self.determinant();
        if !(det.is_finite() && det != 0.0) {
            return None;
        }
        if self.is_diagonal() {
            let [a, _, _, d, _, f] = self.entries;
            return Some(Self::diagonal(1.0 / a, 1.0 / d, 1.0 / f));
        }
        let [a, b, c, d, e, f] = self.entries;
        let inv = 1.0 / det;
        Some(Self::from_packed([
            (d * f - e * e) * inv,
            (c * e - b * f) * inv,
            (b * e - c * d) * inv,
            (a * f - c * c) * inv,
            (b * c - a * e) * inv,
            (a * d - b * b) * inv,
        ]))
    }

    /// Quadratic form `uᵀ G v`.
    pub fn contract(&self, u: &[f64; 3], v: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += self.get(i, j) * u[i] * v[j];
            }
        }
        acc
    }
}

impl fmt::Display for SymMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.to_array();
        write!(f, "[{:?}, {:?}, {:?}]", m[0], m[1], m[2])
    }
}
