//! Christoffel symbols and curvature tensors from a numerically
//! differentiated metric.
//!
//! Sign convention:
//!
//! ```text
//! R^i_jkl = ∂_k Γ^i_lj − ∂_l Γ^i_kj + Γ^i_km Γ^m_lj − Γ^i_lm Γ^m_kj
//! R_ijkl  = g_im R^m_jkl,    R_jl = R^i_jil,    R = g^jl R_jl
//! ```
//!
//! With it the round sphere has positive sectional curvature
//! `K(e_i, e_j) = R_ijij / (g_ii g_jj − g_ij²)`.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, SymMatrix3};
use crate::diff::{metric_gradient, metric_jet, DiffScheme, MetricJet};
use crate::error::{Error, Result};
use crate::metric::MetricField;

pub type Tensor3 = [[[f64; 3]; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

/// `Γ^i_jk`, stored as `self.0[i][j][k]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Christoffel(pub Tensor3);

impl Christoffel {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.0[i][j][k]
    }

    /// `Σ_jk Γ^i_jk u^j w^k` for each `i`.
    pub fn contract(&self, u: &[f64; 3], w: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..3 {
                for k in 0..3 {
                    *o += self.0[i][j][k] * u[j] * w[k];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Independent components `(i, j, k)` with `j ≤ k`, 0-based.
    pub fn independent(&self) -> Vec<((usize, usize, usize), f64)> {
        let mut out = Vec::with_capacity(18);
        for i in 0..3 {
            for j in 0..3 {
                for k in j..3 {
                    out.push(((i, j, k), self.0[i][j][k]));
                }
            }
        }
        out
    }
}

/// Rank-4 curvature array `R_ijkl`, stored as `self.0[i][j][k][l]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Riemann(pub Tensor4);

/// Index pairs `(12), (13), (23)` (0-based) spanning the 2-forms in 3D.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl Riemann {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[i][j][k][l]
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The six independent components in 3D:
    /// `R_1212, R_1213, R_1223, R_1313, R_1323, R_2323` (0-based indices).
    pub fn independent(&self) -> [((usize, usize, usize, usize), f64); 6] {
        let mut out = [((0, 0, 0, 0), 0.0); 6];
        let mut n = 0;
        for a in 0..3 {
            for b in a..3 {
                let (i, j) = PAIRS[a];
                let (k, l) = PAIRS[b];
                out[n] = ((i, j, k, l), self.0[i][j][k][l]);
                n += 1;
            }
        }
        out
    }
}

/// Deviations from the algebraic symmetries of `R_ijkl`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryResidual {
    /// `max |R_ijkl + R_jikl|`
    pub antisym_first: f64,
    /// `max |R_ijkl + R_ijlk|`
    pub antisym_second: f64,
    /// `max |R_ijkl − R_klij|`
    pub pair: f64,
    /// `max |R_ijkl + R_iklj + R_iljk|`
    pub bianchi: f64,
}

impl SymmetryResidual {
    pub fn max(&self) -> f64 {
        self.antisym_first
            .max(self.antisym_second)
            .max(self.pair)
            .max(self.bianchi)
    }
}

/// Curvature data at one chart point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBundle {
    pub point: ChartPoint,
    pub metric: SymMatrix3,
    pub christoffel: Christoffel,
    pub riemann_lowered: Riemann,
    pub ricci: SymMatrix3,
    pub scalar: f64,
    /// Components in the orthonormal frame obtained from the Cholesky factor
    /// of `g` (for diagonal metrics: `R_ijkl / √(g_ii g_jj g_kk g_ll)`).
    pub orthonormal_riemann: Riemann,
    /// Magnitude of the individual terms that cancel inside `R_ijkl`; the
    /// natural scale for judging finite-difference residuals.
    pub term_scale: f64,
}

impl CurvatureBundle {
    pub fn symmetry_residual(&self) -> SymmetryResidual {
        let r = &self.riemann_lowered.0;
        let mut res = SymmetryResidual {
            antisym_first: 0.0,
            antisym_second: 0.0,
            pair: 0.0,
            bianchi: 0.0,
        };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let v = r[i][j][k][l];
                        res.antisym_first = res.antisym_first.max((v + r[j][i][k][l]).abs());
                        res.antisym_second = res.antisym_second.max((v + r[i][j][l][k]).abs());
                        res.pair = res.pair.max((v - r[k][l][i][j]).abs());
                        res.bianchi = res
                            .bianchi
                            .max((v + r[i][k][l][j] + r[i][l][j][k]).abs());
                    }
                }
            }
        }
        res
    }

    /// Reference magnitude for relative comparisons: the larger of the
    /// largest component and [`term_scale`](Self::term_scale).
    pub fn reference_scale(&self) -> f64 {
        self.riemann_lowered.max_abs().max(self.term_scale)
    }

    /// Sectional curvature of the coordinate plane `(i, j)`.
    pub fn sectional(&self, i: usize, j: usize) -> f64 {
        let g = &self.metric;
        self.riemann_lowered.get(i, j, i, j) / (g.get(i, i) * g.get(j, j) - g.get(i, j).powi(2))
    }
}

fn christoffel_from(g_inv: &SymMatrix3, dg: &[SymMatrix3; 3]) -> Christoffel {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in j..3 {
                let mut acc = 0.0;
                for l in 0..3 {
                    let first_kind = dg[k].get(l, j) + dg[j].get(l, k) - dg[l].get(j, k);
                    acc += g_inv.get(i, l) * first_kind;
                }
                gamma[i][j][k] = 0.5 * acc;
                gamma[i][k][j] = 0.5 * acc;
            }
        }
    }
    Christoffel(gamma)
}

fn invert(g: &SymMatrix3, p: &ChartPoint) -> Result<SymMatrix3> {
    g.inverse().ok_or_else(|| Error::DegenerateMetric {
        point: *p,
        reason: "metric is not invertible".into(),
    })
}

/// Christoffel symbols of the second kind at `p`.
pub fn christoffel_at(metric: &MetricField, p: &ChartPoint) -> Result<Christoffel> {
    christoffel_with(metric, p, DiffScheme::default())
}

pub fn christoffel_with(
    metric: &MetricField,
    p: &ChartPoint,
    scheme: DiffScheme,
) -> Result<Christoffel> {
    let (g, dg) = metric_gradient(metric, p, scheme)?;
    let g_inv = invert(&g, p)?;
    Ok(christoffel_from(&g_inv, &dg))
}

/// Full curvature bundle at `p`.
pub fn riemann_at(metric: &MetricField, p: &ChartPoint) -> Result<CurvatureBundle> {
    riemann_with(metric, p, DiffScheme::default())
}

pub fn riemann_with(
    metric: &MetricField,
    p: &ChartPoint,
    scheme: DiffScheme,
) -> Result<CurvatureBundle> {
    let jet = metric_jet(metric, p, scheme)?;
    bundle_from_jet(&jet, p)
}

/// Ricci tensor and scalar curvature at `p`.
pub fn ricci_and_scalar_at(metric: &MetricField, p: &ChartPoint) -> Result<(SymMatrix3, f64)> {
    let b = riemann_at(metric, p)?;
    Ok((b.ricci, b.scalar))
}

/// Curvature from a precomputed metric jet.
pub fn bundle_from_jet(jet: &MetricJet, p: &ChartPoint) -> Result<CurvatureBundle> {
    let g = jet.g;
    let g_inv = invert(&g, p)?;
    let gamma = christoffel_from(&g_inv, &jet.dg);
    let gm = &gamma.0;

    // ∂_k g^{im} = −g^{ia} ∂_k g_ab g^{bm}
    let mut d_inv = [[[0.0; 3]; 3]; 3];
    for (k, slot) in d_inv.iter_mut().enumerate() {
        for i in 0..3 {
            for m in 0..3 {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        acc += g_inv.get(i, a) * jet.dg[k].get(a, b) * g_inv.get(b, m);
                    }
                }
                slot[i][m] = -acc;
            }
        }
    }

    // dgamma[k][i][l][j] = ∂_k Γ^i_lj
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    let mut dgamma_scale: f64 = 0.0;
    for k in 0..3 {
        for i in 0..3 {
            for l in 0..3 {
                for j in l..3 {
                    let mut acc = 0.0;
                    for m in 0..3 {
                        let first_kind = 0.5
                            * (jet.dg[l].get(m, j) + jet.dg[j].get(m, l) - jet.dg[m].get(l, j));
                        let d_first_kind = 0.5
                            * (jet.ddg[k][l].get(m, j) + jet.ddg[k][j].get(m, l)
                                - jet.ddg[k][m].get(l, j));
                        acc += d_inv[k][i][m] * first_kind + g_inv.get(i, m) * d_first_kind;
                    }
                    dgamma[k][i][l][j] = acc;
                    dgamma[k][i][j][l] = acc;
                    dgamma_scale = dgamma_scale.max(acc.abs());
                }
            }
        }
    }

    // mixed[i][j][k][l] = R^i_jkl
    let mut mixed = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = dgamma[k][i][l][j] - dgamma[l][i][k][j];
                    for m in 0..3 {
                        v += gm[i][k][m] * gm[m][l][j] - gm[i][l][m] * gm[m][k][j];
                    }
                    mixed[i][j][k][l] = v;
                }
            }
        }
    }

    let mut lowered = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    lowered[i][j][k][l] = (0..3).map(|m| g.get(i, m) * mixed[m][j][k][l]).sum();
                }
            }
        }
    }

    let mut ricci = [[0.0; 3]; 3];
    for (j, row) in ricci.iter_mut().enumerate() {
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = (0..3).map(|i| mixed[i][j][i][l]).sum();
        }
    }
    // symmetrize: R_jl = R_lj holds only to differencing accuracy
    for j in 0..3 {
        for l in (j + 1)..3 {
            let avg = 0.5 * (ricci[j][l] + ricci[l][j]);
            ricci[j][l] = avg;
            ricci[l][j] = avg;
        }
    }
    let ricci = SymMatrix3::from_upper(&ricci);
    let mut scalar = 0.0;
    for j in 0..3 {
        for l in 0..3 {
            scalar += g_inv.get(j, l) * ricci.get(j, l);
        }
    }

    let frame = orthonormal_frame(&g, p)?;
    let mut ortho = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut acc = 0.0;
                    for i in 0..3 {
                        if frame[(i, a)] == 0.0 {
                            continue;
                        }
                        for j in 0..3 {
                            if frame[(j, b)] == 0.0 {
                                continue;
                            }
                            for k in 0..3 {
                                if frame[(k, c)] == 0.0 {
                                    continue;
                                }
                                for l in 0..3 {
                                    acc += lowered[i][j][k][l]
                                        * frame[(i, a)]
                                        * frame[(j, b)]
                                        * frame[(k, c)]
                                        * frame[(l, d)];
                                }
                            }
                        }
                    }
                    ortho[a][b][c][d] = acc;
                }
            }
        }
    }

    let g_scale = g.packed().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gamma_scale = gamma.max_abs();
    let term_scale = g_scale * (dgamma_scale + 3.0 * gamma_scale * gamma_scale);

    Ok(CurvatureBundle {
        point: *p,
        metric: g,
        christoffel: gamma,
        riemann_lowered: Riemann(lowered),
        ricci,
        scalar,
        orthonormal_riemann: Riemann(ortho),
        term_scale,
    })
}

/// Columns are the frame vectors `e_â` with `e_âᵀ g e_b̂ = δ_ab`.
fn orthonormal_frame(g: &SymMatrix3, p: &ChartPoint) -> Result<Matrix3<f64>> {
    if g.is_diagonal() {
        return Ok(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            1.0 / g.get(0, 0).sqrt(),
            1.0 / g.get(1, 1).sqrt(),
            1.0 / g.get(2, 2).sqrt(),
        )));
    }
    let chol = g.to_matrix().cholesky().ok_or_else(|| Error::DegenerateMetric {
        point: *p,
        reason: "metric has no Cholesky factorization".into(),
    })?;
    let l_t_inv = chol
        .l()
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateMetric {
            point: *p,
            reason: "Cholesky factor is singular".into(),
        })?;
    Ok(l_t_inv)
}
