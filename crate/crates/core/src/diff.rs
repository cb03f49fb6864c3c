//! Finite-difference derivatives of a metric field.
//!
//! Central differences with step `h = max(1, |x|)·ε^{1/3}` for first
//! derivatives and `ε^{1/4}` for second derivatives. The Richardson scheme
//! combines steps `h` and `h/2` (`(4D(h/2) − D(h))/3`), cancelling the `h²`
//! error term; its base steps are `ε^{1/5}` and `ε^{1/6}`.

use serde::{Deserialize, Serialize};

use crate::chart::{ChartPoint, SymMatrix3};
use crate::error::{Error, Result};
use crate::metric::{Admissibility, MetricField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffScheme {
    Central,
    #[default]
    Richardson,
}

impl DiffScheme {
    fn first_step_exponent(self) -> f64 {
        match self {
            DiffScheme::Central => 1.0 / 3.0,
            DiffScheme::Richardson => 1.0 / 5.0,
        }
    }

    fn second_step_exponent(self) -> f64 {
        match self {
            DiffScheme::Central => 1.0 / 4.0,
            DiffScheme::Richardson => 1.0 / 6.0,
        }
    }
}

type Packed = [f64; 6];

/// Metric value with first and second partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub g: SymMatrix3,
    /// `dg[k]` holds `∂_k g_ij`.
    pub dg: [SymMatrix3; 3],
    /// `ddg[k][l]` holds `∂_k ∂_l g_ij` (symmetric in `k, l`).
    pub ddg: [[SymMatrix3; 3]; 3],
}

fn step_for(x: f64, exponent: f64) -> f64 {
    let h = x.abs().max(1.0) * f64::EPSILON.powf(exponent);
    // round so that x ± h is exactly representable
    let shifted = x + h;
    shifted - x
}

fn combine(terms: &[(f64, Packed)], scale: f64) -> Packed {
    let mut out = [0.0; 6];
    for (w, v) in terms {
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    }
    out.map(|v| v * scale)
}

fn richardson(coarse: Packed, fine: Packed) -> Packed {
    let mut out = [0.0; 6];
    for i in 0..6 {
        out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    }
    out
}

struct Sampler<'a> {
    metric: &'a MetricField,
    center: ChartPoint,
}

impl Sampler<'_> {
    fn at(&self, offsets: [f64; 3]) -> Result<Packed> {
        let p = ChartPoint::new(
            self.center.x1 + offsets[0],
            self.center.x2 + offsets[1],
            self.center.x3 + offsets[2],
        );
        if self.metric.admissibility(&p) != Admissibility::Admissible {
            return Err(Error::StencilOutOfDomain { point: self.center });
        }
        Ok(self.metric.evaluate(&p).packed())
    }

    fn axis(&self, k: usize, h: f64) -> Result<(Packed, Packed)> {
        let mut off = [0.0; 3];
        off[k] = h;
        let plus = self.at(off)?;
        off[k] = -h;
        let minus = self.at(off)?;
        Ok((plus, minus))
    }

    fn first(&self, k: usize, h: f64) -> Result<Packed> {
        let (plus, minus) = self.axis(k, h)?;
        Ok(combine(&[(1.0, plus), (-1.0, minus)], 0.5 / h))
    }

    fn pure_second(&self, k: usize, h: f64, center: Packed) -> Result<Packed> {
        let (plus, minus) = self.axis(k, h)?;
        Ok(combine(&[(1.0, plus), (-2.0, center), (1.0, minus)], 1.0 / (h * h)))
    }

    fn mixed_second(&self, k: usize, l: usize, hk: f64, hl: f64) -> Result<Packed> {
        let corner = |sk: f64, sl: f64| {
            let mut off = [0.0; 3];
            off[k] = sk * hk;
            off[l] = sl * hl;
            self.at(off)
        };
        let pp = corner(1.0, 1.0)?;
        let pm = corner(1.0, -1.0)?;
        let mp = corner(-1.0, 1.0)?;
        let mm = corner(-1.0, -1.0)?;
        Ok(combine(
            &[(1.0, pp), (-1.0, pm), (-1.0, mp), (1.0, mm)],
            0.25 / (hk * hl),
        ))
    }
}

/// Metric and its first partial derivatives at `p`.
pub fn metric_gradient(
    metric: &MetricField,
    p: &ChartPoint,
    scheme: DiffScheme,
) -> Result<(SymMatrix3, [SymMatrix3; 3])> {
    let g = metric.metric_at(p)?;
    let sampler = Sampler { metric, center: *p };
    let mut dg = [SymMatrix3::from_packed([0.0; 6]); 3];
    for (k, slot) in dg.iter_mut().enumerate() {
        let h = step_for(p.coord(k), scheme.first_step_exponent());
        let d = match scheme {
            DiffScheme::Central => sampler.first(k, h)?,
            DiffScheme::Richardson => richardson(sampler.first(k, h)?, sampler.first(k, 0.5 * h)?),
        };
        *slot = SymMatrix3::from_packed(d);
    }
    Ok((g, dg))
}

/// Metric with first and second partial derivatives at `p`.
pub fn metric_jet(metric: &MetricField, p: &ChartPoint, scheme: DiffScheme) -> Result<MetricJet> {
    let (g, dg) = metric_gradient(metric, p, scheme)?;
    let sampler = Sampler { metric, center: *p };
    let center = g.packed();
    let steps: Vec<f64> = (0..3)
        .map(|k| step_for(p.coord(k), scheme.second_step_exponent()))
        .collect();

    let mut ddg = [[SymMatrix3::from_packed([0.0; 6]); 3]; 3];
    for k in 0..3 {
        for l in k..3 {
            let d = if k == l {
                let h = steps[k];
                match scheme {
                    DiffScheme::Central => sampler.pure_second(k, h, center)?,
                    DiffScheme::Richardson => richardson(
                        sampler.pure_second(k, h, center)?,
                        sampler.pure_second(k, 0.5 * h, center)?,
                    ),
                }
            } else {
                let (hk, hl) = (steps[k], steps[l]);
                match scheme {
                    DiffScheme::Central => sampler.mixed_second(k, l, hk, hl)?,
                    DiffScheme::Richardson => richardson(
                        sampler.mixed_second(k, l, hk, hl)?,
                        sampler.mixed_second(k, l, 0.5 * hk, 0.5 * hl)?,
                    ),
                }
            };
            ddg[k][l] = SymMatrix3::from_packed(d);
            ddg[l][k] = ddg[k][l];
        }
    }
    Ok(MetricJet { g, dg, ddg })
}
