//! Reproduction checklist: every closed-form claim is evaluated as printed
//! and compared with an independent value from the curvature, map, dynamo or
//! geodesic engines.
//!
//! A discrepancy is a finding, not an error: internal failures while
//! evaluating an entry become a `Mismatch` with the error in the note.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

use serde::{Deserialize, Serialize};

use crate::chart::ChartPoint;
use crate::curvature::{christoffel_at, riemann_at};
use crate::dynamo::{
    curvature_stability, finite_time_exponents, LyapunovConvention, RadialFlowModel, Stability,
};
use crate::error::Result;
use crate::geodesic::{
    compare_arnold_closed_form, expanding_circle_fit, geodesic_rhs, integrate,
    tube_geodesic_ratio_check, GeodesicOptions, GeodesicState, SymmetryFactor,
};
use crate::maps::{analyze, MapSpec};
use crate::metric::{ExponentConvention, MetricField, TubeChart};
use crate::poly::eval_monic;

/// Expression ids in report order.
pub const CHECKLIST: &[&str] = &[
    "Eq4", "Eq11", "Eq12", "Eq15", "Eq16", "Eq17", "Eq18", "Eq19", "Eq20", "Eq21", "Eq22", "Eq23",
    "Eq24", "Eq25", "Eq32", "Eq33", "Eq37", "Eq38", "Eq39", "Eq40", "Eq41", "Eq42", "Eq44", "Eq45",
    "Eq46", "Eq49", "Eq50", "Eq51", "Eq52", "Eq53", "Eq54", "Eq55", "Eq56", "Eq57", "Eq61",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckVerdict {
    Match,
    MatchUpToSign,
    MatchUpToFactor2,
    Mismatch,
}

impl CheckVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckVerdict::Match => "Match",
            CheckVerdict::MatchUpToSign => "MatchUpToSign",
            CheckVerdict::MatchUpToFactor2 => "MatchUpToFactor2",
            CheckVerdict::Mismatch => "Mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Exact arithmetic: spectra, determinants.
    pub exact: f64,
    /// Finite-difference curvature and Christoffel symbols.
    pub curvature: f64,
    pub christoffel: f64,
    /// Weak-torsion closed forms.
    pub weak_torsion: f64,
    /// Integrated geodesics.
    pub geodesic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            curvature: 1e-8,
            christoffel: 1e-9,
            weak_torsion: 1e-4,
            geodesic: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub lambda: f64,
    pub tau0: f64,
    pub v_r_mean: f64,
    pub theta_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Geodesic step and the horizon of the stretch-metric ratio run.
    pub dt: f64,
    pub ratio_t_end: f64,
    pub tolerances: Tolerances,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            tau0: 1e-3,
            v_r_mean: 1.0,
            theta_grid: vec![FRAC_PI_6, FRAC_PI_3, FRAC_PI_2],
            t_grid: vec![0.5, 1.0, 2.0],
            dt: 1e-3,
            ratio_t_end: 5.0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub expression_id: String,
    pub location: String,
    pub description: String,
    pub engine_values: Vec<f64>,
    pub paper_values: Vec<f64>,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub tolerance: f64,
    pub verdict: CheckVerdict,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub total: usize,
    pub matched: usize,
    pub match_up_to_sign: usize,
    pub match_up_to_factor2: usize,
    pub mismatch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub config: CheckConfig,
    pub entries: Vec<CheckEntry>,
    pub summary: VerdictCounts,
}

impl CheckReport {
    pub fn entry(&self, id: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.expression_id == id)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

fn max_rel(engine: &[f64], paper: &[f64], scale: f64) -> f64 {
    engine
        .iter()
        .zip(paper)
        .map(|(e, p)| rel(*e, scale * p))
        .fold(0.0, f64::max)
}

/// Diffs between engine and quoted values and the resulting verdict.
///
/// `Match` requires every component within `tol` relative; failing that the
/// same test is tried against the negated quote, then against twice and half
/// the quote.
pub fn classify(engine: &[f64], paper: &[f64], tol: f64) -> (f64, f64, CheckVerdict) {
    if engine.len() != paper.len() || engine.is_empty() {
        return (f64::NAN, f64::NAN, CheckVerdict::Mismatch);
    }
    if engine.iter().chain(paper).any(|v| !v.is_finite()) {
        return (f64::NAN, f64::NAN, CheckVerdict::Mismatch);
    }
    let abs = engine
        .iter()
        .zip(paper)
        .map(|(e, p)| (e - p).abs())
        .fold(0.0, f64::max);
    let direct = max_rel(engine, paper, 1.0);
    let verdict = if direct <= tol {
        CheckVerdict::Match
    } else if max_rel(engine, paper, -1.0) <= tol {
        CheckVerdict::MatchUpToSign
    } else if max_rel(engine, paper, 2.0) <= tol || max_rel(engine, paper, 0.5) <= tol {
        CheckVerdict::MatchUpToFactor2
    } else {
        CheckVerdict::Mismatch
    };
    (abs, direct, verdict)
}

struct Draft {
    description: String,
    engine: Vec<f64>,
    paper: Vec<f64>,
    tol: f64,
    note: String,
}

impl Draft {
    fn new(description: impl Into<String>, engine: Vec<f64>, paper: Vec<f64>, tol: f64) -> Self {
        Self {
            description: description.into(),
            engine,
            paper,
            tol,
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

fn location(id: &str) -> &'static str {
    let n: u32 = id.trim_start_matches("Eq").parse().unwrap_or(0);
    match n {
        0..=18 => "section 2: hyperbolic dynamo maps",
        19..=42 => "section 3: curvature from stretching exponents",
        _ => "section 4: geodesic flows",
    }
}

fn finish(id: &str, draft: Result<Draft>) -> CheckEntry {
    match draft {
        Ok(d) => {
            let (abs_diff, rel_diff, verdict) = classify(&d.engine, &d.paper, d.tol);
            CheckEntry {
                expression_id: id.to_string(),
                location: location(id).to_string(),
                description: d.description,
                engine_values: d.engine,
                paper_values: d.paper,
                abs_diff,
                rel_diff,
                tolerance: d.tol,
                verdict,
                note: d.note,
            }
        }
        Err(e) => CheckEntry {
            expression_id: id.to_string(),
            location: location(id).to_string(),
            description: String::new(),
            engine_values: vec![],
            paper_values: vec![],
            abs_diff: f64::NAN,
            rel_diff: f64::NAN,
            tolerance: f64::NAN,
            verdict: CheckVerdict::Mismatch,
            note: format!("internal error: {e}"),
        },
    }
}

/// Runs the whole checklist.
pub fn run_checklist(cfg: &CheckConfig) -> CheckReport {
    let checker = Checker { cfg };
    let entries: Vec<CheckEntry> = CHECKLIST
        .iter()
        .map(|id| finish(id, checker.evaluate(id)))
        .collect();
    let mut summary = VerdictCounts {
        total: entries.len(),
        ..VerdictCounts::default()
    };
    for e in &entries {
        match e.verdict {
            CheckVerdict::Match => summary.matched += 1,
            CheckVerdict::MatchUpToSign => summary.match_up_to_sign += 1,
            CheckVerdict::MatchUpToFactor2 => summary.match_up_to_factor2 += 1,
            CheckVerdict::Mismatch => summary.mismatch += 1,
        }
    }
    CheckReport {
        config: cfg.clone(),
        entries,
        summary,
    }
}

/// Fixed-width text table of a report.
pub fn render_table(report: &CheckReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<6} {:<17} {:>11} {:>11} {:>9}  {}\n",
        "id", "verdict", "abs_diff", "rel_diff", "tol", "description"
    ));
    for e in &report.entries {
        out.push_str(&format!(
            "{:<6} {:<17} {:>11.3e} {:>11.3e} {:>9.1e}  {}\n",
            e.expression_id,
            e.verdict.as_str(),
            e.abs_diff,
            e.rel_diff,
            e.tolerance,
            e.description
        ));
        if !e.note.is_empty() {
            out.push_str(&format!("{:<6} note: {}\n", "", e.note));
        }
    }
    let s = &report.summary;
    out.push_str(&format!(
        "\n{} entries: {} Match, {} MatchUpToSign, {} MatchUpToFactor2, {} Mismatch\n",
        s.total, s.matched, s.match_up_to_sign, s.match_up_to_factor2, s.mismatch
    ));
    out
}

// Closed forms as printed.
mod printed {
    pub fn tube_r1313(tau: f64, r: f64, th: f64) -> f64 {
        0.25 * tau * tau * th.cos().powi(2) / (1.0 - tau * r * th.cos())
    }
    pub fn tube_r1323(tau: f64, r: f64, th: f64) -> f64 {
        -0.125 * tau * tau * r * (2.0 * th).sin() / (1.0 - tau * r * th.cos())
    }
    pub fn tube_r2323(tau: f64, r: f64, th: f64) -> f64 {
        0.25 * tau * tau * r * r * (2.0 * th).sin() / (1.0 - tau * r * th.cos())
    }
    fn ricci_denominator(tau: f64, r: f64, th: f64) -> f64 {
        1.0 - 2.0 * tau * r * th.cos() + tau * tau * r * th.cos()
    }
    pub fn tube_ric11(tau: f64, r: f64, th: f64) -> f64 {
        -0.25 * tau * tau * th.cos().powi(2) / ricci_denominator(tau, r, th)
    }
    pub fn tube_ric12(tau: f64, r: f64, th: f64) -> f64 {
        -0.125 * tau * tau * r * (2.0 * th).sin() / ricci_denominator(tau, r, th)
    }
    pub fn tube_ric33(tau: f64, r: f64, th: f64) -> f64 {
        -0.25 * tau * tau / (1.0 - tau * r * th.cos())
    }
    pub fn tube_ric22(tau: f64, r: f64, th: f64) -> f64 {
        -0.125 * tau * tau * r * (2.0 * th).sin() / ricci_denominator(tau, r, th)
    }
    pub fn stretch_r2323(v: f64, tau: f64, th: f64, t: f64) -> f64 {
        -0.25 * (2.0 * v * tau * (1.0 - th.cos()) * t).exp() * th.sin().powi(2)
    }
    pub fn stretch_ric22(v: f64, tau: f64, th: f64, t: f64) -> f64 {
        0.5 * th.cos() * (-(1.0 - tau * v * t)).exp()
    }
    pub fn stretch_ric33(v: f64, tau: f64, th: f64, t: f64) -> f64 {
        ((1.0 - tau * th.cos()) * v * t).exp() * stretch_ric22(v, tau, th, t)
    }
    pub fn stretch_scalar(v: f64, tau: f64, th: f64, t: f64) -> f64 {
        // λ_θ = ⟨v_r⟩
        0.5 * (-v * (1.0 - tau) * t).exp() * th.sin().powi(2)
    }
    pub fn stretch_gamma(v: f64, tau: f64, th: f64, t: f64) -> f64 {
        0.5 * (-v * (1.0 - tau) * t).exp() * th.sin()
    }
}

struct Checker<'a> {
    cfg: &'a CheckConfig,
}

/// Sample points of the tube comparisons: `r = 1`, the θ grid, `s ∈ {0, 1/2}`.
fn tube_points(thetas: &[f64]) -> Vec<ChartPoint> {
    let mut pts = Vec::new();
    for &s in &[0.0, 0.5] {
        for &th in thetas {
            pts.push(ChartPoint::new(1.0, th, s));
        }
    }
    pts
}

type TubeForm = fn(f64, f64, f64) -> f64;

impl Checker<'_> {
    fn evaluate(&self, id: &str) -> Result<Draft> {
        let cfg = self.cfg;
        let tol = &cfg.tolerances;
        let lambda = cfg.lambda;
        match id {
            "Eq4" => {
                let r = analyze(&MapSpec::twist(1.0, 1.0));
                let lemma = crate::maps::thin_tube_lemma(1.0);
                Ok(Draft::new(
                    "det J_twist = K0, forced to 1 (thin tube)",
                    vec![r.determinant],
                    vec![1.0],
                    tol.exact,
                )
                .note(format!(
                    "thin-tube lemma {:?}; J_twist is unimodular but hyperbolic = {}",
                    lemma.verdict, r.is_hyperbolic
                )))
            }
            "Eq11" => {
                let stf = analyze(&MapSpec::stf3d());
                let claimed = [1.0, -3.0, 1.0];
                let engine: Vec<f64> = stf
                    .eigenvalues
                    .iter()
                    .map(|z| eval_monic(&claimed, *z).re)
                    .collect();
                let eig: Vec<String> = stf.eigenvalues.iter().map(|z| short_number(z.re)).collect();
                let cat = analyze(&MapSpec::cat());
                Ok(Draft::new(
                    "λ²−3λ+1 evaluated at the eigenvalues of the 3D stretch-twist Jacobian",
                    engine,
                    vec![0.0; 3],
                    tol.exact,
                )
                .note(format!(
                    "eigenvalues {{{}}} ≠ roots of λ²−3λ+1; correct characteristic polynomial \
                     (λ−1/2)(λ²−3λ+2), coefficients {:?}; λ²−3λ+1 is the cat map's (coefficients {:?})",
                    eig.join(","),
                    stf.char_poly_coeffs,
                    cat.char_poly_coeffs
                )))
            }
            "Eq12" => {
                let r = analyze(&MapSpec::cat());
                let s5 = 5f64.sqrt();
                Ok(Draft::new(
                    "cat-map eigenvalues (3 +- sqrt5)/2",
                    r.eigenvalues.iter().map(|z| z.re).collect(),
                    vec![(3.0 + s5) / 2.0, (3.0 - s5) / 2.0],
                    tol.exact,
                )
                .note(format!("hyperbolic = {}", r.is_hyperbolic)))
            }
            "Eq15" | "Eq16" | "Eq17" => {
                let (idx, paper, label) = match id {
                    "Eq15" => ((0, 1, 0, 1), lambda * lambda, "R_1212 = lambda^2"),
                    "Eq16" => ((0, 2, 0, 2), -lambda * lambda, "R_1313 = -lambda^2"),
                    _ => ((1, 2, 1, 2), -lambda * lambda, "R_2323 = -lambda^2"),
                };
                let pts = [ChartPoint::new(0.3, -0.2, 0.4), ChartPoint::new(0.0, 0.0, 0.0)];
                let doubled = MetricField::arnold(lambda, ExponentConvention::Doubled);
                let single = MetricField::arnold(lambda, ExponentConvention::PaperEq13);
                let mut engine = Vec::new();
                let mut other = Vec::new();
                for p in &pts {
                    let (i, j, k, l) = idx;
                    engine.push(riemann_at(&doubled, p)?.orthonormal_riemann.get(i, j, k, l));
                    other.push(riemann_at(&single, p)?.orthonormal_riemann.get(i, j, k, l));
                }
                Ok(Draft::new(
                    format!("Arnold metric {label} (orthonormal frame, doubled exponent)"),
                    engine,
                    vec![paper; pts.len()],
                    tol.curvature,
                )
                .note(format!(
                    "with exponents e^(+-lambda z) as written for the metric the same component is {:.12} (= paper/4)",
                    other[0]
                )))
            }
            "Eq18" => {
                let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
                let b = riemann_at(&m, &ChartPoint::new(0.3, -0.2, 0.4))?;
                Ok(Draft::new(
                    "Arnold metric R_33 = R = 2 lambda^2",
                    vec![b.ricci.get(2, 2), b.scalar],
                    vec![2.0 * lambda * lambda; 2],
                    tol.curvature,
                )
                .note(format!(
                    "engine R_11 = {:.3e}, R_22 = {:.3e}; R_33 and R equal -2 lambda^2 in the convention where spheres are positively curved",
                    b.ricci.get(0, 0),
                    b.ricci.get(1, 1)
                )))
            }
            "Eq19" => self.tube_riemann("R_1313", (0, 2, 0, 2), printed::tube_r1313),
            "Eq20" => self.tube_riemann("R_1323", (0, 2, 1, 2), printed::tube_r1323),
            "Eq21" => self.tube_riemann("R_2323", (1, 2, 1, 2), printed::tube_r2323),
            "Eq22" => self.tube_ricci("R_11", (0, 0), printed::tube_ric11),
            "Eq23" => self.tube_ricci("R_12", (0, 1), printed::tube_ric12),
            "Eq24" => self.tube_ricci("R_33", (2, 2), printed::tube_ric33),
            "Eq25" => self.tube_ricci("R_22", (1, 1), printed::tube_ric22),
            "Eq32" => {
                let flow = RadialFlowModel::new(cfg.v_r_mean)?;
                let mut engine = Vec::new();
                for &t in &cfg.t_grid {
                    engine.push(
                        finite_time_exponents(&flow, cfg.tau0, FRAC_PI_3, t, LyapunovConvention::HalfLog)?
                            .lambda_theta,
                    );
                }
                Ok(Draft::new(
                    "lambda_theta = <v_r> from the stretch factor e^(<v_r> t), divisor 2t",
                    engine,
                    vec![cfg.v_r_mean; cfg.t_grid.len()],
                    tol.exact,
                )
                .note(
                    "ln(Lambda)/2t halves the printed value; with Lambda_theta = r^2 the same \
                     definition gives ln(r)/t rather than r/t",
                ))
            }
            "Eq33" => {
                let flow = RadialFlowModel::new(cfg.v_r_mean)?;
                let t = *cfg.t_grid.last().unwrap_or(&1.0);
                let mut engine = Vec::new();
                let mut paper = Vec::new();
                for &th in &cfg.theta_grid {
                    engine.push(
                        finite_time_exponents(&flow, cfg.tau0, th, t, LyapunovConvention::HalfLog)?.lambda_s,
                    );
                    paper.push(-cfg.tau0 * cfg.v_r_mean * th.sin());
                }
                Ok(Draft::new(
                    "lambda_s = -tau0 <v_r> sin(theta)",
                    engine,
                    paper,
                    tol.exact,
                )
                .note("the stretch metric carries cos(theta) in its toroidal exponent; the printed exponent uses sin(theta)"))
            }
            "Eq37" => {
                let (engine, paper) = self.stretch_grid(cfg.tau0, |b| b.riemann_lowered.get(1, 2, 1, 2), |v, tau, th, t| {
                    printed::stretch_r2323(v, tau, th, t)
                })?;
                let flow = RadialFlowModel::new(cfg.v_r_mean)?;
                let (rate, stab) = curvature_stability(&flow, cfg.tau0, cfg.theta_grid[0]);
                let (_, flipped) = curvature_stability(&flow, -cfg.tau0, cfg.theta_grid[0]);
                Ok(Draft::new("stretch metric R_2323", engine, paper, tol.weak_torsion).note(format!(
                    "growth exponent 2<v_r>tau0(1-cos theta) = {rate:.3e} -> {}; negative torsion -> {}",
                    stability_word(stab),
                    stability_word(flipped)
                )))
            }
            "Eq38" => {
                let (engine, paper) = self.stretch_grid(cfg.tau0, |b| b.ricci.get(2, 2), printed::stretch_ric33)?;
                Ok(Draft::new("stretch metric R_33 = e^((1-tau0 cos theta)<v_r>t) R_22", engine, paper, tol.weak_torsion)
                    .note("paper side uses the printed R_22"))
            }
            "Eq39" => {
                let (engine, paper) = self.stretch_grid(cfg.tau0, |b| b.ricci.get(1, 1), printed::stretch_ric22)?;
                Ok(Draft::new("stretch metric R_22", engine, paper, tol.weak_torsion)
                    .note("exponent e^-(1 - tau0 <v_r> t) evaluated as printed"))
            }
            "Eq40" => {
                let (engine, paper) = self.stretch_grid(cfg.tau0, |b| b.scalar, printed::stretch_scalar)?;
                Ok(Draft::new("stretch metric scalar curvature R", engine, paper, tol.weak_torsion)
                    .note("printed as a Ricci tensor, compared as the scalar; lambda_theta = <v_r>"))
            }
            "Eq41" => {
                let (engine, paper) = self.stretch_grid(0.0, |b| b.riemann_lowered.get(1, 2, 1, 2), |_, _, th, _| {
                    -0.25 * th.sin().powi(2)
                })?;
                Ok(Draft::new("stretch metric R_2323 at zero torsion", engine, paper, tol.weak_torsion)
                    .note("at tau0 = 0 the stretch metric is diag(1, e^(<v_r>t), 1), which is flat"))
            }
            "Eq42" => {
                let tube = MetricField::twisted_tube(cfg.tau0);
                let mut engine = Vec::new();
                let mut paper = Vec::new();
                for p in tube_points(&cfg.theta_grid) {
                    engine.push(tube.metric_determinant(&p)?);
                    paper.push(p.x1.powi(2) * (1.0 - cfg.tau0 * p.x1 * p.x2.cos()).powi(2));
                }
                Ok(Draft::new("tube metric determinant r^2 (1 - tau0 r cos theta)^2", engine, paper, tol.exact)
                    .note("det g != 1: the helical flow in the tube is compressible"))
            }
            "Eq44" | "Eq45" | "Eq46" => {
                let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
                let pts = [ChartPoint::new(0.3, -0.2, 0.4), ChartPoint::new(-1.0, 2.0, -0.7)];
                let mut engine = Vec::new();
                let mut paper = Vec::new();
                for p in &pts {
                    let g = christoffel_at(&m, p)?;
                    let z = p.x3;
                    match id {
                        "Eq44" => {
                            engine.extend([g.get(0, 0, 2), g.get(1, 1, 2)]);
                            paper.extend([-lambda, lambda]);
                        }
                        "Eq45" => {
                            engine.push(g.get(2, 0, 0));
                            paper.push(lambda * (-2.0 * lambda * z).exp());
                        }
                        _ => {
                            engine.push(g.get(2, 1, 1));
                            paper.push(-lambda * (2.0 * lambda * z).exp());
                        }
                    }
                }
                let desc = match id {
                    "Eq44" => "Gamma^1_13 = -lambda = -Gamma^2_23",
                    "Eq45" => "Gamma^3_11 = lambda e^(-2 lambda z)",
                    _ => "Gamma^3_22 = -lambda e^(2 lambda z)",
                };
                Ok(Draft::new(desc, engine, paper, tol.christoffel)
                    .note("reproduced with the doubled exponent e^(-+2 lambda z) in the metric"))
            }
            "Eq49" | "Eq50" | "Eq51" => {
                let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
                let states = [
                    GeodesicState::new([0.0, 0.0, 0.4], [1.2, 0.8, 0.5]),
                    GeodesicState::new([0.5, -0.3, -0.2], [-0.4, 1.1, 0.9]),
                ];
                let mut engine = Vec::new();
                let mut paper = Vec::new();
                let mut one = Vec::new();
                for s in &states {
                    let d = geodesic_rhs(&m, s, SymmetryFactor::Two)?;
                    let d1 = geodesic_rhs(&m, s, SymmetryFactor::One)?;
                    let [v1, v2, v3] = s.v;
                    let z = s.x.x3;
                    let (e, e1, p) = match id {
                        "Eq49" => (d.dv[0], d1.dv[0], lambda * v1 * v3),
                        "Eq50" => (d.dv[1], d1.dv[1], -lambda * v2 * v3),
                        _ => (
                            d.dv[2],
                            d1.dv[2],
                            lambda * ((-2.0 * lambda * z).exp() * v1 * v1 - (2.0 * lambda * z).exp() * v2 * v2),
                        ),
                    };
                    engine.push(e);
                    one.push(e1);
                    paper.push(p);
                }
                let (_, _, with_one) = classify(&one, &paper, tol.curvature);
                let desc = match id {
                    "Eq49" => "dv^1/dt = lambda v^1 v^3",
                    "Eq50" => "dv^2/dt = -lambda v^2 v^3",
                    _ => "dv^3/dt = lambda [e^(-2 lambda z)(v^1)^2 - e^(2 lambda z)(v^2)^2]",
                };
                Ok(Draft::new(desc, engine, paper, tol.curvature).note(format!(
                    "engine uses the full symmetric sum over (j,k); counting each cross term once gives {}",
                    with_one.as_str()
                )))
            }
            "Eq52" | "Eq53" => {
                let (v0, v3, z0) = (1.0, 0.5, 0.0);
                let stride = ((0.25 / cfg.dt).round() as usize).max(1);
                let two = compare_arnold_closed_form(v0, lambda, v3, z0, 2.0, cfg.dt, stride, SymmetryFactor::Two)?;
                let one = compare_arnold_closed_form(v0, lambda, v3, z0, 2.0, cfg.dt, stride, SymmetryFactor::One)?;
                let component = if id == "Eq52" { 0 } else { 1 };
                let pick = |c: &crate::geodesic::ArnoldComparison| -> (Vec<f64>, Vec<f64>) {
                    (
                        c.samples.iter().map(|s| s.numeric[component]).collect(),
                        c.samples.iter().map(|s| s.closed_form[component]).collect(),
                    )
                };
                let (e2, p2) = pick(&two);
                let (e1, p1) = pick(&one);
                let (_, r2, v2) = classify(&e2, &p2, tol.geodesic);
                let (_, r1, v1) = classify(&e1, &p1, tol.geodesic);
                let best_two = r2 <= r1;
                let (engine, paper) = if best_two { (e2, p2) } else { (e1, p1) };
                let desc = if id == "Eq52" {
                    "v^1 = v0 e^(lambda (z + v3 t)) against the integrated geodesic, t in [0, 2]"
                } else {
                    "v^2 = v0 e^(-lambda (z - v3 t)) against the integrated geodesic, t in [0, 2]"
                };
                Ok(Draft::new(desc, engine, paper, tol.geodesic).note(format!(
                    "symmetry factor 2: {} (rel {:.3e}); factor 1: {} (rel {:.3e}); values shown for factor {}; \
                     v^3 drifts by {:.3e} (factor 2) so the constant-v^3 assumption fails once z leaves 0",
                    v2.as_str(),
                    r2,
                    v1.as_str(),
                    r1,
                    if best_two { 2 } else { 1 },
                    two.max_v3_change
                )))
            }
            "Eq54" => {
                let (v0, v3) = (1.0, 0.5);
                let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
                let (v1, v2) = crate::geodesic::arnold_closed_form(v0, lambda, v3, 0.0, 0.0);
                let stride = ((0.25 / cfg.dt).round() as usize).max(1);
                let traj = integrate(
                    &m,
                    &GeodesicState::new([0.0, 0.0, 0.0], [v1, v2, v3]),
                    &GeodesicOptions {
                        dt: cfg.dt,
                        t_end: 2.0,
                        stride,
                        ..GeodesicOptions::default()
                    },
                )?;
                let fit = expanding_circle_fit(&traj, v0, lambda);
                let engine: Vec<f64> = traj
                    .samples
                    .iter()
                    .map(|s| s.state.x.x1.powi(2) + s.state.x.x2.powi(2))
                    .collect();
                let paper: Vec<f64> = traj
                    .samples
                    .iter()
                    .map(|s| fit.radius2 * (v0 * lambda * s.t).exp() * (lambda * v0 * s.t).sinh())
                    .collect();
                Ok(Draft::new(
                    "p^2 + q^2 = R^2 e^(lambda_L t) sinh(lambda z), lambda_L = v0 lambda, z = v0 t",
                    engine,
                    paper,
                    tol.geodesic,
                )
                .note(format!(
                    "report only: least-squares R^2 = {:.6e}, relative residual {:.3e}",
                    fit.radius2, fit.relative_residual
                )))
            }
            "Eq55" | "Eq56" => {
                let (engine, paper) = self.stretch_christoffel(id == "Eq55")?;
                let desc = if id == "Eq55" {
                    "stretch metric Gamma^2_33 = e^(-<v_r>(1-tau0)t) sin(theta)/2"
                } else {
                    "stretch metric Gamma^3_23 = e^(-<v_r>(1-tau0)t) sin(theta)/2"
                };
                Ok(Draft::new(desc, engine, paper, tol.christoffel)
                    .note("unbalanced exponent of the printed form read as e^(-<v_r>(1-tau0)t)"))
            }
            "Eq57" => {
                let mut engine = Vec::new();
                for &t in &cfg.t_grid {
                    let m = MetricField::lyapunov_stretch(cfg.v_r_mean, cfg.tau0, t)?;
                    for &th in &cfg.theta_grid {
                        let s = GeodesicState::new([1.0, th, 0.0], [cfg.v_r_mean, 0.7, 1.3]);
                        engine.push(geodesic_rhs(&m, &s, SymmetryFactor::Two)?.dv[0]);
                    }
                }
                let n = engine.len();
                Ok(Draft::new("dv^1/dt = 0 on the stretch metric", engine, vec![0.0; n], tol.exact)
                    .note("the stretch metric does not depend on r, so Gamma^r_jk = 0 and v^r is constant"))
            }
            "Eq61" => {
                let flow = RadialFlowModel::new(cfg.v_r_mean)?;
                let stride = ((0.5 / cfg.dt).round() as usize).max(1);
                let r = tube_geodesic_ratio_check(&flow, FRAC_PI_3, cfg.ratio_t_end, cfg.dt, stride)?;
                Ok(Draft::new(
                    "v_s / v^theta = e^((1 + cos theta)<v_r> t) at tau0 = 1/2",
                    r.samples.iter().map(|s| s.numeric).collect(),
                    r.samples.iter().map(|s| s.closed_form).collect(),
                    tol.geodesic,
                )
                .note(format!(
                    "equipartition at t = 0: ratio {}; metric time coupled to the geodesic parameter{}",
                    r.ratio_at_start(),
                    if r.truncated { "; integration left the domain" } else { "" }
                )))
            }
            other => Err(crate::error::Error::InvalidInput(format!("unknown checklist id {other}"))),
        }
    }

    /// Compares a printed tube curvature form in both chart readings and
    /// keeps the closer one.
    fn tube_compare(
        &self,
        label: &str,
        engine_of: impl Fn(&crate::curvature::CurvatureBundle) -> f64,
        form: TubeForm,
    ) -> Result<Draft> {
        let cfg = self.cfg;
        let tau = cfg.tau0;
        let mut runs = Vec::new();
        for chart in [TubeChart::Frenet, TubeChart::Rotated] {
            let m = MetricField::twisted_tube_in(tau, chart);
            let mut engine = Vec::new();
            let mut paper = Vec::new();
            for p in tube_points(&cfg.theta_grid) {
                let b = riemann_at(&m, &p)?;
                engine.push(engine_of(&b));
                let theta = match chart {
                    TubeChart::Frenet => p.x2,
                    TubeChart::Rotated => p.x2 - tau * p.x3,
                };
                paper.push(form(tau, p.x1, theta));
            }
            let (_, rel, verdict) = classify(&engine, &paper, cfg.tolerances.weak_torsion);
            runs.push((chart, engine, paper, rel, verdict));
        }
        let best = if runs[1].3 < runs[0].3 { 1 } else { 0 };
        let summary: Vec<String> = runs
            .iter()
            .map(|(c, e, _, rel, v)| {
                let emax = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                format!("{c:?} chart: {} (rel {rel:.3e}, max |engine| {emax:.3e})", v.as_str())
            })
            .collect();
        let (chart, engine, paper, _, _) = runs.swap_remove(best);
        Ok(Draft::new(
            format!("twisted tube {label}, weak torsion tau0 = {tau}"),
            engine,
            paper,
            cfg.tolerances.weak_torsion,
        )
        .note(format!(
            "{}; values shown for the {chart:?} chart; K = 1 - tau0 r cos(theta) is linear in r cos(theta), so both charts are flat",
            summary.join("; ")
        )))
    }

    fn tube_riemann(&self, label: &str, idx: (usize, usize, usize, usize), form: TubeForm) -> Result<Draft> {
        let (i, j, k, l) = idx;
        self.tube_compare(label, move |b| b.riemann_lowered.get(i, j, k, l), form)
    }

    fn tube_ricci(&self, label: &str, idx: (usize, usize), form: TubeForm) -> Result<Draft> {
        let (i, j) = idx;
        self.tube_compare(label, move |b| b.ricci.get(i, j), form)
    }

    /// Engine and printed values over the `θ × t` grid of the stretch metric.
    fn stretch_grid(
        &self,
        tau0: f64,
        engine_of: impl Fn(&crate::curvature::CurvatureBundle) -> f64,
        form: impl Fn(f64, f64, f64, f64) -> f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let cfg = self.cfg;
        let mut engine = Vec::new();
        let mut paper = Vec::new();
        for &t in &cfg.t_grid {
            let m = MetricField::lyapunov_stretch(cfg.v_r_mean, tau0, t)?;
            for &th in &cfg.theta_grid {
                let b = riemann_at(&m, &ChartPoint::new(1.0, th, 0.0))?;
                engine.push(engine_of(&b));
                paper.push(form(cfg.v_r_mean, tau0, th, t));
            }
        }
        Ok((engine, paper))
    }

    fn stretch_christoffel(&self, gamma_233: bool) -> Result<(Vec<f64>, Vec<f64>)> {
        let cfg = self.cfg;
        let mut engine = Vec::new();
        let mut paper = Vec::new();
        for &t in &cfg.t_grid {
            let m = MetricField::lyapunov_stretch(cfg.v_r_mean, cfg.tau0, t)?;
            for &th in &cfg.theta_grid {
                let g = christoffel_at(&m, &ChartPoint::new(1.0, th, 0.0))?;
                engine.push(if gamma_233 { g.get(1, 2, 2) } else { g.get(2, 1, 2) });
                paper.push(printed::stretch_gamma(cfg.v_r_mean, cfg.tau0, th, t));
            }
        }
        Ok((engine, paper))
    }
}

fn short_number(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x}")
    } else if (2.0 * x).fract() == 0.0 {
        format!("{}/2", 2.0 * x)
    } else {
        format!("{x}")
    }
}

fn stability_word(s: Stability) -> &'static str {
    match s {
        Stability::Unstable => "unstable as t -> infinity",
        Stability::Stable => "stable as t -> infinity",
        Stability::Neutral => "neutral",
    }
}
