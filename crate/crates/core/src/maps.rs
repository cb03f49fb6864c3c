//! Jacobians of twist, stretch-twist-fold and cat maps: spectra, the
//! unimodular/hyperbolic distinction, the two stretch lemmas, and torus
//! orbits with their finite-time stretching.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cubic_roots, eval_monic, quadratic_roots};

pub const UNIMODULAR_TOL: f64 = 1e-12;
pub const UNIT_CIRCLE_TOL: f64 = 1e-10;
pub const LEMMA_TOL: f64 = 1e-12;

/// A 2×2 or 3×3 real matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl MapSpec {
    pub fn new(name: impl Into<String>, entries: Vec<f64>) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            9 => 3,
            n => {
                return Err(Error::InvalidInput(format!(
                    "a map needs 4 or 9 entries, got {n}"
                )))
            }
        };
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("map entries must be finite".into()));
        }
        Ok(Self {
            name: name.into(),
            dim,
            entries,
        })
    }

    /// Arnold's cat map `[[2, 1], [1, 1]]`.
    pub fn cat() -> Self {
        Self::new("cat", vec![2.0, 1.0, 1.0, 1.0]).unwrap()
    }

    /// Twist-map Jacobian `[[1, −τ₀], [0, K₀]]`.
    pub fn twist(k0: f64, tau0: f64) -> Self {
        Self::new("twist", vec![1.0, -tau0, 0.0, k0]).unwrap()
    }

    /// Three-dimensional stretch-twist Jacobian `[[K₁, 0, 0], [0, 1, −τ₀], [0, 0, K₀]]`.
    pub fn stf3d_with(k0: f64, k1: f64, tau0: f64) -> Self {
        Self::new(
            "stf3d",
            vec![k1, 0.0, 0.0, 0.0, 1.0, -tau0, 0.0, 0.0, k0],
        )
        .unwrap()
    }

    /// Radius halved, arclength doubled, unit torsion.
    pub fn stf3d() -> Self {
        Self::stf3d_with(2.0, 0.5, 1.0)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self::new("identity", entries)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    pub fn determinant(&self) -> f64 {
        let m = |i, j| self.at(i, j);
        match self.dim {
            2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
            _ => {
                m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
            }
        }
    }

    /// Monic characteristic polynomial `det(λI − M)`, highest degree first.
    pub fn char_poly(&self) -> Vec<f64> {
        match self.dim {
            2 => vec![1.0, -self.trace(), self.determinant()],
            _ => {
                let m = |i, j| self.at(i, j);
                let minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2)
                    - m(0, 2) * m(2, 0)
                    + m(1, 1) * m(2, 2)
                    - m(1, 2) * m(2, 1);
                vec![1.0, -self.trace(), minors, -self.determinant()]
            }
        }
    }

    pub fn is_integer(&self) -> bool {
        self.entries.iter().all(|v| v.fract() == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub determinant: f64,
    pub trace: f64,
    /// Monic characteristic polynomial, highest degree first.
    pub char_poly_coeffs: Vec<f64>,
    /// Sorted by modulus, largest first.
    pub eigenvalues: Vec<Complex64>,
    /// `|det − 1| ≤ 1e-12`.
    pub is_unimodular: bool,
    /// Unimodular with no eigenvalue within `1e-10` of the unit circle.
    pub is_hyperbolic: bool,
}

impl EigenReport {
    pub fn dominant_modulus(&self) -> f64 {
        self.eigenvalues[0].norm()
    }
}

fn sort_spectrum(mut eig: Vec<Complex64>) -> Vec<Complex64> {
    eig.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    eig
}

/// Spectrum and hyperbolicity of a map's Jacobian.
pub fn analyze(map: &MapSpec) -> EigenReport {
    let coeffs = map.char_poly();
    let eigenvalues = match map.dim {
        2 => quadratic_roots(coeffs[1], coeffs[2]).to_vec(),
        _ => cubic_roots(coeffs[1], coeffs[2], coeffs[3]).to_vec(),
    };
    let eigenvalues = sort_spectrum(eigenvalues);
    let determinant = map.determinant();
    let is_unimodular = (determinant - 1.0).abs() <= UNIMODULAR_TOL;
    let off_circle = eigenvalues
        .iter()
        .all(|z| (z.norm() - 1.0).abs() > UNIT_CIRCLE_TOL);
    EigenReport {
        determinant,
        trace: map.trace(),
        char_poly_coeffs: coeffs,
        eigenvalues,
        is_unimodular,
        is_hyperbolic: is_unimodular && off_circle,
    }
}

/// Residual of the characteristic polynomial at each eigenvalue.
pub fn char_poly_residuals(report: &EigenReport) -> Vec<f64> {
    report
        .eigenvalues
        .iter()
        .map(|&z| eval_monic(&report.char_poly_coeffs, z).norm())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub verdict: Verdict,
    /// The quantity tested against 1 (the determinant).
    pub value: f64,
    pub interpretation: Option<String>,
}

/// Unimodular twist maps with constant stretch force `K₀ = 1`, the thin-tube
/// limit `K(0, s) = 1`.
pub fn thin_tube_lemma(k0: f64) -> LemmaReport {
    let det = analyze(&MapSpec::twist(k0, 1.0)).determinant;
    if (det - 1.0).abs() <= LEMMA_TOL {
        LemmaReport {
            verdict: Verdict::Pass,
            value: det,
            interpretation: Some("K(0,s)=1 thin-tube limit".into()),
        }
    } else {
        LemmaReport {
            verdict: Verdict::Fail,
            value: det,
            interpretation: Some(format!("det J_twist = {det} != 1")),
        }
    }
}

/// Unimodularity of the 3D stretch-twist Jacobian forces `K₀ = 1/K₁`.
pub fn stretch_contraction_lemma(k0: f64, k1: f64) -> Result<LemmaReport> {
    if !(k0 > 0.0 && k1 > 0.0) {
        return Err(Error::NonPositiveStretch { k0, k1 });
    }
    let det = MapSpec::stf3d_with(k0, k1, 1.0).determinant();
    let pass = (det - 1.0).abs() <= LEMMA_TOL;
    Ok(LemmaReport {
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        value: det,
        interpretation: Some(if pass {
            "stretch is the inverse of contraction: K0 = 1/K1".into()
        } else {
            format!("K0*K1 = {det} != 1")
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitStretchReport {
    pub n_steps: usize,
    /// `ln σ_max(Mⁿ)/n` at the final step.
    pub finite_time_exponent: f64,
    /// `ln |λ_max|`.
    pub limit_exponent: f64,
    /// Finite-time exponent after each step `1..=n`.
    pub exponent_history: Vec<f64>,
    /// Smallest `k ≥ 1` with `x_k = x_0` exactly, if it occurred within the run.
    pub period: Option<usize>,
}

fn check_automorphism(map: &MapSpec) -> Result<()> {
    if map.dim != 2 {
        return Err(Error::NotAutomorphism("torus maps must be 2x2".into()));
    }
    if !map.is_integer() {
        return Err(Error::NotAutomorphism("entries must be integers".into()));
    }
    let det = map.determinant();
    if det.abs() != 1.0 {
        return Err(Error::NotAutomorphism(format!("determinant {det} is not +-1")));
    }
    Ok(())
}

fn largest_singular_value(m: &[[f64; 2]; 2]) -> f64 {
    let fro2 = m[0][0].powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + m[1][1].powi(2);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
    (0.5 * (fro2 + disc.sqrt())).sqrt()
}

/// Finite-time stretching exponents `ln σ_max(Mⁿ)/n` for `n = 1..=steps`.
///
/// The running product is renormalized every step, so the result does not
/// overflow for long runs.
pub fn finite_time_stretching(map: &MapSpec, steps: usize) -> Result<Vec<f64>> {
    if map.dim != 2 {
        return Err(Error::InvalidInput(
            "finite-time stretching is implemented for 2x2 maps".into(),
        ));
    }
    let m = [[map.at(0, 0), map.at(0, 1)], [map.at(1, 0), map.at(1, 1)]];
    let mut prod = [[1.0, 0.0], [0.0, 1.0]];
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(steps);
    for n in 1..=steps {
        let mut next = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = m[i][0] * prod[0][j] + m[i][1] * prod[1][j];
            }
        }
        let s = next.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        if s == 0.0 {
            return Err(Error::InvalidInput("map product collapsed to zero".into()));
        }
        for v in next.iter_mut().flatten() {
            *v /= s;
        }
        log_scale += s.ln();
        prod = next;
        out.push((log_scale + largest_singular_value(&prod).ln()) / n as f64);
    }
    Ok(out)
}

/// Iterates `x ↦ M x mod 1` on the torus from `p0` for `n` steps.
///
/// Returns the orbit `x_0..=x_n` and its stretching report.
pub fn iterate_torus_map(
    map: &MapSpec,
    p0: [f64; 2],
    n: usize,
) -> Result<(Vec<[f64; 2]>, OrbitStretchReport)> {
    check_automorphism(map)?;
    if !(p0[0].is_finite() && p0[1].is_finite()) {
        return Err(Error::InvalidInput("initial point must be finite".into()));
    }
    let start = [p0[0].rem_euclid(1.0), p0[1].rem_euclid(1.0)];
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(start);
    let mut period = None;
    let mut x = start;
    for k in 1..=n {
        x = [
            (map.at(0, 0) * x[0] + map.at(0, 1) * x[1]).rem_euclid(1.0),
            (map.at(1, 0) * x[0] + map.at(1, 1) * x[1]).rem_euclid(1.0),
        ];
        orbit.push(x);
        if period.is_none() && x == start {
            period = Some(k);
        }
    }
    let history = finite_time_stretching(map, n)?;
    let report = OrbitStretchReport {
        n_steps: n,
        finite_time_exponent: history.last().copied().unwrap_or(f64::NAN),
        limit_exponent: analyze(map).dominant_modulus().ln(),
        exponent_history: history,
        period,
    };
    Ok((orbit, report))
}

/// Exact period of the lattice point `(a, b)/q` under an integer torus
/// automorphism.
pub fn lattice_period(map: &MapSpec, point: (i64, i64), q: i64) -> Result<usize> {
    check_automorphism(map)?;
    if q <= 0 {
        return Err(Error::InvalidInput(format!("denominator must be positive, got {q}")));
    }
    let m: Vec<i64> = map.entries.iter().map(|&v| v as i64).collect();
    let start = (point.0.rem_euclid(q), point.1.rem_euclid(q));
    let mut x = start;
    // an automorphism permutes the q² lattice points
    let bound = (q as usize) * (q as usize);
    for k in 1..=bound {
        x = (
            (m[0] * x.0 + m[1] * x.1).rem_euclid(q),
            (m[2] * x.0 + m[3] * x.1).rem_euclid(q),
        );
        if x == start {
            return Ok(k);
        }
    }
    unreachable!("automorphism orbits on a finite lattice are periodic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_map_spectrum() {
        let r = analyze(&MapSpec::cat());
        let s5 = 5f64.sqrt();
        assert_eq!(r.determinant, 1.0);
        assert_eq!(r.char_poly_coeffs, vec![1.0, -3.0, 1.0]);
        assert!((r.eigenvalues[0].re - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert!((r.eigenvalues[1].re - (3.0 - s5) / 2.0).abs() < 1e-12);
        assert!(r.is_unimodular && r.is_hyperbolic);
    }

    #[test]
    fn identity_is_unimodular_not_hyperbolic() {
        let r = analyze(&MapSpec::identity(2).unwrap());
        assert!(r.is_unimodular);
        assert!(!r.is_hyperbolic);
        assert!(r.eigenvalues.iter().all(|z| (z - 1.0).norm() < 1e-15));
    }

    #[test]
    fn stf3d_spectrum_has_unit_eigenvalue() {
        let r = analyze(&MapSpec::stf3d());
        assert!((r.determinant - 1.0).abs() < 1e-15);
        let re: Vec<f64> = r.eigenvalues.iter().map(|z| z.re).collect();
        for (v, e) in re.iter().zip([2.0, 1.0, 0.5]) {
            assert!((v - e).abs() < 1e-14);
        }
        assert!(r.is_unimodular);
        assert!(!r.is_hyperbolic);
        // (λ − 1/2)(λ² − 3λ + 2) = λ³ − 3.5λ² + 3.5λ − 1
        assert_eq!(r.char_poly_coeffs, vec![1.0, -3.5, 3.5, -1.0]);
    }

    #[test]
    fn lemmas() {
        assert_eq!(thin_tube_lemma(1.0).verdict, Verdict::Pass);
        assert_eq!(thin_tube_lemma(2.0).verdict, Verdict::Fail);
        assert_eq!(thin_tube_lemma(1.0 + 1e-15).verdict, Verdict::Pass);
        assert_eq!(
            thin_tube_lemma(1.0).interpretation.as_deref(),
            Some("K(0,s)=1 thin-tube limit")
        );
        assert_eq!(stretch_contraction_lemma(2.0, 0.5).unwrap().verdict, Verdict::Pass);
        assert_eq!(stretch_contraction_lemma(1.0, 1.0).unwrap().verdict, Verdict::Pass);
        assert_eq!(stretch_contraction_lemma(2.0, 1.0).unwrap().verdict, Verdict::Fail);
        assert!(matches!(
            stretch_contraction_lemma(0.0, 1.0),
            Err(Error::NonPositiveStretch { .. })
        ));
    }

    #[test]
    fn cat_orbits() {
        let (orbit, _) = iterate_torus_map(&MapSpec::cat(), [0.0, 0.0], 10).unwrap();
        assert!(orbit.iter().all(|p| *p == [0.0, 0.0]));

        let (_, report) = iterate_torus_map(&MapSpec::cat(), [0.5, 0.5], 10).unwrap();
        assert_eq!(report.period, Some(3));
        assert_eq!(lattice_period(&MapSpec::cat(), (1, 1), 2).unwrap(), 3);
    }

    #[test]
    fn cat_stretching_converges() {
        let (_, report) = iterate_torus_map(&MapSpec::cat(), [0.1, 0.7], 50).unwrap();
        assert!((report.finite_time_exponent - 0.962_423_650_119_206_9).abs() < 1e-6);
        assert!((report.limit_exponent - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn non_automorphisms_rejected() {
        let m = MapSpec::new("m", vec![2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            iterate_torus_map(&m, [0.1, 0.1], 3),
            Err(Error::NotAutomorphism(_))
        ));
        let m = MapSpec::new("m", vec![1.5, 0.0, 0.0, 1.0 / 1.5]).unwrap();
        assert!(iterate_torus_map(&m, [0.1, 0.1], 3).is_err());
        assert!(MapSpec::new("bad", vec![1.0; 5]).is_err());
    }
}
