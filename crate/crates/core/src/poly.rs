//! Closed-form roots of monic quadratics and cubics.

use num_complex::Complex64;

/// Roots of `x² + b x + c`.
///
/// The real branch uses `q = −(b + sign(b)√Δ)/2`, `x₁ = q`, `x₂ = c/q` to avoid
/// cancellation in the smaller root.
pub fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            // b = 0 and c = 0
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -0.5 * b;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn cubic_value(a: f64, b: f64, c: f64, x: f64) -> f64 {
    ((x + a) * x + b) * x + c
}

fn polish(a: f64, b: f64, c: f64, mut x: f64) -> f64 {
    for _ in 0..3 {
        let f = cubic_value(a, b, c, x);
        let df = (3.0 * x + 2.0 * a) * x + b;
        if f == 0.0 || df == 0.0 {
            break;
        }
        let next = x - f / df;
        if cubic_value(a, b, c, next).abs() < f.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// Roots of `x³ + a x² + b x + c`.
///
/// One real root comes from the trigonometric (three real roots) or Cardano
/// (one real root) formula on the depressed cubic, is refined by Newton steps,
/// and the remaining pair from the deflated quadratic.
pub fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let scale = 1.0 + a.abs().max(b.abs().sqrt()).max(c.abs().cbrt());

    let t = if p.abs() <= 1e-14 * scale * scale && q.abs() <= 1e-14 * scale * scale * scale {
        0.0
    } else {
        let half_q = 0.5 * q;
        let third_p = p / 3.0;
        let d = half_q * half_q + third_p * third_p * third_p;
        if d < 0.0 {
            // three real roots; take the largest
            let m = 2.0 * (-third_p).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            m * (arg.acos() / 3.0).cos()
        } else {
            let u = (-half_q - half_q.signum() * d.sqrt()).cbrt();
            if u == 0.0 {
                0.0
            } else {
                u - third_p / u
            }
        }
    };

    let r1 = polish(a, b, c, t - shift);
    // x³ + a x² + b x + c = (x − r1)(x² + (a + r1) x + (b + (a + r1) r1))
    let b2 = a + r1;
    let c2 = b + b2 * r1;
    let [r2, r3] = quadratic_roots(b2, c2);
    let refine = |z: Complex64| {
        if z.im == 0.0 {
            Complex64::new(polish(a, b, c, z.re), 0.0)
        } else {
            z
        }
    };
    [Complex64::new(r1, 0.0), refine(r2), refine(r3)]
}

/// Evaluates the monic polynomial with coefficients `[1, c_{n−1}, …, c_0]`.
pub fn eval_monic(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k)
}
