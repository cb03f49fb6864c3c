use approx::assert_relative_eq;
use nalgebra::Matrix2;
use tubedyn::maps::{
    analyze, char_poly_residuals, finite_time_stretching, iterate_torus_map, lattice_period,
    stretch_contraction_lemma, thin_tube_lemma, MapSpec, Verdict,
};
use tubedyn::Error;

#[test]
fn cat_spectrum() {
    let r = analyze(&MapSpec::cat());
    let s5 = 5f64.sqrt();
    assert_relative_eq!(r.eigenvalues[0].re, (3.0 + s5) / 2.0, max_relative = 1e-12);
    assert_relative_eq!(r.eigenvalues[1].re, (3.0 - s5) / 2.0, max_relative = 1e-12);
    assert!(r.is_unimodular && r.is_hyperbolic);
}

#[test]
fn stf3d_spectrum() {
    let r = analyze(&MapSpec::stf3d());
    let re: Vec<f64> = r.eigenvalues.iter().map(|z| z.re).collect();
    for (a, b) in re.iter().zip([2.0, 1.0, 0.5]) {
        assert_relative_eq!(*a, b, epsilon = 1e-12);
    }
    assert!(r.is_unimodular);
    assert!(!r.is_hyperbolic);
    assert_eq!(r.char_poly_coeffs, vec![1.0, -3.5, 3.5, -1.0]);
}

#[test]
fn identity_is_unimodular_not_hyperbolic() {
    let r = analyze(&MapSpec::new("id", vec![1.0, 0.0, 0.0, 1.0]).unwrap());
    assert!(r.is_unimodular);
    assert!(!r.is_hyperbolic);
}

#[test]
fn exhaustive_integer_unimodular_maps() {
    let range = -3i32..=3;
    let mut count = 0;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    count += 1;
                    let entries = vec![a as f64, b as f64, c as f64, d as f64];
                    let r = analyze(&MapSpec::new("m", entries).unwrap());
                    let brute = Matrix2::new(a as f64, b as f64, c as f64, d as f64)
                        .complex_eigenvalues()
                        .iter()
                        .all(|z| (z.norm() - 1.0).abs() > 1e-10);
                    assert_eq!(r.is_hyperbolic, (a + d).abs() > 2, "{a} {b} {c} {d}");
                    assert_eq!(r.is_hyperbolic, brute, "{a} {b} {c} {d}");
                }
            }
        }
    }
    assert!(count > 50);
}

#[test]
fn spectrum_product_and_sum() {
    let maps = [
        MapSpec::cat(),
        MapSpec::stf3d(),
        MapSpec::twist(2.0, 0.7),
        MapSpec::new("rot", vec![0.0, -1.0, 1.0, 0.0]).unwrap(),
        MapSpec::new("m3", vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]).unwrap(),
    ];
    for m in &maps {
        let r = analyze(m);
        let prod = r.eigenvalues.iter().fold(num_complex::Complex64::new(1.0, 0.0), |p, z| p * z);
        let sum: num_complex::Complex64 = r.eigenvalues.iter().sum();
        assert!((prod.re - r.determinant).abs() < 1e-12 * r.determinant.abs().max(1.0), "{}", m.name);
        assert!(prod.im.abs() < 1e-12);
        assert!((sum.re - r.trace).abs() < 1e-12 * r.trace.abs().max(1.0), "{}", m.name);
        assert!(char_poly_residuals(&r).iter().all(|v| *v < 1e-12));
    }
}

#[test]
fn lemma_suite() {
    assert_eq!(thin_tube_lemma(1.0).verdict, Verdict::Pass);
    assert_eq!(thin_tube_lemma(2.0).verdict, Verdict::Fail);
    assert_eq!(stretch_contraction_lemma(2.0, 0.5).unwrap().verdict, Verdict::Pass);
    assert_eq!(stretch_contraction_lemma(2.0, 1.0).unwrap().verdict, Verdict::Fail);
    assert!(matches!(stretch_contraction_lemma(0.0, 1.0), Err(Error::NonPositiveStretch { .. })));
}

#[test]
fn cat_orbit_and_exponent() {
    let (orbit, rep) = iterate_torus_map(&MapSpec::cat(), [0.5, 0.5], 50).unwrap();
    assert_eq!(orbit.len(), 51);
    assert_eq!(rep.period, Some(3));
    assert!((rep.finite_time_exponent - 0.962_423_650_119_206_9).abs() < 1e-6);
    assert_relative_eq!(rep.limit_exponent, 0.962_423_650_119_206_9, max_relative = 1e-14);
}

#[test]
fn finite_time_exponent_converges() {
    // symmetric: σ_max(Mⁿ) = λⁿ at every n
    let limit = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    for v in finite_time_stretching(&MapSpec::cat(), 200).unwrap() {
        assert!((v - limit).abs() < 1e-12);
    }
    let m = MapSpec::new("m", vec![3.0, 1.0, 2.0, 1.0]).unwrap();
    let limit = analyze(&m).dominant_modulus().ln();
    let h = finite_time_stretching(&m, 400).unwrap();
    let errs: Vec<f64> = h.iter().map(|v| (v - limit).abs()).collect();
    assert!(errs[9] > errs[49] && errs[49] > errs[199]);
    assert!(errs[399] < 1e-3);
}

#[test]
fn lattice_points_are_periodic() {
    let cat = MapSpec::cat();
    assert_eq!(lattice_period(&cat, (1, 1), 2).unwrap(), 3);
    for q in [3, 5, 7, 10] {
        for a in 0..q {
            for b in 0..q {
                let k = lattice_period(&cat, (a, b), q).unwrap();
                assert!(k >= 1 && k <= (q * q) as usize);
            }
        }
    }
    assert_eq!(lattice_period(&cat, (0, 0), 7).unwrap(), 1);
}

#[test]
fn non_automorphisms_rejected() {
    assert!(matches!(
        iterate_torus_map(&MapSpec::twist(2.0, 1.0), [0.1, 0.2], 5),
        Err(Error::NotAutomorphism(_))
    ));
    assert!(matches!(
        iterate_torus_map(&MapSpec::new("x", vec![0.5, 0.0, 0.0, 2.0]).unwrap(), [0.1, 0.2], 5),
        Err(Error::NotAutomorphism(_))
    ));
    assert!(MapSpec::new("bad", vec![1.0, 2.0, 3.0]).is_err());
}
