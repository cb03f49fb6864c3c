use tubedyn_py::*;

#[test]
fn arnold_scalar_through_bindings() {
    let r = scalar_curvature("arnold", [0.0, 0.0, 0.4], 2.0, 0.0, 0.0, 0.0, "doubled", "frenet").unwrap();
    assert!((r + 8.0).abs() < 1e-7, "{r}");
}

#[test]
fn cat_spectrum_json() {
    let v: serde_json::Value = serde_json::from_str(&map_spectrum(None).unwrap()).unwrap();
    let lead = v["eigenvalues"][0][0].as_f64().unwrap();
    assert!((lead - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(v["is_hyperbolic"], true);
}

#[test]
fn geodesic_and_checklist_json() {
    let traj = integrate_geodesic(
        "euclidean", [0.0; 3], [1.0, 0.0, 0.0], 1e-2, 1.0, 10, 1.0, 0.0, 0.0, "doubled", "frenet", 2, None,
    )
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&traj).unwrap();
    assert_eq!(v["termination"]["status"], "completed");
    let rep: serde_json::Value = serde_json::from_str(&check_paper(Some(r#"{"tau0": 0.01}"#), false).unwrap()).unwrap();
    assert_eq!(rep["config"]["tau0"], 0.01);
}

#[test]
fn bad_names_are_errors() {
    assert!(metric_at("bogus", [0.0; 3], 1.0, 0.0, 0.0, 0.0, "doubled", "frenet").is_err());
    assert!(lyapunov_exponents(1.0, 0.1, 0.5, 1.0, "nope").is_err());
    assert!(check_paper(Some(r#"{"unknown": 1}"#), false).is_err());
}
