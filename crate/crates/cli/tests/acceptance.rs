//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any fails.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde_json::Value;
use tubedyn::checklist::CHECKLIST;
use tubedyn::dynamo::{anti_dynamo_check, RadialFlowModel};
use tubedyn::geodesic::{
    integrate, speed_drift, time_reversal_error, tube_geodesic_ratio_check, GeodesicOptions, GeodesicState,
    TimeMode,
};
use tubedyn::maps::{iterate_torus_map, stretch_contraction_lemma, thin_tube_lemma, MapSpec, Verdict};
use tubedyn::{christoffel_at, riemann_at, ChartPoint, ExponentConvention, MetricField, TubeChart};

type Outcome = Result<String, String>;

fn bin(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tubedyn"))
        .env_remove("TUBEDYN_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

fn json(out: &Output) -> Result<Value, String> {
    serde_json::from_slice(&out.stdout).map_err(|e| format!("bad json: {e}"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn eigen_re(v: &Value) -> Vec<f64> {
    v["eigenvalues"]
        .as_array()
        .map(|a| a.iter().filter_map(|z| z["re"].as_f64()).collect())
        .unwrap_or_default()
}

fn check_paper_json() -> Result<(Value, Vec<u8>), String> {
    let (out, _) = bin(&["check-paper", "--format", "json"]);
    ensure(out.status.success(), "check-paper exited nonzero")?;
    Ok((json(&out)?, out.stdout))
}

fn entry<'a>(report: &'a Value, id: &str) -> Result<&'a Value, String> {
    report["entries"]
        .as_array()
        .and_then(|a| a.iter().find(|e| e["expression_id"] == id))
        .ok_or_else(|| format!("{id} missing"))
}

fn c1_cat_map() -> Outcome {
    let (out, dt) = bin(&["map", "--name", "cat"]);
    let v = json(&out)?;
    let eig = eigen_re(&v);
    let s5 = 5f64.sqrt();
    let err = (eig[0] - (3.0 + s5) / 2.0).abs().max((eig[1] - (3.0 - s5) / 2.0).abs());
    ensure(err <= 1e-12, format!("eigenvalue error {err:e}"))?;
    ensure(v["is_hyperbolic"] == true, "not hyperbolic")?;
    ensure(dt < Duration::from_secs(1), format!("runtime {dt:?}"))?;
    Ok(format!("max error {err:.1e}, runtime {:.0} ms", dt.as_secs_f64() * 1e3))
}

fn c2_stf3d() -> Outcome {
    let (out, dt) = bin(&["map", "--name", "stf3d"]);
    let v = json(&out)?;
    let eig = eigen_re(&v);
    let err = eig
        .iter()
        .zip([2.0, 1.0, 0.5])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    ensure(eig.len() == 3 && err <= 1e-12, format!("eigenvalues {eig:?}"))?;
    ensure(v["is_hyperbolic"] == false, "stf3d reported hyperbolic")?;
    ensure(dt < Duration::from_secs(1), format!("runtime {dt:?}"))?;
    let (report, _) = check_paper_json()?;
    let e = entry(&report, "Eq11")?;
    ensure(e["verdict"] == "Mismatch", format!("Eq11 verdict {}", e["verdict"]))?;
    let note = e["note"].as_str().unwrap_or("");
    ensure(note.contains("(λ−1/2)(λ²−3λ+2)"), "Eq11 note lacks the correct polynomial")?;
    Ok(format!("eigenvalues {{2,1,1/2}} within {err:.1e}; Eq11 Mismatch; runtime {:.0} ms", dt.as_secs_f64() * 1e3))
}

fn c3_lemmas() -> Outcome {
    ensure(thin_tube_lemma(1.0).verdict == Verdict::Pass, "thin tube K0=1")?;
    let ok = stretch_contraction_lemma(2.0, 0.5).map_err(|e| e.to_string())?;
    ensure(ok.verdict == Verdict::Pass, "stretch-contraction (2, 1/2)")?;
    let bad = stretch_contraction_lemma(2.0, 1.0).map_err(|e| e.to_string())?;
    ensure(bad.verdict == Verdict::Fail, "stretch-contraction (2, 1) should fail")?;
    Ok("K0=1 pass, (2,1/2) pass, (2,1) fail".into())
}

fn c4_arnold() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0] {
        let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
        let b = riemann_at(&m, &ChartPoint::new(0.2, -0.1, 0.3)).map_err(|e| e.to_string())?;
        let l2 = lambda * lambda;
        let o = &b.orthonormal_riemann;
        for (got, want) in [
            (o.get(0, 1, 0, 1), l2),
            (o.get(0, 2, 0, 2), -l2),
            (o.get(1, 2, 1, 2), -l2),
            (b.ricci.get(2, 2).abs(), 2.0 * l2),
            (b.scalar.abs(), 2.0 * l2),
        ] {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    ensure(worst <= 1e-8, format!("relative error {worst:e}"))?;
    let dt = start.elapsed();
    ensure(dt < Duration::from_secs(1), format!("runtime {dt:?}"))?;
    let (report, _) = check_paper_json()?;
    let e18 = entry(&report, "Eq18")?;
    ensure(e18["verdict"] == "MatchUpToSign", format!("Eq18 verdict {}", e18["verdict"]))?;
    for id in ["Eq15", "Eq16", "Eq17"] {
        ensure(entry(&report, id)?["verdict"] == "Match", format!("{id} not Match"))?;
    }
    Ok(format!("max relative error {worst:.1e}; Eq18 MatchUpToSign; runtime {:.1} ms", dt.as_secs_f64() * 1e3))
}

fn c5_christoffel() -> Outcome {
    let mut rng = StdRng::seed_from_u64(44);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let lambda = rng.gen_range(0.3..2.0);
        let m = MetricField::arnold(lambda, ExponentConvention::Doubled);
        let p = ChartPoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0));
        let g = christoffel_at(&m, &p).map_err(|e| e.to_string())?;
        let z = p.x3;
        for (got, want) in [
            (g.get(0, 0, 2), -lambda),
            (g.get(1, 1, 2), lambda),
            (g.get(2, 0, 0), lambda * (-2.0 * lambda * z).exp()),
            (g.get(2, 1, 1), -lambda * (2.0 * lambda * z).exp()),
        ] {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    ensure(worst <= 1e-9, format!("relative error {worst:e}"))?;
    Ok(format!("20 points, max relative error {worst:.1e}"))
}

fn c6_tube_determinant() -> Outcome {
    let mut rng = StdRng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let tau = rng.gen_range(-0.45..0.45);
        let chart = if rng.gen_bool(0.5) { TubeChart::Frenet } else { TubeChart::Rotated };
        let m = MetricField::twisted_tube_in(tau, chart);
        let p = ChartPoint::new(rng.gen_range(0.05..2.0), rng.gen_range(-3.2..3.2), rng.gen_range(-3.0..3.0));
        let theta = match chart {
            TubeChart::Frenet => p.x2,
            TubeChart::Rotated => p.x2 - tau * p.x3,
        };
        let want = p.x1.powi(2) * (1.0 - tau * p.x1 * theta.cos()).powi(2);
        let got = m.metric_determinant(&p).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs() / want);
    }
    ensure(worst <= 1e-12, format!("relative error {worst:e}"))?;
    Ok(format!("100 points, max relative error {worst:.1e}"))
}

fn c7_flat_without_flow() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = MetricField::lyapunov_stretch(0.0, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..10.0))
            .map_err(|e| e.to_string())?;
        let p = ChartPoint::new(rng.gen_range(0.1..2.0), rng.gen_range(-3.2..3.2), rng.gen_range(-3.0..3.0));
        let b = riemann_at(&m, &p).map_err(|e| e.to_string())?;
        worst = worst
            .max(b.riemann_lowered.max_abs())
            .max(b.ricci.packed().iter().fold(0.0f64, |a, v| a.max(v.abs())))
            .max(b.scalar.abs());
    }
    ensure(worst < 1e-8, format!("largest component {worst:e}"))?;
    Ok(format!("100 points, largest component {worst:.1e}"))
}

fn c8_anti_dynamo() -> Outcome {
    let zero = anti_dynamo_check(&RadialFlowModel::new(0.0).unwrap(), 1e-3, 1.0, 10.0, 100).map_err(|e| e.to_string())?;
    ensure(zero.verdict == Verdict::Pass, "zero flow should pass")?;
    let mut worst: f64 = 0.0;
    for v in [0.1, 0.5, 1.0] {
        let r = anti_dynamo_check(&RadialFlowModel::new(v).unwrap(), 1e-3, 1.0, 10.0, 100).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Fail, format!("v = {v} should fail"))?;
        worst = worst.max((r.growth_rate_theta - v).abs());
    }
    ensure(worst <= 1e-10, format!("growth-rate error {worst:e}"))?;
    Ok(format!("zero flow passes; growth rate = <v_r> within {worst:.1e}"))
}

fn random_states(metric: &str, rng: &mut StdRng) -> Vec<GeodesicState> {
    (0..3)
        .map(|_| {
            let v = [rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)];
            match metric {
                "tube" | "tube_rotated" | "stretch" => GeodesicState::new(
                    [rng.gen_range(0.9..1.1), rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0)],
                    [0.05 * v[0], v[1], v[2]],
                ),
                _ => GeodesicState::new(
                    [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.2..0.2)],
                    [v[0], v[1], 0.25 * v[2]],
                ),
            }
        })
        .collect()
}

/// Drift below this is dominated by accumulated round-off (about 1e-14).
const ORDER_FLOOR: f64 = 1e-12;

fn c9_geodesic_quality() -> Outcome {
    let catalog: Vec<(&str, MetricField, TimeMode)> = vec![
        ("euclidean", MetricField::euclidean(), TimeMode::default()),
        ("arnold", MetricField::arnold(1.0, ExponentConvention::Doubled), TimeMode::default()),
        ("arnold_eq13", MetricField::arnold(1.0, ExponentConvention::PaperEq13), TimeMode::default()),
        ("tube", MetricField::twisted_tube(0.1), TimeMode::default()),
        ("tube_rotated", MetricField::twisted_tube_in(0.1, TubeChart::Rotated), TimeMode::default()),
        ("stretch", MetricField::lyapunov_stretch(0.5, 0.3, 0.0).unwrap(), TimeMode::Frozen(1.0)),
    ];
    let mut rng = StdRng::seed_from_u64(9);
    let (mut max_drift, mut max_back, mut min_ratio): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    let mut pairs = Vec::new();
    for (name, m, mode) in &catalog {
        for s0 in random_states(name, &mut rng) {
            let opts = |dt: f64| GeodesicOptions {
                dt,
                t_end: 10.0,
                stride: 1,
                time_mode: *mode,
                ..GeodesicOptions::default()
            };
            let drift_at = |dt: f64| -> Result<f64, String> {
                let traj = integrate(m, &s0, &opts(dt)).map_err(|e| e.to_string())?;
                ensure(!traj.truncated(), format!("{name}: left the domain"))?;
                speed_drift(&traj).map_err(|e| e.to_string())
            };
            let d = drift_at(1e-3)?;
            max_drift = max_drift.max(d);
            let back = time_reversal_error(m, &s0, &opts(1e-3)).map_err(|e| e.to_string())?;
            max_back = max_back.max(back);
            if *name != "euclidean" {
                // coarsest step pair whose finer drift stands clear of round-off
                let mut h = 1e-3;
                let (mut coarse, mut fine) = (drift_at(h)?, drift_at(h / 2.0)?);
                while fine < ORDER_FLOOR && h < 0.64 {
                    let Ok(next) = drift_at(2.0 * h) else { break };
                    h *= 2.0;
                    fine = coarse;
                    coarse = next;
                }
                if fine < ORDER_FLOOR {
                    return Err(format!("{name}: drift never leaves round-off"));
                }
                let ratio = coarse / fine;
                min_ratio = min_ratio.min(ratio);
                pairs.push(format!("{name} {ratio:.1}@{h}"));
            }
        }
    }
    println!("    halving ratios at dt: {}", pairs.join(", "));
    ensure(max_drift < 1e-8, format!("drift {max_drift:e}"))?;
    ensure(min_ratio >= 12.0, format!("halving ratio {min_ratio:.2}"))?;
    ensure(max_back < 1e-6, format!("time reversal {max_back:e}"))?;
    Ok(format!(
        "max drift {max_drift:.1e} at dt=1e-3; min halving ratio {min_ratio:.1}; reversal {max_back:.1e}"
    ))
}

fn c10_radial_constancy() -> Outcome {
    let mut worst: f64 = 0.0;
    for (v, tau, theta) in [(0.1, 0.5, 1.0), (1.0, 1e-3, 0.3), (0.5, 0.5, 2.5)] {
        let flow = RadialFlowModel::new(v).unwrap();
        let m = flow.stretch_metric(tau, 0.0).map_err(|e| e.to_string())?;
        let s0 = GeodesicState::new([1.0, theta, 0.0], [v, 0.4, 0.3]);
        let traj = integrate(
            &m,
            &s0,
            &GeodesicOptions {
                dt: 1e-3,
                t_end: 10.0,
                stride: 10,
                ..GeodesicOptions::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(!traj.truncated(), "left the domain")?;
        for s in &traj.samples {
            worst = worst.max((s.state.v[0] - v).abs());
        }
    }
    ensure(worst < 1e-10, format!("max |v^r(t) - v^r(0)| = {worst:e}"))?;
    Ok(format!("max |v^r(t) - v^r(0)| = {worst:.1e} over t in [0, 10]"))
}

fn c11_equipartition() -> Outcome {
    let r = tube_geodesic_ratio_check(&RadialFlowModel::new(0.1).unwrap(), 1.0, 5.0, 1e-3, 100)
        .map_err(|e| e.to_string())?;
    let start = (r.ratio_at_start() - 1.0).abs();
    ensure(start <= 1e-12, format!("ratio at t=0 off by {start:e}"))?;
    let last = r.samples.last().map(|s| s.t).unwrap_or(0.0);
    ensure(r.samples.first().map(|s| s.t) == Some(0.0) && (last - 5.0).abs() < 1e-12, "series does not span [0, 5]")?;
    ensure(r.samples.iter().all(|s| s.numeric.is_finite() && s.closed_form.is_finite()), "non-finite series")?;
    Ok(format!(
        "ratio(0) = 1 within {start:.1e}; {} samples on [0, 5], max relative deviation from the closed form {:.3e}",
        r.samples.len(),
        r.max_rel_diff
    ))
}

fn c12_completeness() -> Outcome {
    let (report, bytes_a) = check_paper_json()?;
    let (_, bytes_b) = check_paper_json()?;
    ensure(bytes_a == bytes_b, "check-paper output differs between runs")?;
    let ids: Vec<&str> = report["entries"]
        .as_array()
        .ok_or("no entries")?
        .iter()
        .filter_map(|e| e["expression_id"].as_str())
        .collect();
    let mut required: Vec<u32> = vec![4, 11, 12];
    required.extend(15..=25);
    required.extend(37..=42);
    required.extend(44..=46);
    required.extend(49..=54);
    required.extend(55..=57);
    required.push(61);
    for n in &required {
        let id = format!("Eq{n}");
        let count = ids.iter().filter(|x| **x == id).count();
        ensure(count == 1, format!("{id} appears {count} times"))?;
    }
    ensure(ids == CHECKLIST, "report order differs from the registry")?;
    for e in report["entries"].as_array().unwrap() {
        if e["verdict"] == "Match" {
            ensure(
                e["rel_diff"].as_f64().unwrap_or(f64::INFINITY) <= e["tolerance"].as_f64().unwrap_or(0.0),
                format!("{} Match beyond tolerance", e["expression_id"]),
            )?;
        }
    }
    let s = &report["summary"];
    Ok(format!(
        "{} required ids present once ({} entries); byte-identical reruns; {} Match, {} MatchUpToSign, {} MatchUpToFactor2, {} Mismatch",
        required.len(),
        ids.len(),
        s["matched"],
        s["match_up_to_sign"],
        s["match_up_to_factor2"],
        s["mismatch"]
    ))
}

fn c13_cat_orbit() -> Outcome {
    let (_, rep) = iterate_torus_map(&MapSpec::cat(), [0.5, 0.5], 50).map_err(|e| e.to_string())?;
    let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let err = (rep.finite_time_exponent - target).abs();
    ensure(err <= 1e-6, format!("exponent error {err:e}"))?;
    Ok(format!("n=50 exponent {:.10}, error {err:.1e}", rep.finite_time_exponent))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("cat-map eigenvalues", c1_cat_map),
        ("stretch-twist Jacobian finding", c2_stf3d),
        ("lemma suite", c3_lemmas),
        ("Arnold curvature", c4_arnold),
        ("Christoffel golden test", c5_christoffel),
        ("tube determinant", c6_tube_determinant),
        ("flat when no flow", c7_flat_without_flow),
        ("anti-dynamo property", c8_anti_dynamo),
        ("geodesic quality", c9_geodesic_quality),
        ("radial constancy", c10_radial_constancy),
        ("equipartition at t=0", c11_equipartition),
        ("check-paper completeness", c12_completeness),
        ("torus-orbit stretching", c13_cat_orbit),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
