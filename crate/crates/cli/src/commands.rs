//! Subcommand bodies. Each writes rows as they are produced and flushes
//! before returning an error, so partial output survives a domain failure.

use std::io::Write;

use serde::Serialize;
use tubedyn::checklist::{render_table, run_checklist};
use tubedyn::dynamo::{finite_time_exponents, magnetic_growth, RadialFlowModel};
use tubedyn::geodesic::{integrate, speed_drift, Termination};
use tubedyn::maps::{analyze, iterate_torus_map, stretch_contraction_lemma, thin_tube_lemma, LemmaReport, MapSpec};
use tubedyn::{riemann_with, ChartPoint, CurvatureBundle, MetricKind};

use crate::config::{OutputFormat, RunConfig};
use crate::output::{csv_row, open_sink, resolve_path, to_json_line, to_json_pretty};
use crate::{Cli, CliError, Command};

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = cli.merged_config()?;
    if cli.print_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    match &cli.command {
        Command::Curvature { .. } => curvature(&cfg),
        Command::Map { orbit_out, .. } => map(&cfg, orbit_out.as_deref()),
        Command::Geodesic { .. } => geodesic(&cfg),
        Command::Lyapunov { .. } => lyapunov(&cfg),
        Command::CheckPaper { .. } => check_paper(&cfg),
    }
}

fn format_of(cfg: &RunConfig, default: OutputFormat) -> OutputFormat {
    cfg.output.format.unwrap_or(default)
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
        OutputFormat::Table => "txt",
    }
}

fn sink_for(cfg: &RunConfig, stem: &str, format: OutputFormat) -> Result<Box<dyn Write>, CliError> {
    let path = resolve_path(cfg.output.path.as_deref(), &format!("{stem}.{}", ext(format)));
    Ok(open_sink(path.as_deref())?)
}

/// Tabular commands support csv and json only.
fn tabular(format: OutputFormat) -> Result<OutputFormat, CliError> {
    match format {
        OutputFormat::Table => Err(CliError::Usage("this command writes csv or json".into())),
        f => Ok(f),
    }
}

pub fn curvature_header() -> String {
    let mut cols: Vec<String> = ["x1", "x2", "x3", "g11", "g12", "g13", "g22", "g23", "g33"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 1..=3 {
        for j in 1..=3 {
            for k in j..=3 {
                cols.push(format!("Gamma{i}_{j}{k}"));
            }
        }
    }
    let quads = ["1212", "1213", "1223", "1313", "1323", "2323"];
    cols.extend(quads.iter().map(|q| format!("R{q}")));
    cols.extend(quads.iter().map(|q| format!("Rhat{q}")));
    cols.extend(["Ric11", "Ric12", "Ric13", "Ric22", "Ric23", "Ric33", "scalar", "det_g"].map(String::from));
    cols.join(",")
}

fn curvature_values(b: &CurvatureBundle) -> Vec<f64> {
    let mut v = b.point.to_array().to_vec();
    v.extend(b.metric.packed());
    v.extend(b.christoffel.independent().iter().map(|(_, x)| *x));
    v.extend(b.riemann_lowered.independent().iter().map(|(_, x)| *x));
    v.extend(b.orthonormal_riemann.independent().iter().map(|(_, x)| *x));
    v.extend(b.ricci.packed());
    v.push(b.scalar);
    v.push(b.metric.determinant());
    v
}

#[derive(Serialize)]
struct CurvatureRow<'a> {
    point: [f64; 3],
    metric: [f64; 6],
    christoffel: Vec<(String, f64)>,
    riemann: Vec<(String, f64)>,
    orthonormal_riemann: Vec<(String, f64)>,
    ricci: [f64; 6],
    scalar: f64,
    det_g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

fn curvature_json(b: &CurvatureBundle) -> CurvatureRow<'static> {
    let name3 = |(i, j, k): (usize, usize, usize)| format!("{}_{}{}", i + 1, j + 1, k + 1);
    let name4 = |(i, j, k, l): (usize, usize, usize, usize)| format!("{}{}{}{}", i + 1, j + 1, k + 1, l + 1);
    CurvatureRow {
        point: b.point.to_array(),
        metric: b.metric.packed(),
        christoffel: b
            .christoffel
            .independent()
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|(ix, v)| (name3(ix), v))
            .collect(),
        riemann: b
            .riemann_lowered
            .independent()
            .into_iter()
            .map(|(ix, v)| (name4(ix), v))
            .collect(),
        orthonormal_riemann: b
            .orthonormal_riemann
            .independent()
            .into_iter()
            .map(|(ix, v)| (name4(ix), v))
            .collect(),
        ricci: b.ricci.packed(),
        scalar: b.scalar,
        det_g: b.metric.determinant(),
        error: None,
    }
}

fn curvature(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = cfg.metric.build()?;
    let points: Vec<ChartPoint> = cfg.points.expand();
    if points.is_empty() {
        return Err(CliError::Usage("no points given (use --point or --grid)".into()));
    }
    let format = tabular(format_of(cfg, OutputFormat::Csv))?;
    let mut out = sink_for(cfg, "curvature", format)?;
    let mut failure = None;
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", curvature_header())?;
            for p in &points {
                match riemann_with(&metric, p, cfg.metric.scheme) {
                    Ok(b) => writeln!(out, "{}", csv_row(&curvature_values(&b)))?,
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
        }
        _ => {
            let mut rows = Vec::new();
            for p in &points {
                match riemann_with(&metric, p, cfg.metric.scheme) {
                    Ok(b) => rows.push(curvature_json(&b)),
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                metric: &'a str,
                params: tubedyn::MetricParams,
                points: Vec<CurvatureRow<'a>>,
                complete: bool,
            }
            let doc = Doc {
                metric: metric.name(),
                params: *metric.params(),
                points: rows,
                complete: failure.is_none(),
            };
            writeln!(out, "{}", to_json_pretty(&doc))?;
        }
    }
    out.flush()?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn named_map(cfg: &RunConfig) -> Result<MapSpec, CliError> {
    let m = &cfg.map;
    let spec = match m.name.as_str() {
        "cat" => MapSpec::cat(),
        "twist" => MapSpec::twist(m.k0, m.tau0),
        "stf3d" => MapSpec::stf3d_with(m.k0, m.k1, m.tau0),
        "identity2" => MapSpec::identity(2)?,
        "identity3" => MapSpec::identity(3)?,
        "custom" => MapSpec::new("custom", m.entries.clone()).map_err(|e| CliError::Config(e.to_string()))?,
        other => return Err(CliError::Config(format!("unknown map {other:?}"))),
    };
    Ok(spec)
}

#[derive(Serialize)]
struct Eigen {
    re: f64,
    im: f64,
    modulus: f64,
}

#[derive(Serialize)]
struct Lemmas {
    k0: f64,
    k1: f64,
    thin_tube: LemmaReport,
    stretch_contraction: Option<LemmaReport>,
}

#[derive(Serialize)]
struct OrbitSummary {
    n_steps: usize,
    start: [f64; 2],
    finite_time_exponent: f64,
    limit_exponent: f64,
    period: Option<usize>,
    csv: String,
}

#[derive(Serialize)]
struct MapDoc {
    name: String,
    dim: usize,
    entries: Vec<f64>,
    determinant: f64,
    trace: f64,
    char_poly_coeffs: Vec<f64>,
    eigenvalues: Vec<Eigen>,
    is_unimodular: bool,
    is_hyperbolic: bool,
    lemmas: Lemmas,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit: Option<OrbitSummary>,
}

fn map(cfg: &RunConfig, orbit_out: Option<&str>) -> Result<(), CliError> {
    if format_of(cfg, OutputFormat::Json) != OutputFormat::Json {
        return Err(CliError::Usage("map writes json".into()));
    }
    let spec = named_map(cfg)?;
    let report = analyze(&spec);
    let (k0, k1) = (cfg.map.k0, cfg.map.k1);
    let note = (spec.name == "stf3d").then(|| {
        let eig: Vec<String> = report.eigenvalues.iter().map(|z| format!("{}", z.re)).collect();
        format!(
            "eigenvalues {{{}}} ≠ roots of λ²−3λ+1; characteristic polynomial {:?}{}",
            eig.join(","),
            report.char_poly_coeffs,
            if (k0, k1, cfg.map.tau0) == (2.0, 0.5, 1.0) { " = (λ−1/2)(λ²−3λ+2)" } else { "" }
        )
    });

    let mut orbit_failure = None;
    let mut orbit = None;
    if cfg.map.orbit_steps > 0 {
        match iterate_torus_map(&spec, cfg.map.orbit_start, cfg.map.orbit_steps) {
            Ok((points, rep)) => {
                let path = resolve_path(orbit_out, "map_orbit.csv").ok_or_else(|| {
                    CliError::Usage("orbit CSV needs --orbit-out or TUBEDYN_OUT_DIR".into())
                })?;
                let mut w = open_sink(Some(&path))?;
                writeln!(w, "t,x1,x2,finite_time_exponent")?;
                for (k, p) in points.iter().enumerate() {
                    let lam = if k == 0 { f64::NAN } else { rep.exponent_history[k - 1] };
                    writeln!(w, "{},{}", k, csv_row(&[p[0], p[1], lam]))?;
                }
                w.flush()?;
                orbit = Some(OrbitSummary {
                    n_steps: rep.n_steps,
                    start: cfg.map.orbit_start,
                    finite_time_exponent: rep.finite_time_exponent,
                    limit_exponent: rep.limit_exponent,
                    period: rep.period,
                    csv: path.display().to_string(),
                });
            }
            Err(e) => orbit_failure = Some(e),
        }
    }

    let doc = MapDoc {
        name: spec.name.clone(),
        dim: spec.dim,
        entries: spec.entries.clone(),
        determinant: report.determinant,
        trace: report.trace,
        char_poly_coeffs: report.char_poly_coeffs.clone(),
        eigenvalues: report
            .eigenvalues
            .iter()
            .map(|z| Eigen {
                re: z.re,
                im: z.im,
                modulus: z.norm(),
            })
            .collect(),
        is_unimodular: report.is_unimodular,
        is_hyperbolic: report.is_hyperbolic,
        lemmas: Lemmas {
            k0,
            k1,
            thin_tube: thin_tube_lemma(k0),
            stretch_contraction: stretch_contraction_lemma(k0, k1).ok(),
        },
        note,
        orbit,
    };
    let mut out = sink_for(cfg, "map", OutputFormat::Json)?;
    writeln!(out, "{}", to_json_pretty(&doc))?;
    out.flush()?;
    match orbit_failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct GeodesicFooter {
    speed_drift: Option<f64>,
    truncated: bool,
    termination: Termination,
    max_step_error: f64,
    samples: usize,
}

fn geodesic(cfg: &RunConfig) -> Result<(), CliError> {
    let metric = cfg.metric.build()?;
    let opts = cfg.geodesic.options(cfg.metric.scheme)?;
    let format = tabular(format_of(cfg, OutputFormat::Csv))?;
    let traj = integrate(&metric, &cfg.geodesic.state(), &opts)?;
    let with_ratio = metric.kind() == MetricKind::LyapunovStretch;
    let footer = GeodesicFooter {
        speed_drift: speed_drift(&traj).ok(),
        truncated: traj.truncated(),
        termination: traj.termination.clone(),
        max_step_error: traj.max_step_error,
        samples: traj.samples.len(),
    };
    let mut out = sink_for(cfg, "geodesic", format)?;
    match format {
        OutputFormat::Csv => {
            let mut header = "t,x1,x2,x3,v1,v2,v3,speed2".to_string();
            if with_ratio {
                header.push_str(",ratio");
            }
            writeln!(out, "{header}")?;
            for s in &traj.samples {
                let x = s.state.x.to_array();
                let v = s.state.v;
                let mut row = vec![s.t, x[0], x[1], x[2], v[0], v[1], v[2], s.speed2];
                if with_ratio {
                    row.push(v[2] / v[1]);
                }
                writeln!(out, "{}", csv_row(&row))?;
            }
            writeln!(out, "# {}", to_json_line(&footer))?;
        }
        _ => {
            #[derive(Serialize)]
            struct Doc<'a> {
                metric: &'a str,
                params: tubedyn::MetricParams,
                options: tubedyn::geodesic::GeodesicOptions,
                samples: &'a [tubedyn::geodesic::TrajectorySample],
                footer: &'a GeodesicFooter,
            }
            let doc = Doc {
                metric: metric.name(),
                params: *metric.params(),
                options: opts,
                samples: &traj.samples,
                footer: &footer,
            };
            writeln!(out, "{}", to_json_pretty(&doc))?;
        }
    }
    out.flush()?;
    match traj.termination {
        Termination::LeftDomain { t, reason } => Err(CliError::Runtime(format!(
            "trajectory left the domain at t = {t}: {reason}"
        ))),
        Termination::Completed => Ok(()),
    }
}

#[derive(Serialize)]
struct LyapunovRow {
    t: f64,
    theta: f64,
    lambda_r: f64,
    lambda_theta: f64,
    lambda_s: f64,
    b_theta: f64,
    b_s: f64,
}

fn lyapunov(cfg: &RunConfig) -> Result<(), CliError> {
    let flow = RadialFlowModel::new(cfg.metric.v_r_mean).map_err(|e| CliError::Config(e.to_string()))?;
    let tau0 = cfg.metric.tau0;
    let format = tabular(format_of(cfg, OutputFormat::Csv))?;
    let mut rows = Vec::new();
    let mut failure = None;
    'grid: for &t in &cfg.lyapunov.t {
        for &theta in &cfg.lyapunov.theta {
            let computed = finite_time_exponents(&flow, tau0, theta, t, cfg.lyapunov.convention)
                .and_then(|l| magnetic_growth(&flow, tau0, theta, t).map(|b| (l, b)));
            match computed {
                Ok((l, b)) => rows.push(LyapunovRow {
                    t,
                    theta,
                    lambda_r: l.lambda_r,
                    lambda_theta: l.lambda_theta,
                    lambda_s: l.lambda_s,
                    b_theta: b.b_theta,
                    b_s: b.b_s,
                }),
                Err(e) => {
                    failure = Some(e);
                    break 'grid;
                }
            }
        }
    }
    let mut out = sink_for(cfg, "lyapunov", format)?;
    match format {
        OutputFormat::Csv => {
            writeln!(out, "t,theta,lambda_r,lambda_theta,lambda_s,b_theta,b_s")?;
            for r in &rows {
                writeln!(
                    out,
                    "{}",
                    csv_row(&[r.t, r.theta, r.lambda_r, r.lambda_theta, r.lambda_s, r.b_theta, r.b_s])
                )?;
            }
        }
        _ => writeln!(out, "{}", to_json_pretty(&rows))?,
    }
    out.flush()?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn check_paper(cfg: &RunConfig) -> Result<(), CliError> {
    let report = run_checklist(&cfg.check);
    let format = format_of(cfg, OutputFormat::Table);
    let json_path = resolve_path(cfg.output.path.as_deref(), "check_paper.json");
    match (format, json_path) {
        (OutputFormat::Csv, _) => return Err(CliError::Usage("check-paper writes json or table".into())),
        (_, Some(path)) => {
            let mut w = open_sink(Some(&path))?;
            writeln!(w, "{}", to_json_pretty(&report))?;
            w.flush()?;
            if format == OutputFormat::Table {
                print!("{}", render_table(&report));
            }
        }
        (OutputFormat::Json, None) => {
            let mut w = open_sink(None)?;
            writeln!(w, "{}", to_json_pretty(&report))?;
            w.flush()?;
        }
        (_, None) => print!("{}", render_table(&report)),
    }
    Ok(())
}
