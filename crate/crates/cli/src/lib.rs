//! `tubedyn` command line: curvature tables, map spectra, geodesics,
//! stretching exponents and the reproduction report.
//!
//! Exit codes: 0 success (report findings included), 2 usage or config
//! error, 3 domain or runtime error.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

pub use config::RunConfig;
use config::{Axis, OutputFormat};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(#[from] tubedyn::Error),
    #[error("{0}")]
    Runtime(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Domain(_) | CliError::Runtime(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tubedyn", version, about = "Curvature, maps, geodesics and stretching diagnostics for twisted flux tubes")]
pub struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (default: $TUBEDYN_OUT_DIR/<command>.<ext>, else stdout).
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Print the merged, normalized config instead of running.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Metric, Christoffel symbols and curvature at points or on a grid.
    Curvature {
        #[command(flatten)]
        metric: MetricArgs,
        /// Point `x1,x2,x3`; repeatable.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        point: Vec<[f64; 3]>,
        /// Grid `a:b:n,a:b:n,a:b:n`.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<[Axis; 3]>,
    },
    /// Spectrum, hyperbolicity and lemma verdicts of a map Jacobian.
    Map {
        /// cat, twist, stf3d, identity2, identity3 or custom.
        #[arg(long)]
        name: Option<String>,
        /// Row-major entries (4 or 9); implies `--name custom`.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        entries: Option<NumList>,
        #[arg(long)]
        k0: Option<f64>,
        #[arg(long)]
        k1: Option<f64>,
        /// Twist of the `twist` and `stf3d` maps.
        #[arg(long = "map-tau0", allow_hyphen_values = true)]
        map_tau0: Option<f64>,
        #[arg(long)]
        orbit_steps: Option<usize>,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        orbit_start: Option<NumList>,
        /// Orbit CSV path (default: $TUBEDYN_OUT_DIR/map_orbit.csv).
        #[arg(long)]
        orbit_out: Option<String>,
    },
    /// Integrates a geodesic and writes the trajectory.
    Geodesic {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        x0: Option<[f64; 3]>,
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        v0: Option<[f64; 3]>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        symmetry_factor: Option<u8>,
        /// coupled or frozen.
        #[arg(long, value_parser = parse_enum::<config::TimeModeName>)]
        time_mode: Option<config::TimeModeName>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        error_estimate: bool,
    },
    /// Stretching exponents and field growth over a (t, θ) grid.
    Lyapunov {
        #[arg(long)]
        v_r_mean: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau0: Option<f64>,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        theta: Option<NumList>,
        #[arg(long, value_parser = parse_list)]
        times: Option<NumList>,
        /// half_log (divide by 2t) or log (divide by t).
        #[arg(long, value_parser = parse_enum::<tubedyn::dynamo::LyapunovConvention>)]
        convention: Option<tubedyn::dynamo::LyapunovConvention>,
    },
    /// Evaluates every closed-form claim against the engines.
    CheckPaper {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau0: Option<f64>,
        #[arg(long)]
        v_r_mean: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct MetricArgs {
    /// euclidean, arnold, tube or stretch.
    #[arg(long, value_parser = parse_enum::<tubedyn::MetricKind>)]
    pub metric: Option<tubedyn::MetricKind>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau0: Option<f64>,
    #[arg(long)]
    pub v_r_mean: Option<f64>,
    /// Time of the stretch metric.
    #[arg(long)]
    pub time: Option<f64>,
    /// doubled or paper_eq13.
    #[arg(long, value_parser = parse_enum::<tubedyn::ExponentConvention>)]
    pub convention: Option<tubedyn::ExponentConvention>,
    /// frenet or rotated.
    #[arg(long, value_parser = parse_enum::<tubedyn::TubeChart>)]
    pub chart: Option<tubedyn::TubeChart>,
    /// richardson or central.
    #[arg(long, value_parser = parse_enum::<tubedyn::DiffScheme>)]
    pub scheme: Option<tubedyn::DiffScheme>,
}

fn parse_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    let normalized = s.replace('-', "_");
    T::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(&normalized))
        .map_err(|e| e.to_string())
}

/// Comma-separated numbers given as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<NumList, String> {
    split_numbers(s).map(NumList)
}

fn split_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect()
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let v = split_numbers(s)?;
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| format!("expected three comma-separated numbers, got {s:?}"))
}

fn parse_grid(s: &str) -> Result<[Axis; 3], String> {
    let axes: Vec<Axis> = s
        .split(',')
        .map(|part| {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(format!("axis {part:?} is not a:b:n"));
            }
            let a = f[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
            let b = f[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
            let n = f[2].trim().parse::<usize>().map_err(|e| e.to_string())?;
            Ok(Axis(a, b, n))
        })
        .collect::<Result<_, _>>()?;
    <[Axis; 3]>::try_from(axes).map_err(|_| format!("grid {s:?} needs three axes"))
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl MetricArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        let m = &mut cfg.metric;
        set(&mut m.kind, self.metric);
        set(&mut m.lambda, self.lambda);
        set(&mut m.tau0, self.tau0);
        set(&mut m.v_r_mean, self.v_r_mean);
        set(&mut m.t, self.time);
        set(&mut m.convention, self.convention);
        set(&mut m.chart, self.chart);
        set(&mut m.scheme, self.scheme);
    }
}

impl Cli {
    /// Base config from `--config` (or defaults) with every given flag applied.
    pub fn merged_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        if self.format.is_some() {
            cfg.output.format = self.format;
        }
        match &self.command {
            Command::Curvature { metric, point, grid } => {
                metric.apply(&mut cfg);
                if !point.is_empty() {
                    cfg.points.list = point.clone();
                    cfg.points.grid = None;
                }
                if grid.is_some() {
                    cfg.points.grid = *grid;
                    if point.is_empty() {
                        cfg.points.list.clear();
                    }
                }
            }
            Command::Map {
                name,
                entries,
                k0,
                k1,
                map_tau0,
                orbit_steps,
                orbit_start,
                ..
            } => {
                let m = &mut cfg.map;
                if let Some(e) = entries {
                    m.entries = e.0.clone();
                    m.name = "custom".into();
                }
                set(&mut m.name, name.clone());
                set(&mut m.k0, *k0);
                set(&mut m.k1, *k1);
                set(&mut m.tau0, *map_tau0);
                set(&mut m.orbit_steps, *orbit_steps);
                if let Some(s) = orbit_start {
                    m.orbit_start = <[f64; 2]>::try_from(s.0.as_slice())
                        .map_err(|_| CliError::Usage("--orbit-start needs two numbers".into()))?;
                }
            }
            Command::Geodesic {
                metric,
                x0,
                v0,
                dt,
                t_end,
                stride,
                symmetry_factor,
                time_mode,
                t0,
                error_estimate,
            } => {
                metric.apply(&mut cfg);
                let g = &mut cfg.geodesic;
                set(&mut g.x0, *x0);
                set(&mut g.v0, *v0);
                set(&mut g.dt, *dt);
                set(&mut g.t_end, *t_end);
                set(&mut g.stride, *stride);
                set(&mut g.symmetry_factor, *symmetry_factor);
                set(&mut g.time_mode, *time_mode);
                set(&mut g.t0, *t0);
                if *error_estimate {
                    g.error_estimate = true;
                }
            }
            Command::Lyapunov {
                v_r_mean,
                tau0,
                theta,
                times,
                convention,
            } => {
                set(&mut cfg.metric.v_r_mean, *v_r_mean);
                set(&mut cfg.metric.tau0, *tau0);
                set(&mut cfg.lyapunov.theta, theta.as_ref().map(|l| l.0.clone()));
                set(&mut cfg.lyapunov.t, times.as_ref().map(|l| l.0.clone()));
                set(&mut cfg.lyapunov.convention, *convention);
            }
            Command::CheckPaper {
                lambda,
                tau0,
                v_r_mean,
                dt,
            } => {
                let c = &mut cfg.check;
                set(&mut c.lambda, *lambda);
                set(&mut c.tau0, *tau0);
                set(&mut c.v_r_mean, *v_r_mean);
                set(&mut c.dt, *dt);
            }
        }
        Ok(cfg)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tubedyn: {e}");
            e.exit_code()
        }
    }
}
