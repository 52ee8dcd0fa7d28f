//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numeric failure
//! (the partial report is still written).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{init_thread_pool, map_ordered, Execution};
use crate::measure::{MeasureKind, SpectralMeasure, MEASURE_KINDS};
use crate::model_circle::{circle_rows, CircleParams, Potential, DEFAULT_CIRCLE_KMAX};
use crate::model_interval::{slab_rows, DEFAULT_SLAB_KMAX};
use crate::perturbation::{ChannelSpec, PerturbationSpec};
use crate::quadrature::QuadratureConfig;
use crate::report::{
    build_report, circle_record, csv_table, fmt_f64, to_canonical_json, Command, InputSpec,
    ModelSpec, Status, CIRCLE_COLUMNS, SLAB_COLUMNS, TOOL_NAME, TOOL_VERSION,
};
use crate::secular::SolverConfig;

#[derive(Debug, Parser)]
#[command(
    name = "krein-spectra",
    version,
    about = "Point spectrum and eigenvalue counts for rank-one-per-channel singular perturbations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Solve every channel's secular equation and report the eigenvalues.
    Solve(SpecArgs),
    /// Case tags and admissibility windows, without solving.
    Classify(SpecArgs),
    /// N_− and N_+ by window membership and by the case formulas.
    Count(SpecArgs),
    /// The interval-in-slab model.
    Interval(IntervalArgs),
    /// The circle-in-space model.
    Circle(CircleArgs),
    /// Long-format table over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Solver tolerance on |s(E) − b|.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Evaluate channels one after another.
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::default();
        let q: &mut QuadratureConfig = &mut cfg.quadrature;
        if let Some(v) = self.abs_tol {
            q.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            q.rel_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            q.max_subdivisions = v;
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Spec JSON (or a previous report, whose spec echo is reused).
    #[arg(long, conflicts_with_all = ["measure", "b"])]
    pub spec: Option<PathBuf>,
    /// Single inline channel, e.g. `power_law:M=1,p=2,c=1`.
    #[arg(long, requires = "b")]
    pub measure: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Defaults to the channel threshold.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_SLAB_KMAX)]
    pub kmax: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_CIRCLE_KMAX)]
    pub kmax: u32,
    /// `const:c`, `poly:c0,c1,…` or `table:path`.
    #[arg(long, default_value = "const:1")]
    pub potential: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepModel {
    Interval,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Alpha,
    Lambda,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "interval")]
    pub model: SweepModel,
    #[arg(long, value_enum, default_value = "alpha")]
    pub param: SweepParam,
    /// Comma-separated grid values.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "range",
        required_unless_present = "range"
    )]
    pub values: Option<String>,
    /// `start:stop:n`, evenly spaced (geometric with --log).
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    #[arg(long, requires = "range")]
    pub log: bool,
    /// Fixed alpha when sweeping lambda.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Fixed lambda when sweeping alpha in the circle model.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long, default_value = "const:1")]
    pub potential: String,
    #[command(flatten)]
    pub common: Common,
}

/// Parses `kind:key=value,…` into a measure.
pub fn parse_measure(text: &str) -> Result<SpectralMeasure> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let kind = kind.trim();
    if !MEASURE_KINDS.contains(&kind) {
        return Err(Error::InvalidSpec(format!(
            "unknown measure kind {kind:?}; known measure kinds: {}",
            MEASURE_KINDS.join(", ")
        )));
    }
    let mut obj = serde_json::Map::new();
    obj.insert("kind".into(), kind.into());
    for field in rest.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let (key, value) = field.split_once('=').ok_or_else(|| {
            Error::InvalidSpec(format!("measure field {field:?}: expected key=value"))
        })?;
        let v: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidSpec(format!("measure field {key}: not a number: {value:?}"))
        })?;
        let json = if v.fract() == 0.0 && v.abs() < 1e15 && matches!(key.trim(), "k") {
            serde_json::Value::from(v as i64)
        } else {
            serde_json::Value::from(v)
        };
        obj.insert(key.trim().into(), json);
    }
    let kind: MeasureKind = serde_json::from_value(serde_json::Value::Object(obj))
        .map_err(|e| Error::InvalidSpec(format!("measure {text:?}: {e}")))?;
    SpectralMeasure::new(kind)
}

fn spec_from_args(a: &SpecArgs) -> Result<InputSpec> {
    if let Some(path) = &a.spec {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        return InputSpec::parse(&text);
    }
    let (Some(m), Some(b)) = (&a.measure, a.b) else {
        return Err(Error::InvalidSpec(
            "give --spec, or --measure with --b".into(),
        ));
    };
    let measure = parse_measure(m)?;
    let lambda = a.lambda.unwrap_or(measure.lower_bound());
    let spec = PerturbationSpec::new(lambda, vec![ChannelSpec::new(a.k, measure, b)?], true)?;
    Ok(InputSpec::Channels(spec))
}

/// What a command produced, before it is written out.
struct Output {
    text: String,
    status: Status,
}

fn run_report(command: Command, spec: InputSpec, common: &Common) -> Result<Output> {
    let cfg = common.solver_config()?;
    let report = build_report(command, &spec, &cfg, common.execution())?;
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    Ok(Output {
        text,
        status: report.status(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SweepSpec {
    model: SweepModel,
    param: SweepParam,
    values: Vec<f64>,
    alpha: Option<f64>,
    lambda: Option<f64>,
    kmax: u32,
    potential: Option<Potential>,
}

fn parse_grid(a: &SweepArgs) -> Result<Vec<f64>> {
    let bad = |m: String| Error::InvalidParameter(m);
    let values: Vec<f64> = if let Some(v) = &a.values {
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("grid value {s:?} is not a number")))
            })
            .collect::<Result<_>>()?
    } else {
        let r = a.range.as_deref().unwrap_or_default();
        let parts: Vec<&str> = r.split(':').collect();
        if parts.len() != 3 {
            return Err(bad(format!("range {r:?}: expected start:stop:n")));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("range {r:?}: {s:?} is not a number")))
        };
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad(format!("range {r:?}: count must be a positive integer")))?;
        if n == 0 {
            return Err(bad("range needs at least one point".into()));
        }
        if a.log && !(start * stop > 0.0) {
            return Err(bad("a log range needs nonzero ends of the same sign".into()));
        }
        (0..n)
            .map(|i| {
                let u = if n == 1 {
                    0.0
                } else {
                    i as f64 / (n - 1) as f64
                };
                if i == 0 {
                    start
                } else if i + 1 == n {
                    stop
                } else if a.log {
                    start.signum()
                        * 10f64.powf(
                            start.abs().log10() + u * (stop.abs().log10() - start.abs().log10()),
                        )
                } else {
                    start + u * (stop - start)
                }
            })
            .collect()
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("grid values must be finite".into()));
    }
    Ok(values)
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec> {
    let values = parse_grid(a)?;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::InvalidParameter(format!("sweep needs --{name}")))
    };
    let (alpha, lambda, potential) = match (a.model, a.param) {
        (SweepModel::Interval, SweepParam::Alpha) => (None, None, None),
        (SweepModel::Interval, SweepParam::Lambda) => {
            return Err(Error::InvalidParameter(
                "the interval model has lambda = 1 fixed; sweep alpha instead".into(),
            ))
        }
        (SweepModel::Circle, SweepParam::Alpha) => (
            None,
            Some(need(a.lambda, "lambda")?),
            Some(Potential::parse(&a.potential)?),
        ),
        (SweepModel::Circle, SweepParam::Lambda) => (
            Some(need(a.alpha, "alpha")?),
            None,
            Some(Potential::parse(&a.potential)?),
        ),
    };
    let kmax = a.kmax.unwrap_or(match a.model {
        SweepModel::Interval => DEFAULT_SLAB_KMAX,
        SweepModel::Circle => DEFAULT_CIRCLE_KMAX,
    });
    Ok(SweepSpec {
        model: a.model,
        param: a.param,
        values,
        alpha,
        lambda,
        kmax,
        potential,
    })
}

fn run_sweep(a: &SweepArgs) -> Result<Output> {
    let spec = sweep_spec(a)?;
    let cfg = a.common.solver_config()?;
    let exec = a.common.execution();
    let param = match spec.param {
        SweepParam::Alpha => "alpha",
        SweepParam::Lambda => "lambda",
    };
    // validate every grid point before any solving
    for &v in &spec.values {
        match spec.model {
            SweepModel::Interval => {
                crate::model_interval::SlabParams::new(v, spec.kmax)?;
            }
            SweepModel::Circle => {
                circle_at(&spec, v)?;
            }
        }
    }
    let blocks: Vec<Result<(Vec<Vec<String>>, Vec<serde_json::Value>, bool)>> =
        map_ordered(&spec.values, exec, |&v| match spec.model {
            SweepModel::Interval => {
                let rows = slab_rows(v, spec.kmax, &cfg, exec)?;
                let failed = rows.iter().any(|r| r.error.is_some());
                let csv = rows
                    .iter()
                    .map(|r| prefixed(v, crate::report::slab_record(r)))
                    .collect();
                let json = rows.iter().map(|r| tagged(param, v, r)).collect();
                Ok((csv, json, failed))
            }
            SweepModel::Circle => {
                let rows = circle_rows(&circle_at(&spec, v)?, &cfg, exec)?;
                let failed = rows.iter().any(|r| r.error.is_some());
                let csv = rows.iter().map(|r| prefixed(v, circle_record(r))).collect();
                let json = rows.iter().map(|r| tagged(param, v, r)).collect();
                Ok((csv, json, failed))
            }
        });
    let mut csv_rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut status = Status::Ok;
    for b in blocks {
        let (c, j, failed) = b?;
        csv_rows.extend(c);
        json_rows.extend(j);
        if failed {
            status = Status::Numeric;
        }
    }
    let hash = {
        use sha2::{Digest, Sha256};
        let key = serde_json::json!({"command": "sweep", "spec": &spec, "config": cfg, "version": TOOL_VERSION});
        let canon: serde_json::Value =
            serde_json::from_str(&to_canonical_json(&key)).expect("canonical JSON parses");
        Sha256::digest(canon.to_string().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>()
    };
    let text = match a.common.format {
        Format::Json => to_canonical_json(&serde_json::json!({
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": "sweep",
            "config_hash": hash,
            "spec": spec,
            "config": cfg,
            "rows": json_rows,
        })),
        Format::Csv => {
            let columns: &[&str] = match spec.model {
                SweepModel::Interval => SLAB_COLUMNS,
                SweepModel::Circle => CIRCLE_COLUMNS,
            };
            let header: Vec<&str> = std::iter::once(param)
                .chain(columns.iter().copied())
                .collect();
            let mut out = format!(
                "# {TOOL_NAME} {TOOL_VERSION}\n# command: sweep\n# config_hash: {hash}\n# model: {}\n",
                match spec.model {
                    SweepModel::Interval => "interval",
                    SweepModel::Circle => "circle",
                }
            );
            out.push_str(&csv_table(&header, csv_rows));
            out
        }
    };
    Ok(Output { text, status })
}

fn circle_at(spec: &SweepSpec, v: f64) -> Result<CircleParams> {
    let potential = spec
        .potential
        .clone()
        .unwrap_or(Potential::Const { c: 1.0 });
    match spec.param {
        SweepParam::Alpha => CircleParams::new(spec.lambda.unwrap_or(1.0), v, potential, spec.kmax),
        SweepParam::Lambda => CircleParams::new(v, spec.alpha.unwrap_or(1.0), potential, spec.kmax),
    }
}

fn prefixed(v: f64, mut rec: Vec<String>) -> Vec<String> {
    rec.insert(0, fmt_f64(v));
    rec
}

fn tagged<T: Serialize>(param: &str, v: f64, row: &T) -> serde_json::Value {
    let mut value = serde_json::to_value(row).expect("rows serialize");
    if let serde_json::Value::Object(m) = &mut value {
        m.insert(param.into(), v.into());
    }
    value
}

fn dispatch(cmd: &Cmd) -> (Result<Output>, &Common) {
    match cmd {
        Cmd::Solve(a) => (
            spec_from_args(a).and_then(|s| run_report(Command::Solve, s, &a.common)),
            &a.common,
        ),
        Cmd::Classify(a) => (
            spec_from_args(a).and_then(|s| run_report(Command::Classify, s, &a.common)),
            &a.common,
        ),
        Cmd::Count(a) => (
            spec_from_args(a).and_then(|s| run_report(Command::Count, s, &a.common)),
            &a.common,
        ),
        Cmd::Interval(a) => {
            let spec = InputSpec::Model(ModelSpec::Interval {
                alpha: a.alpha,
                kmax: a.kmax,
            });
            (
                spec.validate()
                    .and_then(|_| run_report(Command::Interval, spec, &a.common)),
                &a.common,
            )
        }
        Cmd::Circle(a) => {
            let out = Potential::parse(&a.potential).and_then(|potential| {
                let spec = InputSpec::Model(ModelSpec::Circle {
                    lambda: a.lambda,
                    alpha: a.alpha,
                    kmax: a.kmax,
                    potential,
                });
                spec.validate()?;
                run_report(Command::Circle, spec, &a.common)
            });
            (out, &a.common)
        }
        Cmd::Sweep(a) => (run_sweep(a), &a.common),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    init_thread_pool();
    let (result, common) = dispatch(&cli.command);
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return Status::of_error(&e).exit_code();
        }
    };
    let written = match &common.output {
        Some(path) => std::fs::write(path, &out.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(out.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return 1;
    }
    if out.status != Status::Ok {
        let _ = writeln!(
            stderr,
            "error: some channels failed; see the error column of the report"
        );
    }
    out.status.exit_code()
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
