//! Spectral reports: per-channel rows, the aggregated summary and
//! deterministic JSON/CSV emission.

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, ErrorClass, ErrorNote, Result};
use crate::exec::{map_ordered, Execution};
use crate::measure::{ExtendedReal, MEASURE_KINDS};
use crate::model_circle::{
    circle_rows, count_rows, CircleCount, CircleParams, CircleRow, Potential, CIRCLE_NOTES,
    DEFAULT_CIRCLE_KMAX,
};
use crate::model_interval::{
    slab_embedded_threshold, slab_rows, SlabParams, SlabRow, DEFAULT_SLAB_KMAX, SLAB_LAMBDA,
    SLAB_NOTES,
};
use crate::perturbation::{
    case_formula_sign, classify_channel, group_energies, require_sigma_hat, solve_resolved,
    window_sign, AcSpectrum, Case, Counts, EigenGroup, PerturbationSpec,
};
use crate::secular::{SecularWindow, SolverConfig};

pub const TOOL_NAME: &str = "krein-spectra";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One of the built-in models, as named in a spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Interval {
        alpha: f64,
        #[serde(default = "default_slab_kmax")]
        kmax: u32,
    },
    Circle {
        lambda: f64,
        alpha: f64,
        #[serde(default = "default_circle_kmax")]
        kmax: u32,
        #[serde(deserialize_with = "potential_or_text")]
        potential: Potential,
    },
}

fn default_slab_kmax() -> u32 {
    DEFAULT_SLAB_KMAX
}

fn default_circle_kmax() -> u32 {
    DEFAULT_CIRCLE_KMAX
}

fn potential_or_text<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Potential, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Full(Potential),
    }
    match Raw::deserialize(d)? {
        Raw::Text(t) => Potential::parse(&t).map_err(serde::de::Error::custom),
        Raw::Full(p) => p.validate().map(|_| p).map_err(serde::de::Error::custom),
    }
}

/// What a run was asked to compute: explicit channels or a built-in model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum InputSpec {
    Channels(PerturbationSpec),
    Model(ModelSpec),
}

impl InputSpec {
    /// Parses a spec file. A full report is accepted too; its `spec` echo
    /// is used.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| json_error(&e))?;
        let Value::Object(obj) = &value else {
            return Err(Error::InvalidSpec("spec must be a JSON object".into()));
        };
        if obj.contains_key("tool") && obj.contains_key("spec") {
            let inner = serde_json::to_string(&obj["spec"]).expect("a JSON value serializes");
            return Self::parse(&inner);
        }
        let spec = if obj.contains_key("model") {
            InputSpec::Model(serde_json::from_str(text).map_err(|e| json_error(&e))?)
        } else {
            InputSpec::Channels(serde_json::from_str(text).map_err(|e| json_error(&e))?)
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InputSpec::Channels(s) => s.validate(),
            InputSpec::Model(ModelSpec::Interval { alpha, kmax }) => {
                SlabParams::new(*alpha, *kmax).map(|_| ())
            }
            InputSpec::Model(m @ ModelSpec::Circle { .. }) => circle_params(m).map(|_| ()),
        }
    }
}

fn circle_params(m: &ModelSpec) -> Result<CircleParams> {
    match m {
        ModelSpec::Circle {
            lambda,
            alpha,
            kmax,
            potential,
        } => CircleParams::new(*lambda, *alpha, potential.clone(), *kmax),
        ModelSpec::Interval { .. } => Err(Error::InvalidSpec("not a circle model".into())),
    }
}

/// Line/column diagnostics, and the list of measure kinds when an unknown
/// one was named.
fn json_error(e: &serde_json::Error) -> Error {
    let text = e.to_string();
    // serde_json appends its own " at line L column C"
    let what = text
        .rsplit_once(" at line ")
        .map_or(text.as_str(), |(head, _)| head);
    let mut msg = format!("line {}, column {}: {what}", e.line(), e.column());
    if text.contains("unknown variant") && MEASURE_KINDS.iter().any(|k| text.contains(k)) {
        msg.push_str(&format!(
            "; known measure kinds: {}",
            MEASURE_KINDS.join(", ")
        ));
    }
    Error::InvalidSpec(msg)
}

/// What was computed for the channels of a spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Classify,
    Count,
    Interval,
    Circle,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Classify => "classify",
            Command::Count => "count",
            Command::Interval => "interval",
            Command::Circle => "circle",
            Command::Sweep => "sweep",
        }
    }

    fn solves(self) -> bool {
        !matches!(self, Command::Classify | Command::Count)
    }
}

/// One channel in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelRow {
    pub k: i64,
    pub case: Option<Case>,
    pub window: Option<SecularWindow>,
    /// Absent for unperturbed channels.
    pub b: Option<f64>,
    /// `−1, 0, +1` by window membership.
    pub sign: i8,
    /// The same from the case formulas.
    pub case_sign: Option<i8>,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    pub identity_residual: Option<f64>,
    pub embedded: bool,
    pub near_boundary: bool,
    pub error: Option<ErrorNote>,
}

impl ChannelRow {
    fn blank(k: i64) -> Self {
        Self {
            k,
            case: None,
            window: None,
            b: None,
            sign: 0,
            case_sign: None,
            energy: None,
            residual: None,
            identity_residual: None,
            embedded: false,
            near_boundary: false,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    /// Aggregated from the `sign` column.
    pub n_minus: usize,
    pub n_plus: usize,
    /// Aggregated from the `case_sign` column.
    pub case_formula: Option<Counts>,
    pub sigma_ac: AcSpectrum,
    /// Solved eigenvalues with coinciding values merged.
    pub eigenvalues: Vec<EigenGroup>,
    /// Channels whose eigenvalue lies in `σ_ac`.
    pub embedded: Vec<i64>,
    pub failed: Vec<i64>,
    pub truncation: Option<String>,
    pub notes: Vec<String>,
}

impl Summary {
    fn from_rows(
        rows: &[ChannelRow],
        lambda: f64,
        truncation: Option<String>,
        notes: Vec<String>,
    ) -> Self {
        let n_minus = rows.iter().filter(|r| r.sign < 0).count();
        let n_plus = rows.iter().filter(|r| r.sign > 0).count();
        let case_formula = rows
            .iter()
            .all(|r| r.b.is_none() || r.case_sign.is_some())
            .then(|| Counts {
                n_minus: rows.iter().filter(|r| r.case_sign == Some(-1)).count(),
                n_plus: rows.iter().filter(|r| r.case_sign == Some(1)).count(),
            });
        let pairs: Vec<(i64, f64)> = rows
            .iter()
            .filter_map(|r| r.energy.map(|e| (r.k, e)))
            .collect();
        Self {
            n_minus,
            n_plus,
            case_formula,
            sigma_ac: AcSpectrum {
                lo: lambda,
                hi: ExtendedReal::PosInf,
            },
            eigenvalues: group_energies(&pairs),
            embedded: rows.iter().filter(|r| r.embedded).map(|r| r.k).collect(),
            failed: rows
                .iter()
                .filter(|r| r.error.is_some())
                .map(|r| r.k)
                .collect(),
            truncation,
            notes,
        }
    }
}

/// Model-specific tables carried next to the generic channel rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelTable {
    Interval {
        rows: Vec<SlabRow>,
    },
    Circle {
        rows: Vec<CircleRow>,
        count: CircleCount,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub tool: String,
    pub version: String,
    pub command: Command,
    /// SHA-256 of the canonical `(command, spec, config, version)` JSON.
    pub config_hash: String,
    pub spec: InputSpec,
    pub config: SolverConfig,
    pub channels: Vec<ChannelRow>,
    pub summary: Summary,
    pub model: Option<ModelTable>,
}

/// How a run ended, in exit-code terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Io,
    Validation,
    Numeric,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Io => 1,
            Status::Validation => 2,
            Status::Numeric => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        if matches!(e, Error::Io(_)) {
            Status::Io
        } else if e.is_validation() {
            Status::Validation
        } else {
            Status::Numeric
        }
    }
}

impl SpectralReport {
    /// Numeric row failures outrank validation ones.
    pub fn status(&self) -> Status {
        let classes = self
            .channels
            .iter()
            .filter_map(|r| r.error.as_ref().map(|e| e.class));
        let mut status = Status::Ok;
        for c in classes {
            match c {
                ErrorClass::Numeric => return Status::Numeric,
                ErrorClass::Validation => status = Status::Validation,
            }
        }
        status
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        match (&self.model, self.command) {
            (Some(ModelTable::Interval { rows }), _) => out.push_str(&slab_csv(rows)),
            (Some(ModelTable::Circle { rows, count }), _) => {
                out.push_str(&circle_csv(rows));
                out.push_str(&format!(
                    "# summary,N_minus={},N_plus={},attractive={},predicted_minus={},predicted_plus={}\n",
                    count.n_minus, count.n_plus, count.perturbed_attractive, count.predicted_minus, count.predicted_plus
                ));
            }
            (None, Command::Classify) => out.push_str(&classify_csv(&self.channels)),
            (None, Command::Count) => out.push_str(&count_csv(&self.channels)),
            (None, _) => out.push_str(&channel_csv(&self.channels)),
        }
        out
    }

    fn csv_header(&self) -> String {
        let s = &self.summary;
        let mut h = format!(
            "# {} {}\n# command: {}\n# config_hash: {}\n# N_minus: {}\n# N_plus: {}\n# sigma_ac: [{}, +inf)\n",
            self.tool,
            self.version,
            self.command.name(),
            self.config_hash,
            s.n_minus,
            s.n_plus,
            fmt_f64(s.sigma_ac.lo)
        );
        if let Some(c) = s.case_formula {
            h.push_str(&format!(
                "# case_formula: N_minus={} N_plus={}\n",
                c.n_minus, c.n_plus
            ));
        }
        if !s.embedded.is_empty() {
            h.push_str(&format!("# embedded: {}\n", join_ints(&s.embedded)));
        }
        if !s.failed.is_empty() {
            h.push_str(&format!("# failed: {}\n", join_ints(&s.failed)));
        }
        if let Some(t) = &s.truncation {
            h.push_str(&format!("# truncation: {t}\n"));
        }
        for n in &s.notes {
            h.push_str(&format!("# note: {n}\n"));
        }
        h
    }
}

fn join_ints(v: &[i64]) -> String {
    v.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// SHA-256 over the canonical JSON of what determines a report.
pub fn config_hash(command: Command, spec: &InputSpec, config: &SolverConfig) -> String {
    let key = serde_json::json!({
        "command": command,
        "spec": spec,
        "config": config,
        "version": TOOL_VERSION,
    });
    let digest = Sha256::digest(to_canonical_value(&key).to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn to_canonical_value<T: Serialize>(v: &T) -> Value {
    fn sort(v: Value) -> Value {
        match v {
            Value::Object(m) => {
                let sorted: std::collections::BTreeMap<String, Value> =
                    m.into_iter().map(|(k, v)| (k, sort(v))).collect();
                Value::Object(sorted.into_iter().collect())
            }
            Value::Array(a) => Value::Array(a.into_iter().map(sort).collect()),
            other => other,
        }
    }
    sort(serde_json::to_value(v).expect("report types serialize"))
}

/// Pretty JSON with sorted keys and shortest round-trip floats, newline
/// terminated.
pub fn to_canonical_json<T: Serialize>(v: &T) -> String {
    let mut s =
        serde_json::to_string_pretty(&to_canonical_value(v)).expect("a JSON value serializes");
    s.push('\n');
    s
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "+inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn ext(v: ExtendedReal) -> String {
    match v {
        ExtendedReal::Finite(x) => fmt_f64(x),
        ExtendedReal::PosInf => "+inf".into(),
        ExtendedReal::NegInf => "-inf".into(),
    }
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("fields are UTF-8")
}

fn err_text(e: &Option<ErrorNote>) -> String {
    e.as_ref().map(|e| e.message.clone()).unwrap_or_default()
}

fn case_text(c: Option<Case>) -> String {
    c.map(|c| c.to_string()).unwrap_or_default()
}

fn window_cols(w: &Option<SecularWindow>) -> [String; 3] {
    match w {
        Some(w) => [ext(w.lo), ext(w.hi), fmt_f64(w.threshold)],
        None => Default::default(),
    }
}

fn channel_csv(rows: &[ChannelRow]) -> String {
    table(
        &[
            "k",
            "case",
            "window_lo",
            "window_hi",
            "M",
            "b",
            "E",
            "residual",
            "identity_residual",
            "embedded",
            "near_boundary",
            "error",
        ],
        rows.iter().map(|r| {
            let [lo, hi, m] = window_cols(&r.window);
            vec![
                r.k.to_string(),
                case_text(r.case),
                lo,
                hi,
                m,
                opt(r.b),
                opt(r.energy),
                opt(r.residual),
                opt(r.identity_residual),
                r.embedded.to_string(),
                r.near_boundary.to_string(),
                err_text(&r.error),
            ]
        }),
    )
}

fn classify_csv(rows: &[ChannelRow]) -> String {
    table(
        &[
            "k",
            "case",
            "e_in_h1",
            "boundary_finite",
            "window_lo",
            "window_hi",
            "M",
            "b",
            "error",
        ],
        rows.iter().map(|r| {
            let [lo, hi, m] = window_cols(&r.window);
            let (h1, bf) = match &r.window {
                Some(w) => (w.lo.is_finite().to_string(), w.hi.is_finite().to_string()),
                None => Default::default(),
            };
            vec![
                r.k.to_string(),
                case_text(r.case),
                h1,
                bf,
                lo,
                hi,
                m,
                opt(r.b),
                err_text(&r.error),
            ]
        }),
    )
}

fn count_csv(rows: &[ChannelRow]) -> String {
    table(
        &[
            "k",
            "b",
            "window_lo",
            "window_hi",
            "sign",
            "case_sign",
            "error",
        ],
        rows.iter().map(|r| {
            let [lo, hi, _] = window_cols(&r.window);
            vec![
                r.k.to_string(),
                opt(r.b),
                lo,
                hi,
                r.sign.to_string(),
                r.case_sign.map(|s| s.to_string()).unwrap_or_default(),
                err_text(&r.error),
            ]
        }),
    )
}

pub(crate) const SLAB_COLUMNS: &[&str] = &[
    "k",
    "s_k",
    "b_k",
    "E_closed",
    "E_solver",
    "rel_diff",
    "sign",
    "embedded",
    "case",
    "residual",
    "identity_residual",
    "error",
];

pub(crate) fn slab_record(r: &SlabRow) -> Vec<String> {
    vec![
        r.k.to_string(),
        fmt_f64(r.s_k),
        fmt_f64(r.b_k),
        opt(r.e_closed),
        opt(r.e_solver),
        opt(r.rel_diff),
        r.sign.to_string(),
        r.embedded.to_string(),
        r.case.to_string(),
        opt(r.residual),
        opt(r.identity_residual),
        err_text(&r.error),
    ]
}

fn slab_csv(rows: &[SlabRow]) -> String {
    table(SLAB_COLUMNS, rows.iter().map(slab_record))
}

pub(crate) const CIRCLE_COLUMNS: &[&str] = &[
    "k",
    "v_k",
    "q_k",
    "q_kernel",
    "b_k",
    "window_hi",
    "case",
    "E",
    "residual",
    "identity_residual",
    "embedded",
    "error",
];

pub(crate) fn circle_record(r: &CircleRow) -> Vec<String> {
    vec![
        r.k.to_string(),
        fmt_f64(r.v_k),
        fmt_f64(r.q_k),
        fmt_f64(r.q_kernel),
        opt(r.b_k),
        fmt_f64(r.window_hi),
        case_text(r.case),
        opt(r.energy),
        opt(r.residual),
        opt(r.identity_residual),
        r.embedded.to_string(),
        err_text(&r.error),
    ]
}

fn circle_csv(rows: &[CircleRow]) -> String {
    table(CIRCLE_COLUMNS, rows.iter().map(circle_record))
}

pub(crate) fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    table(header, rows)
}

/// Runs `command` on `spec`. Spec-level validation failures are returned as
/// errors; per-channel failures are annotated on their rows.
pub fn build_report(
    command: Command,
    spec: &InputSpec,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<SpectralReport> {
    spec.validate()?;
    cfg.validate()?;
    let (channels, summary, model) = match spec {
        InputSpec::Channels(s) => channels_report(command, s, cfg, exec)?,
        InputSpec::Model(ModelSpec::Interval { alpha, kmax }) => {
            interval_report(*alpha, *kmax, cfg, exec)?
        }
        InputSpec::Model(m @ ModelSpec::Circle { .. }) => {
            circle_report(&circle_params(m)?, cfg, exec)?
        }
    };
    Ok(SpectralReport {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        command,
        config_hash: config_hash(command, spec, cfg),
        spec: spec.clone(),
        config: *cfg,
        channels,
        summary,
        model,
    })
}

type Parts = (Vec<ChannelRow>, Summary, Option<ModelTable>);

fn channels_report(
    command: Command,
    spec: &PerturbationSpec,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<Parts> {
    if command.solves() {
        require_sigma_hat(spec)?;
    }
    let solve = command.solves();
    let rows = map_ordered(&spec.channels, exec, |c| {
        let mut row = ChannelRow::blank(c.k);
        row.b = Some(c.b);
        let ch = match c.resolve(&cfg.quadrature) {
            Ok(ch) => ch,
            Err(e) => {
                row.error = Some(e.into());
                return row;
            }
        };
        let tag = classify_channel(&ch);
        row.case = Some(tag.case);
        row.window = Some(ch.window);
        row.sign = window_sign(&ch.window, c.b);
        row.case_sign = Some(case_formula_sign(&tag, &ch.window, c.b));
        if solve {
            match solve_resolved(&ch, spec.lambda, cfg) {
                Ok(Some(rec)) => {
                    row.energy = Some(rec.energy);
                    row.residual = Some(rec.residual);
                    row.identity_residual = Some(rec.identity_residual);
                    row.embedded = rec.embedded;
                    row.near_boundary = rec.near_boundary;
                }
                Ok(None) => {}
                Err(e) => row.error = Some(e.into()),
            }
        }
        row
    });
    let summary = Summary::from_rows(&rows, spec.lambda, None, Vec::new());
    Ok((rows, summary, None))
}

fn interval_report(alpha: f64, kmax: u32, cfg: &SolverConfig, exec: Execution) -> Result<Parts> {
    let slab = slab_rows(alpha, kmax, cfg, exec)?;
    let rows: Vec<ChannelRow> = slab
        .iter()
        .map(|r| {
            let mut row = ChannelRow::blank(i64::from(r.k));
            row.case = Some(r.case);
            let k2 = f64::from(r.k) * f64::from(r.k);
            if r.b_k.is_finite() {
                row.b = Some(r.b_k);
                row.window = Some(SecularWindow {
                    lo: ExtendedReal::NegInf,
                    hi: ExtendedReal::PosInf,
                    threshold: k2,
                });
                row.sign = if r.b_k < 0.0 { -1 } else { 1 };
                row.case_sign = Some(row.sign);
            }
            row.energy = r.e_solver;
            row.residual = r.residual;
            row.identity_residual = r.identity_residual;
            row.embedded = r.embedded;
            row.near_boundary = r.near_boundary;
            row.error = r.error.clone();
            row
        })
        .collect();
    let threshold = slab_embedded_threshold(alpha, kmax)?;
    let embedded_note = match threshold.k {
        Some(k) => format!(
            "; eigenvalues reach sigma_ac from k = {k}{}",
            if threshold.increasing_beyond {
                " and increase beyond it"
            } else {
                ""
            }
        ),
        None => String::new(),
    };
    let truncation = format!(
        "channels k = 1..={kmax}; every k > {kmax} also carries one eigenvalue (Case 1 window is the whole line){embedded_note}"
    );
    let notes = SLAB_NOTES.iter().map(|s| s.to_string()).collect();
    let summary = Summary::from_rows(&rows, SLAB_LAMBDA, Some(truncation), notes);
    Ok((rows, summary, Some(ModelTable::Interval { rows: slab })))
}

fn circle_report(params: &CircleParams, cfg: &SolverConfig, exec: Execution) -> Result<Parts> {
    let circle = circle_rows(params, cfg, exec)?;
    let count = count_rows(&circle, params.alpha);
    let rows: Vec<ChannelRow> = circle
        .iter()
        .map(|r| {
            let mut row = ChannelRow::blank(i64::from(r.k));
            row.case = r.case;
            row.b = r.b_k;
            if r.window_hi.is_finite() {
                row.window = Some(SecularWindow {
                    lo: ExtendedReal::NegInf,
                    hi: ExtendedReal::Finite(r.window_hi),
                    threshold: params.lambda,
                });
            }
            if let (Some(b), Some(w)) = (r.b_k, &row.window) {
                row.sign = window_sign(w, b);
                let tag = crate::perturbation::CaseTag::from_window(w);
                row.case_sign = Some(case_formula_sign(&tag, w, b));
            }
            row.energy = r.energy;
            row.residual = r.residual;
            row.identity_residual = r.identity_residual;
            row.embedded = r.embedded;
            row.error = r.error.clone();
            row
        })
        .collect();
    let k = params.k_max as i32;
    let edge = |k: i32| {
        params
            .potential
            .v_k(k)
            .map(fmt_f64)
            .unwrap_or_else(|_| "undefined".into())
    };
    let truncation = format!(
        "channels |k| <= {}; v_k at the cut: v_{} = {}, v_{} = {}; every further channel with alpha v_k > 0 adds one eigenvalue",
        params.k_max,
        -k,
        edge(-k),
        k,
        edge(k)
    );
    let notes = CIRCLE_NOTES.iter().map(|s| s.to_string()).collect();
    let summary = Summary::from_rows(&rows, params.lambda, Some(truncation), notes);
    Ok((
        rows,
        summary,
        Some(ModelTable::Circle {
            rows: circle,
            count,
        }),
    ))
}
