//! A circle of radius 1 in ℝ³ carrying the perturbation `−αV(Δ_φ)δ_c` of
//! `A = −Δ + λ`.
//!
//! Channel `k ∈ ℤ` is `e_k = 𝔾 e^{ikφ}δ_c`. Its spectral measure lives on
//! `[λ, ∞)` with density `w_k(t) = ∫_0^{2√(t−λ)} J_{2|k|} / (2t²)`, which
//! vanishes like `(t−λ)^{|k|+1/2}` at the threshold and decays like `t⁻²`,
//! so every channel is in Case 2.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j;
use crate::error::{Error, ErrorNote, Result};
use crate::exec::{map_ordered, Execution};
use crate::measure::{ExtendedReal, SpectralMeasure};
use crate::perturbation::{
    classify_channel, solve_resolved, Case, Channel, ChannelSpec, PerturbationSpec,
};
use crate::quadrature::{integrate_interval, QuadratureConfig};
use crate::secular::SolverConfig;

pub const DEFAULT_CIRCLE_KMAX: u32 = 16;

/// Radius of the Fourier-side integral; the remainder is added analytically.
const FOURIER_CUTOFF: f64 = 2000.0;

/// Notes attached to every circle report.
pub const CIRCLE_NOTES: &[&str] = &[
    "channel density decays like t^-2, so s(-inf) = -inf; the threshold order is |k| + 1/2, so s(lambda) is finite (Case 2)",
    "norm_half <= pi/sqrt(lambda), well inside the bound 2 pi^3/sqrt(lambda)",
    "b_k > 0 and inside the window when alpha v_k > 0 and 1 + alpha v_k q_k < 0, which yields a positive eigenvalue in (0, lambda); N_+ = 0 only for weak coupling alpha v_k |q_k| < 1",
    "the circle lies in the plane x_3 = 0, so the Fourier phase is p_1 cos(phi) + p_2 sin(phi) with no p_3 term; the angular weight e^{ik(phi - phi')} is kept",
];

/// `V` evaluated at `k²` gives `v_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Const {
        c: f64,
    },
    /// `Σ c_i x^i`.
    Poly {
        coefficients: Vec<f64>,
    },
    /// Piecewise linear through `(x, V(x))` points with increasing `x`.
    Table {
        points: Vec<[f64; 2]>,
    },
}

impl Potential {
    /// Parses `const:c`, `poly:c0,c1,…` or `table:path`.
    pub fn parse(text: &str) -> Result<Self> {
        let (head, rest) = text.split_once(':').ok_or_else(|| {
            Error::InvalidParameter(format!(
                "potential {text:?}: expected const:, poly: or table:"
            ))
        })?;
        let p = match head.trim() {
            "const" => Potential::Const {
                c: parse_number(rest)?,
            },
            "poly" => Potential::Poly {
                coefficients: rest.split(',').map(parse_number).collect::<Result<_>>()?,
            },
            "table" => Potential::Table {
                points: read_table(Path::new(rest.trim()))?,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown potential kind {other:?}; expected const, poly or table"
                )))
            }
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Potential::Const { c } if !c.is_finite() => Err(Error::InvalidParameter(
                "potential constant must be finite".into(),
            )),
            Potential::Poly { coefficients }
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) =>
            {
                Err(Error::InvalidParameter(
                    "polynomial needs finite coefficients".into(),
                ))
            }
            Potential::Table { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidParameter(
                        "potential table needs two points".into(),
                    ));
                }
                if points
                    .iter()
                    .any(|p| !p[0].is_finite() || !p[1].is_finite())
                    || points.windows(2).any(|w| w[1][0] <= w[0][0])
                {
                    return Err(Error::InvalidParameter(
                        "potential table needs finite points with increasing x".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Potential::Const { c } => Ok(*c),
            Potential::Poly { coefficients } => {
                Ok(coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c))
            }
            Potential::Table { points } => {
                let first = points[0][0];
                let last = points[points.len() - 1][0];
                if x < first || x > last {
                    return Err(Error::InvalidParameter(format!(
                        "potential table covers [{first}, {last}], asked for V({x})"
                    )));
                }
                let i = points
                    .partition_point(|p| p[0] <= x)
                    .clamp(1, points.len() - 1);
                let ([x0, y0], [x1, y1]) = (points[i - 1], points[i]);
                Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
            }
        }
    }

    /// `v_k = V(k²)`.
    pub fn v_k(&self, k: i32) -> Result<f64> {
        let kk = f64::from(k);
        self.eval(kk * kk)
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("not a number: {s:?}")))
}

/// Two numbers per line separated by a comma or whitespace; `#` starts a
/// comment.
fn read_table(path: &Path) -> Result<Vec<[f64; 2]>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "{}:{}: expected two columns",
                path.display(),
                n + 1
            )));
        }
        out.push([parse_number(fields[0])?, parse_number(fields[1])?]);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleParams {
    pub lambda: f64,
    pub alpha: f64,
    pub potential: Potential,
    /// Channels `|k| ≤ k_max`.
    pub k_max: u32,
}

impl CircleParams {
    pub fn new(lambda: f64, alpha: f64, potential: Potential, k_max: u32) -> Result<Self> {
        let p = Self {
            lambda,
            alpha,
            potential,
            k_max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_lambda(self.lambda)?;
        if self.alpha == 0.0 || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and nonzero, got {}",
                self.alpha
            )));
        }
        if self.k_max > i32::MAX as u32 / 2 {
            return Err(Error::InvalidParameter("k_max too large".into()));
        }
        self.potential.validate()
    }

    pub fn indices(&self) -> Vec<i32> {
        let k = self.k_max as i32;
        (-k..=k).collect()
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(())
}

pub fn circle_channel_measure(k: i32, lambda: f64) -> Result<SpectralMeasure> {
    check_lambda(lambda)?;
    SpectralMeasure::bessel_circle(k, lambda)
}

/// `‖𝔸^{1/2}e_k‖'²₋₁ = ∫ t/(t−λ) dν_k`, the boundary moment of the channel
/// measure.
pub fn circle_norm_half(k: i32, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    match circle_channel_measure(k, lambda)?.boundary_moment(cfg)? {
        ExtendedReal::Finite(v) => Ok(v),
        other => Err(Error::NonConvergence(format!(
            "circle boundary moment is {other}"
        ))),
    }
}

/// The same quantity from the Fourier side:
/// `π ∫_0^∞ J_k(r)² / (√(r²+λ)(√(r²+λ)+r)) dr`.
pub fn circle_norm_half_fourier(k: i32, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_lambda(lambda)?;
    let f = |r: f64| {
        let root = (r * r + lambda).sqrt();
        let j = bessel_j(k, r);
        j * j / (root * (root + r))
    };
    // one breakpoint per half period of J_k²
    let cuts: Vec<f64> = (1..(FOURIER_CUTOFF / PI) as usize)
        .map(|i| i as f64 * PI)
        .collect();
    let local = QuadratureConfig {
        max_subdivisions: cfg.max_subdivisions.max(4 * cuts.len()),
        ..*cfg
    };
    let body = integrate_interval(f, 0.0, FOURIER_CUTOFF, &cuts, &local)?.value;
    // J_k² ≈ 1/(πr) on average and the bracket ≈ 1/(2r²)
    let tail = 1.0 / (4.0 * PI * FOURIER_CUTOFF * FOURIER_CUTOFF);
    Ok(PI * (body + tail))
}

/// `q_k = −λ‖𝔸^{1/2}e_k‖'²₋₁`.
pub fn circle_q(k: i32, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(-lambda * circle_norm_half(k, lambda, cfg)?)
}

/// `q_k` from its definition as the `k`-th circle Fourier coefficient of
/// the regular part `G_r(r) = −(1 − e^{−√λ r})/(4πr)` of the Green's
/// function, taken along the chord length `r = 2 sin(θ/2)`:
/// `q_k = −∫_0^π (1 − e^{−2√λ sin(θ/2)})/(2 sin(θ/2)) cos(kθ) dθ`.
pub fn circle_q_kernel(k: i32, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(-circle_secular_kernel(k, lambda, lambda, cfg)?)
}

/// `s_k(E)` for `E ≤ λ` in position space. With `e_k = A⁻¹χ_k`,
/// `s_k(E) = ((A−E)⁻¹χ_k, χ_k) − (A⁻¹χ_k, χ_k)`, i.e. the `k`-th circle
/// coefficient of `G_{λ−E} − G_λ`, `G_μ(r) = e^{−√μ r}/(4πr)`:
/// `s_k(E) = ∫_0^π (e^{−√(λ−E) r} − e^{−√λ r})/r · cos(kθ) dθ`,
/// `r = 2 sin(θ/2)`. Smooth in `θ`, and cheap next to the spectral
/// integral, whose density oscillates.
pub fn circle_secular_kernel(
    k: i32,
    lambda: f64,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_lambda(lambda)?;
    if !energy.is_finite() || energy > lambda {
        return Err(Error::Domain {
            energy,
            threshold: lambda,
        });
    }
    if energy == 0.0 {
        return Ok(0.0);
    }
    let c = lambda.sqrt();
    let a = (lambda - energy).sqrt();
    // a − c without cancellation
    let diff = -energy / (a + c);
    let f = |theta: f64| {
        let r = 2.0 * (0.5 * theta).sin();
        let g = if r == 0.0 {
            -diff
        } else {
            // e^{−ar} − e^{−cr} = e^{−cr}·expm1(−(a−c)r)
            (-c * r).exp() * (-diff * r).exp_m1() / r
        };
        g * (f64::from(k) * theta).cos()
    };
    let n = k.unsigned_abs().max(1) as usize;
    let mut cuts: Vec<f64> = (1..2 * n).map(|i| i as f64 * PI / (2 * n) as f64).collect();
    // the integrand varies on the scale θ ~ 1/a for large a
    let mut t = 1.0 / a.max(c);
    while t < PI {
        cuts.push(t);
        t *= 10.0;
    }
    // abs_tol is a tolerance on s itself
    integrate_interval(f, 0.0, PI, &cuts, cfg).map(|e| e.value)
}

/// `b_k = −(1 + αv_kq_k)/(αv_k)`; `Ok(None)` when `v_k = 0` (unperturbed
/// channel).
pub fn circle_coupling(k: i32, alpha: f64, v_k: f64, q_k: f64) -> Result<Option<f64>> {
    if alpha == 0.0 || !alpha.is_finite() || !v_k.is_finite() || !q_k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "circle coupling needs finite alpha != 0, v_k, q_k (k = {k})"
        )));
    }
    if v_k == 0.0 {
        return Ok(None);
    }
    let avq = alpha * v_k * q_k;
    let denom = 1.0 + avq;
    if denom.abs() <= 4.0 * f64::EPSILON * avq.abs().max(1.0) {
        return Err(Error::DegenerateCoupling(format!(
            "alpha v_k q_k = -1 at k = {k}"
        )));
    }
    Ok(Some(-denom / (alpha * v_k)))
}

/// One line of the circle table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleRow {
    pub k: i32,
    pub v_k: f64,
    pub q_k: f64,
    /// `q_k` from the Green's-function kernel.
    pub q_kernel: f64,
    pub norm_half: f64,
    pub b_k: Option<f64>,
    /// `s(λ) = λ·norm_half`.
    pub window_hi: f64,
    pub case: Option<Case>,
    pub energy: Option<f64>,
    pub residual: Option<f64>,
    pub identity_residual: Option<f64>,
    pub embedded: bool,
    pub skipped: bool,
    pub error: Option<ErrorNote>,
}

fn circle_row(k: i32, params: &CircleParams, cfg: &SolverConfig) -> CircleRow {
    let mut row = CircleRow {
        k,
        v_k: f64::NAN,
        q_k: f64::NAN,
        q_kernel: f64::NAN,
        norm_half: f64::NAN,
        b_k: None,
        window_hi: f64::NAN,
        case: None,
        energy: None,
        residual: None,
        identity_residual: None,
        embedded: false,
        skipped: false,
        error: None,
    };
    if let Err(e) = fill_circle_row(&mut row, params, cfg) {
        row.error = Some(e.into());
    }
    row
}

fn fill_circle_row(row: &mut CircleRow, params: &CircleParams, cfg: &SolverConfig) -> Result<()> {
    let (k, lambda) = (row.k, params.lambda);
    let q = &cfg.quadrature;
    row.v_k = params.potential.v_k(k)?;
    let measure = circle_channel_measure(k, lambda)?;
    row.norm_half = circle_norm_half(k, lambda, q)?;
    row.q_k = -lambda * row.norm_half;
    row.window_hi = lambda * row.norm_half;
    row.q_kernel = circle_q_kernel(k, lambda, q)?;
    let Some(b) = circle_coupling(k, params.alpha, row.v_k, row.q_k)? else {
        row.skipped = true;
        return Ok(());
    };
    row.b_k = Some(b);
    let ch = Channel::new(i64::from(k), measure, b, q)?;
    row.case = Some(classify_channel(&ch).case);
    if let Some(rec) = solve_resolved(&ch, lambda, cfg)? {
        row.energy = Some(rec.energy);
        row.residual = Some(rec.residual);
        row.identity_residual = Some(rec.identity_residual);
        row.embedded = rec.embedded;
    }
    Ok(())
}

/// Per-channel data for `|k| ≤ k_max`, in increasing `k`.
pub fn circle_rows(
    params: &CircleParams,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<Vec<CircleRow>> {
    params.validate()?;
    cfg.validate()?;
    Ok(map_ordered(&params.indices(), exec, |&k| {
        circle_row(k, params, cfg)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircleCount {
    pub n_minus: usize,
    pub n_plus: usize,
    /// `#{k : αv_k > 0}`.
    pub perturbed_attractive: usize,
    /// `#{k : αv_k > 0, 1 + αv_kq_k > 0}`, the channels with `b_k < 0`.
    pub predicted_minus: usize,
    /// `#{k : αv_k > 0, 1 + αv_kq_k < 0}`, the channels with
    /// `0 < b_k < s(λ)`.
    pub predicted_plus: usize,
    pub failed: usize,
}

/// Counts over rows: window membership (`n_minus`, `n_plus`) next to the
/// sign rules in `α, v_k, q_k`.
pub fn count_rows(rows: &[CircleRow], alpha: f64) -> CircleCount {
    let mut c = CircleCount::default();
    for r in rows {
        if r.error.is_some() {
            c.failed += 1;
        }
        // s is increasing with s(0) = 0 and window (−∞, s(λ)), so the root
        // sign is the sign of b. This still counts roots too far below the
        // threshold to be represented.
        if let Some(b) = r.b_k {
            if b < 0.0 {
                c.n_minus += 1;
            } else if b < r.window_hi {
                c.n_plus += 1;
            }
        }
        if alpha * r.v_k > 0.0 {
            c.perturbed_attractive += 1;
            if 1.0 + alpha * r.v_k * r.q_k > 0.0 {
                c.predicted_minus += 1;
            } else {
                c.predicted_plus += 1;
            }
        }
    }
    c
}

pub fn circle_count(
    params: &CircleParams,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<CircleCount> {
    Ok(count_rows(&circle_rows(params, cfg, exec)?, params.alpha))
}

/// The perturbation spec for the channels with `v_k ≠ 0`.
pub fn circle_spec(
    params: &CircleParams,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<PerturbationSpec> {
    params.validate()?;
    let built: Vec<Result<Option<ChannelSpec>>> = map_ordered(&params.indices(), exec, |&k| {
        let v = params.potential.v_k(k)?;
        let q = circle_q(k, params.lambda, cfg)?;
        match circle_coupling(k, params.alpha, v, q)? {
            None => Ok(None),
            Some(b) => ChannelSpec::new(i64::from(k), circle_channel_measure(k, params.lambda)?, b)
                .map(Some),
        }
    });
    let channels = built
        .into_iter()
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    PerturbationSpec::new(params.lambda, channels, true)
}
