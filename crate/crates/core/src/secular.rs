//! The secular function `s(E) = E ∫ t/(t−E) dν(t)` of a channel, its
//! limits at `−∞` and at the threshold `M`, and the monotone root solver
//! for `s(E) = b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{decades, ExtendedReal, MeasureKind, SpectralMeasure};
use crate::model_circle::circle_secular_kernel;
use crate::quadrature::QuadratureConfig;

/// Relative width of the excluded band `[M − ε_M, M)`, `ε_M = 1e-9·M`.
pub const BOUNDARY_GUARD: f64 = 1e-9;

/// Besides `|s(E) − b| ≤ tolerance`, the solver narrows the bracket to this
/// width relative to `max(1, |E|)`, since a flat `s` lets a small residual
/// hide a large error in `E`.
pub const ABSCISSA_TOLERANCE: f64 = 1e-13;

pub fn boundary_guard(threshold: f64) -> f64 {
    BOUNDARY_GUARD * threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub quadrature: QuadratureConfig,
    /// Acceptance threshold on `|s(E) − b|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            tolerance: 1e-10,
            max_iterations: 400,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(
                "solver tolerance must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The open interval `(s(−∞), s(M))` of couplings that produce an eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularWindow {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
    #[serde(rename = "M")]
    pub threshold: f64,
}

impl SecularWindow {
    pub fn contains(&self, b: f64) -> bool {
        self.lo < b && self.hi > b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularRoot {
    #[serde(rename = "E")]
    pub energy: f64,
    pub residual: f64,
    pub bracket_width: f64,
    /// The root lies inside `[M − ε_M, M)` and was not refined further.
    pub near_boundary: bool,
}

/// `s(E)` for `E < M − ε_M`.
pub fn eval_s(m: &SpectralMeasure, energy: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let threshold = m.lower_bound();
    if !energy.is_finite() || energy >= threshold {
        return Err(Error::Domain { energy, threshold });
    }
    let gap = threshold - energy;
    if gap < boundary_guard(threshold) {
        return Err(Error::NearBoundary { energy, threshold });
    }
    if energy == 0.0 {
        return Ok(0.0);
    }
    raw_eval(m, energy, cfg)
}

// No domain checks; callers guarantee E < M.
fn raw_eval(m: &SpectralMeasure, energy: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if let MeasureKind::BesselCircle { k, lambda } = m.kind() {
        return circle_secular_kernel(*k, *lambda, energy, cfg);
    }
    spectral_eval(m, energy, cfg)
}

/// `s(E)` by quadrature against the spectral measure, for every kind.
///
/// [`eval_s`] uses this except for circle channels, where the position-space
/// kernel is both cheaper and immune to the oscillating density; this entry
/// point keeps the spectral route available as a cross-check.
pub fn eval_s_spectral(m: &SpectralMeasure, energy: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let threshold = m.lower_bound();
    if !energy.is_finite() || energy >= threshold {
        return Err(Error::Domain { energy, threshold });
    }
    if threshold - energy < boundary_guard(threshold) {
        return Err(Error::NearBoundary { energy, threshold });
    }
    if energy == 0.0 {
        return Ok(0.0);
    }
    spectral_eval(m, energy, cfg)
}

fn spectral_eval(m: &SpectralMeasure, energy: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let gap = m.lower_bound() - energy;
    // t − E = s + (M − E) keeps the denominator exact near the threshold.
    let natural = m.natural_scale();
    let scale = natural.max(energy.abs()).max(gap);
    let cuts = decades(gap.min(natural), scale);
    // abs_tol is a tolerance on s(E), not on the integral it multiplies
    let local = QuadratureConfig {
        abs_tol: cfg.abs_tol / energy.abs(),
        ..*cfg
    };
    let integral = m.integrate_offset(|s, t| t / (s + gap), 0.0, scale, &cuts, &local)?;
    Ok(energy * integral)
}

/// `(g, e) = ∫ t/(t−E) dν`, the inner product of `g = U_{E0} e` with `e`.
pub fn resolvent_inner_product(
    m: &SpectralMeasure,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let threshold = m.lower_bound();
    if !energy.is_finite() || energy >= threshold {
        return Err(Error::Domain { energy, threshold });
    }
    let gap = threshold - energy;
    let natural = m.natural_scale();
    let scale = natural.max(energy.abs()).max(gap);
    let cuts = decades(gap.min(natural), scale);
    // the value shrinks like 1/|E| for large negative E
    let local = QuadratureConfig {
        abs_tol: cfg.abs_tol / energy.abs().max(1.0),
        ..*cfg
    };
    m.integrate_offset(|s, t| t / (s + gap), 0.0, scale, &cuts, &local)
}

/// `s(E)` without the boundary guard, for roots already placed inside it.
pub(crate) fn eval_s_unguarded(
    m: &SpectralMeasure,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let threshold = m.lower_bound();
    if !energy.is_finite() || energy >= threshold {
        return Err(Error::Domain { energy, threshold });
    }
    if energy == 0.0 {
        return Ok(0.0);
    }
    raw_eval(m, energy, cfg)
}

/// `s(−∞) = −∫ t dν`, or `−∞` when the first moment diverges.
pub fn s_at_minus_infinity(m: &SpectralMeasure, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    Ok(-m.first_moment(cfg)?)
}

/// `s(M) = M·∫ t/(t−M) dν`, or `+∞` when the boundary moment diverges.
pub fn s_at_boundary(m: &SpectralMeasure, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
    Ok(m.boundary_moment(cfg)?.scale(m.lower_bound()))
}

pub fn admissible_window(m: &SpectralMeasure, cfg: &QuadratureConfig) -> Result<SecularWindow> {
    Ok(SecularWindow {
        lo: s_at_minus_infinity(m, cfg)?,
        hi: s_at_boundary(m, cfg)?,
        threshold: m.lower_bound(),
    })
}

/// Solves `s(E) = b`; `Ok(None)` when `b` lies outside the window.
pub fn solve_secular(
    m: &SpectralMeasure,
    b: f64,
    cfg: &SolverConfig,
) -> Result<Option<SecularRoot>> {
    let window = admissible_window(m, &cfg.quadrature)?;
    solve_in_window(m, &window, b, cfg)
}

/// [`solve_secular`] with a window computed beforehand.
pub fn solve_in_window(
    m: &SpectralMeasure,
    window: &SecularWindow,
    b: f64,
    cfg: &SolverConfig,
) -> Result<Option<SecularRoot>> {
    cfg.validate()?;
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidCoupling);
    }
    if !window.contains(b) {
        return Ok(None);
    }
    let q = &cfg.quadrature;
    let threshold = m.lower_bound();
    let f = |e: f64| raw_eval(m, e, q).map(|v| v - b);

    let (mut lo, mut f_lo, mut hi, mut f_hi);
    if b > 0.0 {
        let top = threshold - boundary_guard(threshold);
        let f_top = f(top)?;
        if f_top <= 0.0 {
            // s(M − ε_M) ≤ b < s(M): the crossing is inside the guard band.
            return Ok(Some(SecularRoot {
                energy: top,
                residual: f_top.abs(),
                bracket_width: threshold - top,
                near_boundary: true,
            }));
        }
        lo = 0.0;
        f_lo = -b;
        hi = top;
        f_hi = f_top;
    } else {
        hi = 0.0;
        f_hi = -b;
        lo = (-1.0_f64).min(threshold - 1.0);
        f_lo = f(lo)?;
        let mut doublings = 0;
        while f_lo >= 0.0 {
            hi = lo;
            f_hi = f_lo;
            lo *= 2.0;
            doublings += 1;
            if doublings > 1100 || !lo.is_finite() {
                return Err(Error::NonConvergence(format!(
                    "no lower bracket for b = {b} down to E = {lo}"
                )));
            }
            f_lo = f(lo)?;
        }
    }

    // Illinois regula falsi: both bracket ends keep moving because the
    // retained end's value is halved whenever the same side moves twice.
    // Every fourth step falls back to bisection unless the width halved.
    let (mut w_lo, mut w_hi) = (f_lo, f_hi);
    let mut side = 0i8;
    let mut checkpoint = hi - lo;
    let mut last_width = hi - lo;
    for iteration in 0..cfg.max_iterations {
        let width = hi - lo;
        let mut x = lo - w_lo * width / (w_hi - w_lo);
        if iteration % 4 == 3 {
            if width > 0.5 * checkpoint {
                x = 0.5 * (lo + hi);
            }
            checkpoint = width;
        }
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(Some(SecularRoot {
                energy: x,
                residual: 0.0,
                bracket_width: width,
                near_boundary: false,
            }));
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            w_lo = fx;
            if side < 0 {
                w_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            w_hi = fx;
            if side > 0 {
                w_lo *= 0.5;
            }
            side = 1;
        }
        let new_width = hi - lo;
        if fx.abs() <= cfg.tolerance && new_width <= ABSCISSA_TOLERANCE * x.abs().max(1.0) {
            return Ok(Some(SecularRoot {
                energy: x,
                residual: fx.abs(),
                bracket_width: new_width,
                near_boundary: false,
            }));
        }
        if new_width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || new_width == last_width {
            let (energy, residual) = if f_lo.abs() < f_hi.abs() {
                (lo, f_lo.abs())
            } else {
                (hi, f_hi.abs())
            };
            if residual <= cfg.tolerance {
                return Ok(Some(SecularRoot {
                    energy,
                    residual,
                    bracket_width: new_width,
                    near_boundary: false,
                }));
            }
            return Err(Error::NonConvergence(format!(
                "bracket collapsed at E = {energy} with residual {residual:e} > {:e}",
                cfg.tolerance
            )));
        }
        last_width = new_width;
    }
    Err(Error::NonConvergence(format!(
        "no convergence after {} iterations, bracket [{lo}, {hi}]",
        cfg.max_iterations
    )))
}
