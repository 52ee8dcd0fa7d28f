//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals, and on
//! `[0, ∞)` through the compactifying map `s = L·u/(1−u)`.
//!
//! The integrator keeps a list of segments and always bisects the one with
//! the largest error estimate until the summed estimate meets
//! `max(abs_tol, rel_tol·|I|)`. Everything is sequential and deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const HALF_LINE_PANELS: usize = 8;

/// Change of variables used for `[M, ∞)` tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailMap {
    /// `t = M + L·u/(1−u)`, `u ∈ [0, 1)`.
    #[default]
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    #[serde(default)]
    pub tail_map: TailMap,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
            tail_map: TailMap::Rational,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter("abs_tol must be positive".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter("rel_tol must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// A converged integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resabs = WGK[7] * fc.abs();
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resabs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    (value, error)
}

fn make_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let (value, error) = gauss_kronrod(f, a, b);
    let mid = 0.5 * (a + b);
    Segment {
        a,
        b,
        value,
        error,
        splittable: mid > a && mid < b && (b - a) > 4.0 * f64::EPSILON * a.abs().max(b.abs()),
    }
}

/// Integrates `f` over `[a, b]`, starting from the partition given by the
/// interior `breakpoints` (values outside `(a, b)` are ignored).
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "finite interval expected, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);

    let mut segments: Vec<Segment> = edges
        .windows(2)
        .map(|w| make_segment(&f, w[0], w[1]))
        .collect();
    // the budget counts bisections, not the supplied partition
    let budget = cfg.max_subdivisions + segments.len() - 1;

    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                estimate: value,
                error_bound: error,
                subdivisions: segments.len(),
            });
        }
        let tolerance = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tolerance {
            return Ok(Estimate {
                value: sign * value,
                error,
                subdivisions: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|(_, x), (_, y)| x.error.total_cmp(&y.error))
            .map(|(i, _)| i);
        let Some(worst) = worst else {
            return Err(Error::Quadrature {
                estimate: sign * value,
                error_bound: error,
                subdivisions: segments.len(),
            });
        };
        if segments.len() >= budget {
            return Err(Error::Quadrature {
                estimate: sign * value,
                error_bound: error,
                subdivisions: segments.len(),
            });
        }
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        segments[worst] = make_segment(&f, seg.a, mid);
        segments.push(make_segment(&f, mid, seg.b));
    }
}

/// Integrates `g(s)` over `s ∈ [0, ∞)` with `s = scale·u/(1−u)`.
///
/// `breakpoints` are given in `s` and are mapped into `u`. The integrand is
/// never evaluated at `u = 1`.
pub fn integrate_half_line<G: Fn(f64) -> f64>(
    g: G,
    scale: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    integrate_half_line_stretched(g, scale, 1.0, breakpoints, cfg)
}

/// Stretch exponent for an integrand decaying like `s^-decay`: with
/// `s = scale·(u/(1−u))^γ` the mapped integrand behaves like
/// `(1−u)^{γ(decay−1)−1}` at `u = 1`, which stays bounded for
/// `γ = 1/(decay−1)`. Faster tails keep the plain map.
pub fn tail_stretch(decay: f64) -> f64 {
    if decay.is_finite() && decay > 1.0 && decay < 2.0 {
        (1.0 / (decay - 1.0)).min(MAX_STRETCH)
    } else {
        1.0
    }
}

const MAX_STRETCH: f64 = 64.0;

/// [`integrate_half_line`] with `s = scale·(u/(1−u))^γ`, `γ ≥ 1`.
pub fn integrate_half_line_stretched<G: Fn(f64) -> f64>(
    g: G,
    scale: f64,
    gamma: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail scale must be positive, got {scale}"
        )));
    }
    if !(gamma >= 1.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "tail stretch must be at least 1, got {gamma}"
        )));
    }
    match cfg.tail_map {
        TailMap::Rational => {
            let mapped = |u: f64| {
                let one_minus = 1.0 - u;
                if one_minus <= 0.0 {
                    return 0.0;
                }
                let r = u / one_minus;
                let (s, jac) = if gamma == 1.0 {
                    (scale * r, scale / (one_minus * one_minus))
                } else {
                    let rg = r.powf(gamma - 1.0);
                    (scale * rg * r, scale * gamma * rg / (one_minus * one_minus))
                };
                if !s.is_finite() {
                    return 0.0;
                }
                let v = g(s);
                if v == 0.0 {
                    0.0
                } else {
                    v * jac
                }
            };
            // a fixed starting partition keeps one smooth-looking panel from
            // passing the error test on its own
            let mut cuts: Vec<f64> = (1..HALF_LINE_PANELS)
                .map(|i| i as f64 / HALF_LINE_PANELS as f64)
                .collect();
            cuts.extend(
                breakpoints
                    .iter()
                    .filter(|&&s| s > 0.0 && s.is_finite())
                    .map(|&s| {
                        let r = if gamma == 1.0 {
                            s / scale
                        } else {
                            (s / scale).powf(1.0 / gamma)
                        };
                        r / (1.0 + r)
                    }),
            );
            integrate_interval(mapped, 0.0, 1.0, &cuts, cfg)
        }
    }
}
