//! Absolutely continuous spectral measures on `[M, ∞)` and integration
//! against them.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bessel::bessel_j_integral;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line_stretched, tail_stretch, QuadratureConfig};

/// Weight `c` of the slab channel density `c/t²`.
///
/// Each slab channel vector has Fourier amplitude `1/(p²+k²)` over `p ∈ ℝ²`
/// with prefactor `π^{-3}/2`; resolving `|ê|²` onto the shells
/// `t = p²+k²` gives `dν/dt = π^{-6}/4 · (π/2) · (2π)² · π/t² = 1/(2π² t²)`,
/// independent of `k`.
pub const SLAB_DENSITY_COEFFICIENT: f64 = 1.0 / (2.0 * PI * PI);

/// Agreement required between a declared boundary order and its numeric probe.
pub const BOUNDARY_ORDER_PROBE_TOLERANCE: f64 = 0.2;

/// Most oscillation nodes handed to the quadrature for a circle density.
const CIRCLE_BREAKPOINT_CAP: usize = 1500;

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Multiplies by a strictly positive finite factor.
    pub fn scale(self, factor: f64) -> ExtendedReal {
        debug_assert!(factor > 0.0);
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v * factor),
            other => other,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
        }
    }
}

impl std::ops::Neg for ExtendedReal {
    type Output = ExtendedReal;
    fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
            ExtendedReal::NegInf => ExtendedReal::PosInf,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl PartialEq<f64> for ExtendedReal {
    fn eq(&self, other: &f64) -> bool {
        self.as_f64() == *other
    }
}

impl PartialOrd<f64> for ExtendedReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.as_f64().partial_cmp(other)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("+inf"),
            ExtendedReal::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::PosInf => s.serialize_str("+inf"),
            ExtendedReal::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtendedReal::Finite(v)),
            Raw::Tag(t) => match t.as_str() {
                "+inf" | "inf" => Ok(ExtendedReal::PosInf),
                "-inf" => Ok(ExtendedReal::NegInf),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"+inf\" or \"-inf\", got {other:?}"
                ))),
            },
        }
    }
}

/// The density families a channel measure can take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureKind {
    /// `w(t) = c·(t−M)^a·t^{-p}`; `a = 0` is the plain power law.
    PowerLaw {
        #[serde(rename = "M")]
        lower_bound: f64,
        p: f64,
        c: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        a: f64,
    },
    /// Slab channel `k ≥ 1`: support `[k², ∞)`, density `c/t²`.
    SlabChannel { k: u32 },
    /// Circle channel `k ∈ ℤ` over `A = −Δ + λ` in ℝ³:
    /// `w(t) = ∫_0^{2√(t−λ)} J_{2|k|}(x) dx / (2t²)`.
    BesselCircle { k: i32, lambda: f64 },
    /// Piecewise-linear density through `nodes` (first node at `M`),
    /// continued as `w_last·(t_last/t)^decay` when a decay is declared and
    /// as zero otherwise.
    Tabulated {
        nodes: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decay: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary_order: Option<f64>,
    },
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

pub const MEASURE_KINDS: &[&str] = &["power_law", "slab_channel", "bessel_circle", "tabulated"];

/// A validated spectral measure `ν` on `[M, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpectralMeasure {
    kind: MeasureKind,
    #[serde(skip)]
    lower_bound: f64,
}

impl<'de> Deserialize<'de> for SpectralMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let kind = MeasureKind::deserialize(d)?;
        SpectralMeasure::new(kind).map_err(serde::de::Error::custom)
    }
}

impl SpectralMeasure {
    pub fn new(kind: MeasureKind) -> Result<Self> {
        let lower_bound = match &kind {
            MeasureKind::PowerLaw {
                lower_bound,
                p,
                c,
                a,
            } => {
                if !(*lower_bound > 0.0 && lower_bound.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "power_law needs M > 0, got {lower_bound}"
                    )));
                }
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "power_law needs c > 0, got {c}"
                    )));
                }
                if !(*a >= 0.0 && a.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "power_law boundary exponent a must be >= 0, got {a}"
                    )));
                }
                if !(p - a > 1.0 && p.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "power_law mass is infinite unless p - a > 1 (p = {p}, a = {a})"
                    )));
                }
                *lower_bound
            }
            MeasureKind::SlabChannel { k } => {
                if *k < 1 {
                    return Err(Error::InvalidMeasure("slab_channel needs k >= 1".into()));
                }
                f64::from(*k) * f64::from(*k)
            }
            MeasureKind::BesselCircle { lambda, .. } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "bessel_circle needs lambda > 0, got {lambda}"
                    )));
                }
                *lambda
            }
            MeasureKind::Tabulated {
                nodes,
                decay,
                boundary_order,
            } => {
                validate_table(nodes, *decay, *boundary_order)?;
                nodes[0][0]
            }
        };
        Ok(Self { kind, lower_bound })
    }

    pub fn power_law(lower_bound: f64, p: f64, c: f64) -> Result<Self> {
        Self::new(MeasureKind::PowerLaw {
            lower_bound,
            p,
            c,
            a: 0.0,
        })
    }

    /// `c·(t−M)^a·t^{-p}` on `[M, ∞)`.
    pub fn shifted_power_law(lower_bound: f64, p: f64, c: f64, a: f64) -> Result<Self> {
        Self::new(MeasureKind::PowerLaw {
            lower_bound,
            p,
            c,
            a,
        })
    }

    pub fn slab_channel(k: u32) -> Result<Self> {
        Self::new(MeasureKind::SlabChannel { k })
    }

    pub fn bessel_circle(k: i32, lambda: f64) -> Result<Self> {
        Self::new(MeasureKind::BesselCircle { k, lambda })
    }

    pub fn tabulated(
        nodes: Vec<[f64; 2]>,
        decay: Option<f64>,
        boundary_order: Option<f64>,
    ) -> Result<Self> {
        Self::new(MeasureKind::Tabulated {
            nodes,
            decay,
            boundary_order,
        })
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    /// `M`, the bottom of the support.
    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    /// `w(t)`; zero below `M`.
    pub fn density(&self, t: f64) -> f64 {
        if t < self.lower_bound {
            return 0.0;
        }
        self.density_at_offset(t - self.lower_bound)
    }

    /// `w(M + s)` for `s ≥ 0`. Taking the offset keeps full precision next
    /// to the threshold.
    pub fn density_at_offset(&self, s: f64) -> f64 {
        let t = self.lower_bound + s;
        match &self.kind {
            MeasureKind::PowerLaw { p, c, a, .. } => {
                let head = if *a == 0.0 { 1.0 } else { s.powf(*a) };
                c * head * t.powf(-p)
            }
            MeasureKind::SlabChannel { .. } => SLAB_DENSITY_COEFFICIENT / (t * t),
            MeasureKind::BesselCircle { k, .. } => {
                let order = 2 * k.unsigned_abs();
                bessel_j_integral(order, 2.0 * s.sqrt()) / (2.0 * t * t)
            }
            MeasureKind::Tabulated { nodes, decay, .. } => tabulated_density(nodes, *decay, t),
        }
    }

    /// Exponent `p` of the tail `w(t) ~ C·t^{-p}`.
    pub fn tail_exponent(&self) -> Result<f64> {
        match &self.kind {
            MeasureKind::PowerLaw { p, a, .. } => Ok(p - a),
            MeasureKind::SlabChannel { .. } => Ok(2.0),
            // ∫_0^x J_n → 1, so w ~ 1/(2t²)
            MeasureKind::BesselCircle { .. } => Ok(2.0),
            MeasureKind::Tabulated { decay, .. } => {
                decay.ok_or(Error::ClassificationRequired("decay"))
            }
        }
    }

    /// Order `a` of vanishing at the threshold, `w(M+s) ~ s^a`.
    pub fn boundary_order(&self) -> Result<f64> {
        match &self.kind {
            MeasureKind::PowerLaw { a, .. } => Ok(*a),
            MeasureKind::SlabChannel { .. } => Ok(0.0),
            MeasureKind::BesselCircle { k, .. } => Ok(f64::from(k.unsigned_abs()) + 0.5),
            MeasureKind::Tabulated { boundary_order, .. } => {
                boundary_order.ok_or(Error::ClassificationRequired("boundary_order"))
            }
        }
    }

    /// Least-squares slope of `ln w` against `ln(t−M)` close to `M`.
    ///
    /// Tabulated measures are probed on their own nodes; the analytic
    /// families on a log mesh `s/M ∈ [1e-6, 1e-4]`.
    pub fn probe_boundary_order(&self) -> Option<f64> {
        let points: Vec<(f64, f64)> = match &self.kind {
            MeasureKind::Tabulated { nodes, .. } => return probe_table(nodes),
            _ => (0..8)
                .map(|i| {
                    let s = self.lower_bound * 10f64.powf(-6.0 + 2.0 * f64::from(i) / 7.0);
                    (s, self.density_at_offset(s))
                })
                .collect(),
        };
        loglog_slope(&points)
    }

    /// Characteristic width used to place the tail map.
    pub fn natural_scale(&self) -> f64 {
        match &self.kind {
            MeasureKind::BesselCircle { k, lambda } => {
                let kk = f64::from(k.unsigned_abs());
                lambda + kk * kk + 1.0
            }
            MeasureKind::Tabulated { nodes, .. } => {
                let last = nodes[nodes.len() - 1][0];
                (last - self.lower_bound).max(self.lower_bound)
            }
            _ => self.lower_bound,
        }
    }

    fn breakpoints(&self, scale: f64) -> Vec<f64> {
        match &self.kind {
            MeasureKind::Tabulated { nodes, .. } => nodes
                .iter()
                .skip(1)
                .map(|n| n[0] - self.lower_bound)
                .collect(),
            // the circle density oscillates like cos(2√s)
            MeasureKind::BesselCircle { .. } => (1..=CIRCLE_BREAKPOINT_CAP)
                .map(|j| (0.5 * PI * j as f64).powi(2))
                .take_while(|&s| s <= 8.0 * scale)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// `∫ g(s, t) w(t) dt` over `t = M + s ∈ [M, ∞)`, with the tail map
    /// placed at `scale` and stretched for `g = O(t^growth)`.
    pub(crate) fn integrate_offset<G: Fn(f64, f64) -> f64>(
        &self,
        g: G,
        growth: f64,
        scale: f64,
        extra_breakpoints: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        let m = self.lower_bound;
        let integrand = |s: f64| {
            let w = self.density_at_offset(s);
            if w == 0.0 {
                0.0
            } else {
                g(s, m + s) * w
            }
        };
        let mut cuts = self.breakpoints(scale);
        cuts.extend_from_slice(extra_breakpoints);
        // tabulated measures without a declared decay end at their last node
        let decay = self.tail_exponent().unwrap_or(f64::INFINITY) - growth;
        integrate_half_line_stretched(integrand, scale, tail_stretch(decay), &cuts, cfg)
            .map(|e| e.value)
    }

    /// `∫_M^∞ f(t) w(t) dt` for bounded `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, cfg: &QuadratureConfig) -> Result<f64> {
        self.integrate_offset(|_, t| f(t), 0.0, self.natural_scale(), &[], cfg)
    }

    /// Like [`integrate`](Self::integrate) for `f(t) = O(t^growth)`;
    /// divergence is decided from the tail exponent before any quadrature.
    pub fn integrate_growing<F: Fn(f64) -> f64>(
        &self,
        f: F,
        growth: f64,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        let decay = self.tail_exponent()?;
        if decay - growth <= 1.0 {
            return Err(Error::Divergent { growth, decay });
        }
        self.integrate_offset(|_, t| f(t), growth.max(0.0), self.natural_scale(), &[], cfg)
    }

    pub fn total_mass(&self, cfg: &QuadratureConfig) -> Result<f64> {
        self.integrate(|_| 1.0, cfg)
    }

    /// `∫ t dν`, infinite exactly when the tail exponent is at most 2.
    pub fn first_moment(&self, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
        if self.tail_exponent()? <= 2.0 {
            return Ok(ExtendedReal::PosInf);
        }
        self.integrate_growing(|t| t, 1.0, cfg)
            .map(ExtendedReal::Finite)
    }

    /// `∫ t/(t−M) dν`, finite exactly when the boundary order is positive.
    pub fn boundary_moment(&self, cfg: &QuadratureConfig) -> Result<ExtendedReal> {
        if self.boundary_order()? <= 0.0 {
            return Ok(ExtendedReal::PosInf);
        }
        self.integrate_offset(
            |s, t| t / s,
            0.0,
            self.natural_scale(),
            &decades(1e-8 * self.natural_scale(), self.natural_scale()),
            cfg,
        )
        .map(ExtendedReal::Finite)
    }
}

/// Breakpoints `lo·10^j` up to `hi`, so that the initial partition sees
/// every scale of a multi-decade integrand.
pub(crate) fn decades(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(lo > 0.0 && hi.is_finite()) {
        return out;
    }
    let mut s = lo;
    while s < hi && out.len() < 400 {
        out.push(s);
        s *= 10.0;
    }
    out.push(hi);
    out
}

fn validate_table(
    nodes: &[[f64; 2]],
    decay: Option<f64>,
    boundary_order: Option<f64>,
) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::InvalidMeasure(
            "tabulated measure needs at least two nodes".into(),
        ));
    }
    if !(nodes[0][0] > 0.0) {
        return Err(Error::InvalidMeasure(format!(
            "first node (the threshold M) must be positive, got {}",
            nodes[0][0]
        )));
    }
    for pair in nodes.windows(2) {
        if !(pair[1][0] > pair[0][0]) {
            return Err(Error::InvalidMeasure(
                "node abscissae must be strictly increasing".into(),
            ));
        }
    }
    for n in nodes {
        if !(n[0].is_finite() && n[1].is_finite() && n[1] >= 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "node ({}, {}) must be finite with nonnegative weight",
                n[0], n[1]
            )));
        }
    }
    if let Some(p) = decay {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "declared decay must exceed 1 for finite mass, got {p}"
            )));
        }
    }
    if let Some(order) = boundary_order {
        if !(order >= 0.0 && order.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "boundary_order must be >= 0, got {order}"
            )));
        }
        match probe_table(nodes) {
            Some(probed) if (probed - order).abs() <= BOUNDARY_ORDER_PROBE_TOLERANCE => {}
            Some(probed) => {
                return Err(Error::InvalidMeasure(format!(
                    "declared boundary_order {order} disagrees with the nodes (probe gives {probed:.3})"
                )))
            }
            None => {
                return Err(Error::InvalidMeasure(
                    "boundary_order cannot be probed: no positive weights near M".into(),
                ))
            }
        }
    }
    Ok(())
}

fn tabulated_density(nodes: &[[f64; 2]], decay: Option<f64>, t: f64) -> f64 {
    let last = nodes[nodes.len() - 1];
    if t >= last[0] {
        return match decay {
            Some(p) if t > last[0] => last[1] * (last[0] / t).powf(p),
            _ if t == last[0] => last[1],
            _ => 0.0,
        };
    }
    let i = nodes.partition_point(|n| n[0] <= t).max(1) - 1;
    let [t0, w0] = nodes[i];
    let [t1, w1] = nodes[i + 1];
    w0 + (w1 - w0) * (t - t0) / (t1 - t0)
}

fn probe_table(nodes: &[[f64; 2]]) -> Option<f64> {
    let m = nodes[0][0];
    if nodes[0][1] > 0.0 {
        return Some(0.0);
    }
    let points: Vec<(f64, f64)> = nodes
        .iter()
        .skip(1)
        .filter(|n| n[1] > 0.0)
        .take(4)
        .map(|n| (n[0] - m, n[1]))
        .collect();
    if points.len() == 1 {
        return None;
    }
    loglog_slope(&points)
}

fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(s, w)| *s > 0.0 && *w > 0.0)
        .map(|(s, w)| (s.ln(), w.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn inverse_square_mass() {
        // ∫_1^∞ t^{-2} dt = 1
        let m = SpectralMeasure::power_law(1.0, 2.0, 1.0).unwrap();
        assert!((m.total_mass(&cfg()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_integrand_is_rejected_symbolically() {
        let m = SpectralMeasure::power_law(1.0, 2.0, 1.0).unwrap();
        let err = m.integrate_growing(|t| t, 1.0, &cfg()).unwrap_err();
        assert!(matches!(err, Error::Divergent { .. }));
    }

    #[test]
    fn vanishing_density_mass() {
        // ∫_1^∞ (t−1)/t⁴ dt = 1/2 − 1/3 = 1/6
        let m = SpectralMeasure::shifted_power_law(1.0, 4.0, 1.0, 1.0).unwrap();
        assert!((m.total_mass(&cfg()).unwrap() - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn slowly_decaying_moments() {
        let cfg = QuadratureConfig::default();
        // ∫_1^∞ t·t^-2.1 dt = 10
        let m = SpectralMeasure::power_law(1.0, 2.1, 1.0).unwrap();
        let fm = m.first_moment(&cfg).unwrap().finite().unwrap();
        assert!((fm - 10.0).abs() < 1e-8, "{fm}");
        // ∫_1^∞ t^-1.5 dt = 2
        let m = SpectralMeasure::power_law(1.0, 1.5, 1.0).unwrap();
        assert!((m.total_mass(&cfg).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn moments_of_the_test_family() {
        let quartic = SpectralMeasure::power_law(1.0, 4.0, 1.0).unwrap();
        let fm = quartic.first_moment(&cfg()).unwrap().finite().unwrap();
        assert!((fm - 0.5).abs() < 1e-10);
        assert_eq!(
            quartic.boundary_moment(&cfg()).unwrap(),
            ExtendedReal::PosInf
        );

        let square = SpectralMeasure::power_law(1.0, 2.0, 1.0).unwrap();
        assert_eq!(square.first_moment(&cfg()).unwrap(), ExtendedReal::PosInf);

        let shifted = SpectralMeasure::shifted_power_law(1.0, 4.0, 1.0, 1.0).unwrap();
        let bm = shifted.boundary_moment(&cfg()).unwrap().finite().unwrap();
        assert!((bm - 0.5).abs() < 1e-10, "{bm}");
    }

    #[test]
    fn invalid_power_laws() {
        assert!(SpectralMeasure::power_law(1.0, 1.0, 1.0).is_err());
        assert!(SpectralMeasure::power_law(0.0, 2.0, 1.0).is_err());
        assert!(SpectralMeasure::power_law(1.0, 2.0, -1.0).is_err());
        assert!(SpectralMeasure::shifted_power_law(1.0, 2.0, 1.0, 1.5).is_err());
        assert!(SpectralMeasure::slab_channel(0).is_err());
        assert!(SpectralMeasure::bessel_circle(0, 0.0).is_err());
    }

    #[test]
    fn tabulated_without_classification() {
        let m = SpectralMeasure::tabulated(vec![[1.0, 1.0], [2.0, 0.25]], None, None).unwrap();
        assert_eq!(
            m.first_moment(&cfg()).unwrap_err(),
            Error::ClassificationRequired("decay")
        );
        assert_eq!(
            m.boundary_moment(&cfg()).unwrap_err(),
            Error::ClassificationRequired("boundary_order")
        );
        // trapezoid of the linear interpolant, zero beyond the last node
        assert!((m.total_mass(&cfg()).unwrap() - 0.625).abs() < 1e-12);
    }

    #[test]
    fn tabulated_tail_and_probe() {
        let mut nodes: Vec<[f64; 2]> = vec![[1.0, 0.0]];
        nodes.extend((0..40).map(|i| {
            let t = 1.0 + 1e-4 * 1.4f64.powi(i);
            [t, (t - 1.0).sqrt() / (t * t * t)]
        }));
        let m = SpectralMeasure::tabulated(nodes.clone(), Some(2.5), Some(0.5)).unwrap();
        let probe = m.probe_boundary_order().unwrap();
        assert!(
            (probe - 0.5).abs() < BOUNDARY_ORDER_PROBE_TOLERANCE,
            "{probe}"
        );
        let last = nodes[40];
        assert!((m.density(2.0 * last[0]) - last[1] * 0.5f64.powf(2.5)).abs() < 1e-15);
        assert!(SpectralMeasure::tabulated(nodes, Some(2.5), Some(2.0)).is_err());
    }

    #[test]
    fn tabulated_rejects_bad_nodes() {
        assert!(SpectralMeasure::tabulated(vec![[1.0, 1.0]], None, None).is_err());
        assert!(SpectralMeasure::tabulated(vec![[1.0, 1.0], [1.0, 2.0]], None, None).is_err());
        assert!(SpectralMeasure::tabulated(vec![[1.0, -1.0], [2.0, 2.0]], None, None).is_err());
        assert!(SpectralMeasure::tabulated(vec![[1.0, 1.0], [2.0, 2.0]], Some(0.5), None).is_err());
    }

    #[test]
    fn declared_boundary_orders_match_probe() {
        let cases = [
            SpectralMeasure::power_law(2.0, 3.0, 1.0).unwrap(),
            SpectralMeasure::shifted_power_law(1.0, 4.0, 1.0, 1.0).unwrap(),
            SpectralMeasure::shifted_power_law(3.0, 3.0, 2.0, 0.3).unwrap(),
            SpectralMeasure::slab_channel(3).unwrap(),
            SpectralMeasure::bessel_circle(0, 1.0).unwrap(),
            SpectralMeasure::bessel_circle(-3, 0.5).unwrap(),
            SpectralMeasure::bessel_circle(8, 4.0).unwrap(),
        ];
        for m in &cases {
            let declared = m.boundary_order().unwrap();
            let probed = m.probe_boundary_order().unwrap();
            assert!(
                (declared - probed).abs() <= BOUNDARY_ORDER_PROBE_TOLERANCE,
                "{:?}: declared {declared}, probe {probed}",
                m.kind()
            );
        }
    }

    #[test]
    fn extended_real_order_and_serde() {
        assert!(ExtendedReal::NegInf < ExtendedReal::Finite(-1e300));
        assert!(ExtendedReal::Finite(3.0) < ExtendedReal::PosInf);
        assert_eq!(-ExtendedReal::PosInf, ExtendedReal::NegInf);
        let json = serde_json::to_string(&[
            ExtendedReal::Finite(0.5),
            ExtendedReal::PosInf,
            ExtendedReal::NegInf,
        ])
        .unwrap();
        assert_eq!(json, r#"[0.5,"+inf","-inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[1], ExtendedReal::PosInf);
    }

    #[test]
    fn measure_json_shapes() {
        let m: SpectralMeasure =
            serde_json::from_str(r#"{"kind":"power_law","M":1,"p":2,"c":1}"#).unwrap();
        assert_eq!(m.lower_bound(), 1.0);
        let s: SpectralMeasure = serde_json::from_str(r#"{"kind":"slab_channel","k":3}"#).unwrap();
        assert_eq!(s.lower_bound(), 9.0);
        let c: SpectralMeasure =
            serde_json::from_str(r#"{"kind":"bessel_circle","k":2,"lambda":0.5}"#).unwrap();
        assert_eq!(c.lower_bound(), 0.5);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"kind":"slab_channel","k":3}"#
        );
        let bad =
            serde_json::from_str::<SpectralMeasure>(r#"{"kind":"power_law","M":1,"p":0.5,"c":1}"#);
        assert!(bad.is_err());
    }
}
