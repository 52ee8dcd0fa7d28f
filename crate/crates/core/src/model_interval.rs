//! The slab `Ω = (0, π) × ℝ²` with the perturbation `α(−∂²/∂x₁²)δ(x̄)`.
//!
//! Channel `k ≥ 1` is `sin(kx₁)` times the planar Green's function; its
//! spectral measure is `c/t²` on `[k², ∞)` with `c = 1/(2π²)`, so
//! `s_k(E) = c·ln(k²/(k²−E))` and the eigenvalues have the closed form
//! `E_k = k²(1 − exp(−b_k/c))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorNote, Result};
use crate::exec::{map_ordered, Execution};
use crate::measure::{ExtendedReal, SpectralMeasure, SLAB_DENSITY_COEFFICIENT};
use crate::perturbation::{
    classify_channel, solve_resolved, Case, Channel, ChannelSpec, EigvecCoefficients,
    PerturbationSpec,
};
use crate::quadrature::QuadratureConfig;
use crate::secular::{resolvent_inner_product, SolverConfig};

/// Euler–Mascheroni constant.
pub const EULER_C: f64 = 0.577_215_664_901_532_9;

pub const SLAB_LAMBDA: f64 = 1.0;

pub const DEFAULT_SLAB_KMAX: u32 = 64;

/// Notes attached to every slab report.
pub const SLAB_NOTES: &[&str] = &[
    "closed form uses the channel constant c_k = 1/(2 pi^2) for every k: E_k = k^2 (1 - exp(-2 pi^2 b_k)); the forms k^2 (1 - exp(-2 b_k)) and k^2 (1 - exp(-b_k)) do not match the channel measure and are not reproduced",
    "log argument is k^2/(k^2 - E), independent of alpha",
    "alpha -> -inf limit is E_k -> k^2 - 4 exp(2C), not k^2 (1 - e^C (2/k)^(8 pi^2))",
    "sign of s_k is evaluated directly: s_k > 0 for k <= 3 and s_k < 0 for k >= 4 (boundary 2 e^C = 3.56), the reverse of the claim s_k < 0 iff k <= 3",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabParams {
    pub alpha: f64,
    pub k_max: u32,
}

impl SlabParams {
    pub fn new(alpha: f64, k_max: u32) -> Result<Self> {
        check_alpha(alpha)?;
        if k_max < 1 {
            return Err(Error::InvalidParameter("k_max must be at least 1".into()));
        }
        Ok(Self { alpha, k_max })
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite and nonzero, got {alpha}"
        )));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(
            "slab channels start at k = 1".into(),
        ));
    }
    Ok(())
}

/// `s_k = π⁻²(−ln(k/2) + C)`.
pub fn slab_s_k(k: u32) -> f64 {
    (EULER_C - (f64::from(k) / 2.0).ln()) / (std::f64::consts::PI * std::f64::consts::PI)
}

pub fn slab_channel_measure(k: u32) -> Result<SpectralMeasure> {
    check_k(k)?;
    SpectralMeasure::slab_channel(k)
}

/// `b_k = −(1 + αk²s_k)/(αk²)`.
pub fn slab_coupling(k: u32, alpha: f64) -> Result<f64> {
    check_k(k)?;
    check_alpha(alpha)?;
    let k2 = f64::from(k) * f64::from(k);
    let ak2 = alpha * k2;
    let denom = 1.0 + ak2 * slab_s_k(k);
    if denom.abs() <= 4.0 * f64::EPSILON * ak2.abs().max(1.0) {
        return Err(Error::DegenerateCoupling(format!(
            "1 + alpha k^2 s_k = 0 at k = {k}, alpha = {alpha}"
        )));
    }
    Ok(-denom / ak2)
}

/// `s_k(E) = c·ln(k²/(k²−E))` for `E < k²`.
pub fn slab_secular_closed_form(k: u32, energy: f64) -> f64 {
    let k2 = f64::from(k) * f64::from(k);
    // ln(k²/(k²−E)) = −ln(1 − E/k²)
    -SLAB_DENSITY_COEFFICIENT * (-energy / k2).ln_1p()
}

/// Eigenvalue of channel `k` from the closed form. The window of a `t⁻²`
/// density is all of `ℝ∖{0}`, so there is a root for every admissible
/// coupling.
pub fn slab_eigenvalue_closed_form(k: u32, alpha: f64) -> Result<Option<f64>> {
    let b = slab_coupling(k, alpha)?;
    energy_from_coupling(k, b).map(Some)
}

/// `E = −k²·expm1(−b/c)`.
pub fn energy_from_coupling(k: u32, b: f64) -> Result<f64> {
    let k2 = f64::from(k) * f64::from(k);
    let e = -k2 * (-b / SLAB_DENSITY_COEFFICIENT).exp_m1();
    if !e.is_finite() {
        return Err(Error::Unrepresentable(format!(
            "E_k underflows to -inf for k = {k}, b = {b}"
        )));
    }
    Ok(e)
}

/// `lim_{α→−∞} E_k = k²(1 − exp(s_k/c)) = k² − 4e^{2C}`.
pub fn slab_alpha_limit(k: u32) -> f64 {
    let k2 = f64::from(k) * f64::from(k);
    -k2 * (slab_s_k(k) / SLAB_DENSITY_COEFFICIENT).exp_m1()
}

/// Per-channel derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabChannelDerived {
    pub k: u32,
    pub s_k: f64,
    pub b_k: f64,
    pub c_k: f64,
    #[serde(rename = "M")]
    pub threshold: f64,
}

pub fn slab_channel_derived(k: u32, alpha: f64) -> Result<SlabChannelDerived> {
    Ok(SlabChannelDerived {
        k,
        s_k: slab_s_k(k),
        b_k: slab_coupling(k, alpha)?,
        c_k: SLAB_DENSITY_COEFFICIENT,
        threshold: f64::from(k) * f64::from(k),
    })
}

/// An open interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && self.hi > x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignRow {
    pub k: u32,
    pub s_k: f64,
    pub b_k: f64,
    /// Sign of `E_k` at the table's α.
    pub sign: i8,
    /// The α set on which `E_k > 0`, as a union of open intervals.
    pub positive_alpha: Vec<Interval>,
}

/// Sign of `E_k` for `k = 1..=k_max` at the given `α`, and the α set on
/// which `E_k > 0`: `(−1/(k²s_k), 0)` when `s_k > 0`; `(−∞, 0) ∪
/// (−1/(k²s_k), ∞)` when `s_k < 0`.
pub fn slab_sign_table(alpha: f64, k_max: u32) -> Result<Vec<SignRow>> {
    let params = SlabParams::new(alpha, k_max)?;
    (1..=params.k_max)
        .map(|k| {
            let s = slab_s_k(k);
            let k2 = f64::from(k) * f64::from(k);
            let b = match slab_coupling(k, alpha) {
                Ok(b) => b,
                Err(Error::DegenerateCoupling(_)) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            let edge = -1.0 / (k2 * s);
            let positive_alpha = if s > 0.0 {
                vec![Interval {
                    lo: ExtendedReal::Finite(edge),
                    hi: ExtendedReal::Finite(0.0),
                }]
            } else if s < 0.0 {
                vec![
                    Interval {
                        lo: ExtendedReal::NegInf,
                        hi: ExtendedReal::Finite(0.0),
                    },
                    Interval {
                        lo: ExtendedReal::Finite(edge),
                        hi: ExtendedReal::PosInf,
                    },
                ]
            } else {
                vec![Interval {
                    lo: ExtendedReal::NegInf,
                    hi: ExtendedReal::Finite(0.0),
                }]
            };
            Ok(SignRow {
                k,
                s_k: s,
                b_k: b,
                sign: if b > 0.0 { 1 } else { -1 },
                positive_alpha,
            })
        })
        .collect()
}

/// Smallest `k` with `s_k < 0`.
pub fn slab_sign_boundary() -> u32 {
    (1..).find(|&k| slab_s_k(k) < 0.0).unwrap_or(u32::MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedThreshold {
    /// Smallest `k ≤ k_max` with `E_k ≥ λ = 1`.
    pub k: Option<u32>,
    /// `E_{k+1} > E_k` for every `k` from the threshold up to `k_max`.
    pub increasing_beyond: bool,
}

pub fn slab_embedded_threshold(alpha: f64, k_max: u32) -> Result<EmbeddedThreshold> {
    let params = SlabParams::new(alpha, k_max)?;
    let mut energies = Vec::with_capacity(params.k_max as usize);
    for k in 1..=params.k_max {
        energies.push(match slab_eigenvalue_closed_form(k, alpha) {
            Ok(e) => e,
            Err(Error::DegenerateCoupling(_)) | Err(Error::Unrepresentable(_)) => None,
            Err(e) => return Err(e),
        });
    }
    let k = energies
        .iter()
        .position(|e| e.is_some_and(|e| e >= SLAB_LAMBDA))
        .map(|i| i as u32 + 1);
    let increasing_beyond = match k {
        None => false,
        Some(k0) => energies[k0 as usize - 1..]
            .windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b > a)),
    };
    Ok(EmbeddedThreshold {
        k,
        increasing_beyond,
    })
}

/// `(g, e_k) = s_k(E)/E = c·ln(k²/(k²−E))/E`, with the limit `c/k²` at 0.
pub fn slab_inner_product_closed_form(k: u32, energy: f64) -> f64 {
    let k2 = f64::from(k) * f64::from(k);
    if energy == 0.0 {
        return SLAB_DENSITY_COEFFICIENT / k2;
    }
    slab_secular_closed_form(k, energy) / energy
}

/// Eigenvector coefficients of channel `k` at a root `E`: resolvent weight
/// 1 and direct weight `b⁻¹(g, e) = 1/E`. `inner_product_gap` compares the
/// closed form of `(g, e)` with quadrature.
pub fn slab_eigvec(k: u32, energy: f64, cfg: &QuadratureConfig) -> Result<EigvecCoefficients> {
    check_k(k)?;
    if energy == 0.0 {
        return Err(Error::InvalidParameter("eigenvalues are nonzero".into()));
    }
    let m = slab_channel_measure(k)?;
    let closed = slab_inner_product_closed_form(k, energy);
    let quad = resolvent_inner_product(&m, energy, cfg)?;
    Ok(EigvecCoefficients {
        resolvent_weight: 1.0,
        direct_weight: 1.0 / energy,
        inner_product: closed,
        inner_product_gap: Some((closed - quad).abs()),
    })
}

/// Channels `1..=k_max` with their couplings, `λ = 1`, `σ̂` asserted.
pub fn slab_spec(alpha: f64, k_max: u32) -> Result<PerturbationSpec> {
    let params = SlabParams::new(alpha, k_max)?;
    let channels = (1..=params.k_max)
        .map(|k| {
            ChannelSpec::new(
                i64::from(k),
                slab_channel_measure(k)?,
                slab_coupling(k, alpha)?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PerturbationSpec::new(SLAB_LAMBDA, channels, true)
}

/// One line of the slab table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlabRow {
    pub k: u32,
    pub s_k: f64,
    pub b_k: f64,
    pub e_closed: Option<f64>,
    pub e_solver: Option<f64>,
    /// `|E_closed − E_solver| / max(1, |E_closed|)`.
    pub rel_diff: Option<f64>,
    pub sign: i8,
    pub embedded: bool,
    pub case: Case,
    pub residual: Option<f64>,
    pub identity_residual: Option<f64>,
    pub near_boundary: bool,
    pub error: Option<ErrorNote>,
}

fn slab_row(k: u32, alpha: f64, cfg: &SolverConfig) -> SlabRow {
    let s_k = slab_s_k(k);
    let mut row = SlabRow {
        k,
        s_k,
        b_k: f64::NAN,
        e_closed: None,
        e_solver: None,
        rel_diff: None,
        sign: 0,
        embedded: false,
        case: Case::Case1,
        residual: None,
        identity_residual: None,
        near_boundary: false,
        error: None,
    };
    let b = match slab_coupling(k, alpha) {
        Ok(b) => b,
        Err(e) => {
            row.error = Some(e.into());
            return row;
        }
    };
    row.b_k = b;
    row.sign = if b > 0.0 { 1 } else { -1 };
    match energy_from_coupling(k, b) {
        Ok(e) => {
            row.e_closed = Some(e);
            row.embedded = e >= SLAB_LAMBDA;
        }
        Err(e) => row.error = Some(e.into()),
    }
    let solved = slab_channel_measure(k)
        .and_then(|m| Channel::new(i64::from(k), m, b, &cfg.quadrature))
        .and_then(|ch| {
            row.case = classify_channel(&ch).case;
            solve_resolved(&ch, SLAB_LAMBDA, cfg)
        });
    match solved {
        Ok(Some(rec)) => {
            row.e_solver = Some(rec.energy);
            row.residual = Some(rec.residual);
            row.identity_residual = Some(rec.identity_residual);
            row.near_boundary = rec.near_boundary;
            if let Some(c) = row.e_closed {
                row.rel_diff = Some((c - rec.energy).abs() / c.abs().max(1.0));
            }
        }
        Ok(None) => {}
        Err(e) => {
            row.error.get_or_insert_with(|| e.into());
        }
    }
    row
}

/// Closed form and generic solver side by side for `k = 1..=k_max`.
pub fn slab_rows(
    alpha: f64,
    k_max: u32,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<Vec<SlabRow>> {
    let params = SlabParams::new(alpha, k_max)?;
    cfg.validate()?;
    let ks: Vec<u32> = (1..=params.k_max).collect();
    Ok(map_ordered(&ks, exec, |&k| slab_row(k, alpha, cfg)))
}
