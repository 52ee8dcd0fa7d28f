//! Channel families: case classification, point spectrum, eigenvalue counts
//! and the embedded/discrete split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::measure::{ExtendedReal, SpectralMeasure};
use crate::quadrature::QuadratureConfig;
use crate::secular::{
    admissible_window, eval_s_unguarded, resolvent_inner_product, solve_in_window, SecularWindow,
    SolverConfig,
};

/// Two eigenvalues from different channels are the same point when they
/// differ by at most this much relative to `max(1, |E|)`.
pub const MULTIPLICITY_TOLERANCE: f64 = 1e-9;

/// Number of mesh points used by [`eigen_identity_residual`].
const IDENTITY_MESH: usize = 257;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::Case1 => 1,
            Case::Case2 => 2,
            Case::Case3 => 3,
            Case::Case4 => 4,
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Case{}", self.number())
    }
}

/// Finiteness pattern of the window ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: Case,
    /// `s(−∞)` is finite.
    pub e_in_h1: bool,
    /// `s(M)` is finite.
    pub boundary_finite: bool,
}

impl CaseTag {
    pub fn from_flags(e_in_h1: bool, boundary_finite: bool) -> Self {
        let case = match (e_in_h1, boundary_finite) {
            (false, false) => Case::Case1,
            (false, true) => Case::Case2,
            (true, false) => Case::Case3,
            (true, true) => Case::Case4,
        };
        Self {
            case,
            e_in_h1,
            boundary_finite,
        }
    }

    pub fn from_window(w: &SecularWindow) -> Self {
        Self::from_flags(w.lo.is_finite(), w.hi.is_finite())
    }

    /// Cases 1 and 2.
    pub fn strongly_singular(&self) -> bool {
        !self.e_in_h1
    }
}

/// One channel as given by the user: index, measure and coupling `b ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub k: i64,
    pub measure: SpectralMeasure,
    pub b: f64,
}

impl ChannelSpec {
    pub fn new(k: i64, measure: SpectralMeasure, b: f64) -> Result<Self> {
        if b == 0.0 || !b.is_finite() {
            return Err(Error::InvalidCoupling);
        }
        Ok(Self { k, measure, b })
    }

    /// Computes the window and returns the full channel.
    pub fn resolve(&self, cfg: &QuadratureConfig) -> Result<Channel> {
        if self.b == 0.0 || !self.b.is_finite() {
            return Err(Error::InvalidCoupling);
        }
        let window = admissible_window(&self.measure, cfg)?;
        Ok(Channel {
            index: self.k,
            measure: self.measure.clone(),
            coupling: self.b,
            window,
        })
    }
}

/// A channel with its admissibility window cached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    pub index: i64,
    pub measure: SpectralMeasure,
    pub coupling: f64,
    pub window: SecularWindow,
}

impl Channel {
    pub fn new(
        index: i64,
        measure: SpectralMeasure,
        coupling: f64,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        ChannelSpec::new(index, measure, coupling)?.resolve(cfg)
    }

    pub fn threshold(&self) -> f64 {
        self.measure.lower_bound()
    }
}

pub fn classify_channel(ch: &Channel) -> CaseTag {
    CaseTag::from_window(&ch.window)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub lambda: f64,
    pub channels: Vec<ChannelSpec>,
    #[serde(rename = "sigma_hat")]
    pub sigma_hat_assumed: bool,
}

impl PerturbationSpec {
    pub fn new(lambda: f64, channels: Vec<ChannelSpec>, sigma_hat_assumed: bool) -> Result<Self> {
        let spec = Self {
            lambda,
            channels,
            sigma_hat_assumed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for ch in &self.channels {
            if !seen.insert(ch.k) {
                return Err(Error::InvalidSpec(format!(
                    "channel index {} repeated",
                    ch.k
                )));
            }
            if ch.b == 0.0 || !ch.b.is_finite() {
                return Err(Error::InvalidCoupling);
            }
            let m = ch.measure.lower_bound();
            if self.lambda > m {
                return Err(Error::InvalidSpec(format!(
                    "lambda = {} exceeds the threshold M = {m} of channel {}",
                    self.lambda, ch.k
                )));
            }
        }
        Ok(())
    }
}

/// `f̂ = ê·[resolvent_weight/(t−E) + direct_weight]` for
/// `f = Ã⁻¹ U_{E0} e`, together with `(g, e)` for `g = U_{E0} e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigvecCoefficients {
    pub resolvent_weight: f64,
    /// `b⁻¹(g, e)`, equal to `1/E` at an exact root.
    pub direct_weight: f64,
    pub inner_product: f64,
    /// `|(g, e) − s(E)/E|`, when the quadrature for `(g, e)` converged.
    pub inner_product_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub k: i64,
    #[serde(rename = "E")]
    pub energy: f64,
    /// `|s(E) − b|`.
    pub residual: f64,
    pub identity_residual: f64,
    pub embedded: bool,
    pub near_boundary: bool,
    #[serde(rename = "M")]
    pub threshold: f64,
    pub eigvec: EigvecCoefficients,
}

/// What one channel produced: its case and window, and the root if `b` is
/// admissible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSolution {
    pub tag: CaseTag,
    pub window: SecularWindow,
    pub record: Option<EigenRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutcome {
    pub k: i64,
    pub b: f64,
    pub threshold: f64,
    pub result: Result<ChannelSolution>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSpectrum {
    pub records: Vec<EigenRecord>,
    pub failures: Vec<(i64, Error)>,
}

/// Resolves and solves every channel independently, in channel order.
/// Failures stay attached to their channel.
pub fn solve_channels(
    spec: &PerturbationSpec,
    cfg: &SolverConfig,
    exec: Execution,
) -> Vec<ChannelOutcome> {
    map_ordered(&spec.channels, exec, |ch| ChannelOutcome {
        k: ch.k,
        b: ch.b,
        threshold: ch.measure.lower_bound(),
        result: solve_channel(ch, spec.lambda, cfg),
    })
}

fn solve_channel(spec: &ChannelSpec, lambda: f64, cfg: &SolverConfig) -> Result<ChannelSolution> {
    let ch = spec.resolve(&cfg.quadrature)?;
    let tag = classify_channel(&ch);
    let record = solve_resolved(&ch, lambda, cfg)?;
    Ok(ChannelSolution {
        tag,
        window: ch.window,
        record,
    })
}

/// Root and eigenvector data for one resolved channel.
pub fn solve_resolved(
    ch: &Channel,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<Option<EigenRecord>> {
    let Some(root) = solve_in_window(&ch.measure, &ch.window, ch.coupling, cfg)? else {
        return Ok(None);
    };
    let e = root.energy;
    let eigvec = eigvec_coefficients(ch, e, &cfg.quadrature)?;
    let identity_residual = identity_residual_with(ch, e, &eigvec);
    Ok(Some(EigenRecord {
        k: ch.index,
        energy: e,
        residual: root.residual,
        identity_residual,
        embedded: e >= lambda,
        near_boundary: root.near_boundary,
        threshold: ch.threshold(),
        eigvec,
    }))
}

/// Eigenvalues of all channels whose coupling lies in the window.
///
/// Refuses to run unless the spec asserts `σ̂`, which the eigenvalue
/// characterization relies on.
pub fn point_spectrum(
    spec: &PerturbationSpec,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<PointSpectrum> {
    require_sigma_hat(spec)?;
    spec.validate()?;
    cfg.validate()?;
    let mut out = PointSpectrum::default();
    for o in solve_channels(spec, cfg, exec) {
        match o.result {
            Ok(sol) => out.records.extend(sol.record),
            Err(e) => out.failures.push((o.k, e)),
        }
    }
    Ok(out)
}

pub fn require_sigma_hat(spec: &PerturbationSpec) -> Result<()> {
    if spec.sigma_hat_assumed {
        Ok(())
    } else {
        Err(Error::InvalidSpec(
            "point spectrum requires sigma_hat = true (range condition on the perturbation)".into(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    pub n_minus: usize,
    pub n_plus: usize,
}

/// Contribution of one coupling by window membership: `(−1, 0, +1)` for a
/// negative root, no root, a positive root.
pub fn window_sign(window: &SecularWindow, b: f64) -> i8 {
    if !window.contains(b) {
        0
    } else if b < 0.0 {
        -1
    } else {
        1
    }
}

/// Contribution of one coupling by the per-case counting formulas, with the
/// closed ends `lo ≤ b` and `b ≤ hi` exactly as they are printed for the
/// finite cases.
pub fn case_formula_sign(tag: &CaseTag, window: &SecularWindow, b: f64) -> i8 {
    let negative_ok = match (tag.case, window.lo) {
        (Case::Case1 | Case::Case2, _) => b < 0.0,
        (_, ExtendedReal::Finite(lo)) => lo <= b && b < 0.0,
        _ => b < 0.0,
    };
    let positive_ok = match (tag.case, window.hi) {
        (Case::Case1 | Case::Case3, _) => b > 0.0,
        (_, ExtendedReal::Finite(hi)) => 0.0 < b && b <= hi,
        _ => b > 0.0,
    };
    if negative_ok {
        -1
    } else if positive_ok {
        1
    } else {
        0
    }
}

fn tally(signs: impl Iterator<Item = i8>) -> Counts {
    let mut c = Counts::default();
    for s in signs {
        match s {
            -1 => c.n_minus += 1,
            1 => c.n_plus += 1,
            _ => {}
        }
    }
    c
}

/// `(N_−, N_+)` by window membership, plus the same counts from the case
/// formulas. Fails on the first channel whose window cannot be computed.
pub fn count_eigenvalues(
    spec: &PerturbationSpec,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<(Counts, Counts)> {
    spec.validate()?;
    let resolved: Vec<Result<Channel>> = map_ordered(&spec.channels, exec, |c| c.resolve(cfg));
    let channels = resolved.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(counts_for(&channels))
}

pub fn counts_for(channels: &[Channel]) -> (Counts, Counts) {
    let by_window = tally(channels.iter().map(|c| window_sign(&c.window, c.coupling)));
    let by_case = tally(
        channels
            .iter()
            .map(|c| case_formula_sign(&classify_channel(c), &c.window, c.coupling)),
    );
    (by_window, by_case)
}

/// `σ_ac = [λ, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcSpectrum {
    pub lo: f64,
    pub hi: ExtendedReal,
}

pub fn ac_spectrum(spec: &PerturbationSpec) -> AcSpectrum {
    AcSpectrum {
        lo: spec.lambda,
        hi: ExtendedReal::PosInf,
    }
}

/// Splits records into discrete (`E < λ`) and embedded (`λ ≤ E < M_k`).
pub fn partition_embedded(
    records: &[EigenRecord],
    lambda: f64,
) -> (Vec<EigenRecord>, Vec<EigenRecord>) {
    records.iter().partition(|r| r.energy < lambda)
}

/// A point eigenvalue and the channels that share it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenGroup {
    #[serde(rename = "E")]
    pub energy: f64,
    pub channels: Vec<i64>,
}

impl EigenGroup {
    pub fn multiplicity(&self) -> usize {
        self.channels.len()
    }
}

/// Groups records whose energies coincide within [`MULTIPLICITY_TOLERANCE`],
/// sorted by energy.
pub fn multiplicities(records: &[EigenRecord]) -> Vec<EigenGroup> {
    let pairs: Vec<(i64, f64)> = records.iter().map(|r| (r.k, r.energy)).collect();
    group_energies(&pairs)
}

/// [`multiplicities`] over bare `(k, E)` pairs.
pub fn group_energies(pairs: &[(i64, f64)]) -> Vec<EigenGroup> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut groups: Vec<EigenGroup> = Vec::new();
    for (k, e) in sorted {
        if let Some(g) = groups.last_mut() {
            let tol = MULTIPLICITY_TOLERANCE * g.energy.abs().max(1.0);
            if (e - g.energy).abs() <= tol {
                g.channels.push(k);
                continue;
            }
        }
        groups.push(EigenGroup {
            energy: e,
            channels: vec![k],
        });
    }
    groups
}

/// Eigenvector coefficients at `E` for the channel.
///
/// `(g, e)` comes from quadrature against the spectral measure. When that
/// does not converge (circle channels far below the threshold, where the
/// density oscillates over many decades) it falls back to `s(E)/E` and the
/// gap is left empty.
pub fn eigvec_coefficients(
    ch: &Channel,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<EigvecCoefficients> {
    let s = eval_s_unguarded(&ch.measure, energy, cfg)?;
    let via_s = if energy == 0.0 { f64::NAN } else { s / energy };
    let (inner, gap) = match resolvent_inner_product(&ch.measure, energy, cfg) {
        Ok(v) => (v, (energy != 0.0).then(|| (v - via_s).abs())),
        Err(Error::Quadrature { .. }) if energy != 0.0 => (via_s, None),
        Err(e) => return Err(e),
    };
    Ok(EigvecCoefficients {
        resolvent_weight: 1.0,
        direct_weight: inner / ch.coupling,
        inner_product: inner,
        inner_product_gap: gap,
    })
}

/// Result of [`eigen_identity_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub residual: f64,
    pub inner_product_gap: Option<f64>,
}

/// Checks `(U_{0E} − E B̃⁻¹) g = 0` in the channel's spectral
/// representation: the maximum over `t ∈ [M, M+T]` of
/// `|ĝ/t + b⁻¹(g,e) ê − ĝ/E|`, relative to `max |ĝ|/|E|`, where
/// `ĝ = t ê/(t−E)` and `ê = √w`.
pub fn eigen_identity_residual(
    ch: &Channel,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<IdentityCheck> {
    if energy == 0.0 {
        return Err(Error::InvalidParameter(
            "eigen identity needs E != 0".into(),
        ));
    }
    let coeffs = eigvec_coefficients(ch, energy, cfg)?;
    Ok(IdentityCheck {
        residual: identity_residual_with(ch, energy, &coeffs),
        inner_product_gap: coeffs.inner_product_gap,
    })
}

fn identity_residual_with(ch: &Channel, energy: f64, coeffs: &EigvecCoefficients) -> f64 {
    let m = ch.threshold();
    let span = 10.0 * ch.measure.natural_scale();
    let mut worst: f64 = 0.0;
    let mut g_max: f64 = 0.0;
    for i in 0..IDENTITY_MESH {
        // quadratic spacing puts more points next to the threshold
        let u = i as f64 / (IDENTITY_MESH - 1) as f64;
        let s = span * u * u;
        let t = m + s;
        let e_hat = ch.measure.density_at_offset(s).sqrt();
        let g_hat = t * e_hat / (s + (m - energy));
        let r = (g_hat / t + coeffs.direct_weight * e_hat - g_hat / energy).abs();
        worst = worst.max(r);
        g_max = g_max.max(g_hat.abs());
    }
    if g_max == 0.0 {
        return 0.0;
    }
    worst / (g_max / energy.abs())
}
