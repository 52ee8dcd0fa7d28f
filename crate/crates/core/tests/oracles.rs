//! Checks against values computed independently of the library: high
//! precision reference tables and direct quadratures of the defining
//! Fourier integrals.

use std::f64::consts::PI;

use krein_spectra::bessel::{bessel_j, bessel_j_integral};
use krein_spectra::measure::SLAB_DENSITY_COEFFICIENT;
use krein_spectra::model_circle::{circle_channel_measure, circle_q, circle_q_kernel};
use krein_spectra::secular::{eval_s, eval_s_spectral};
use krein_spectra::{QuadratureConfig, SpectralMeasure};

mod bessel_table {
    include!("../../../oracle/bessel_ref.rs");
}
mod circle_table {
    include!("../../../oracle/circle_ref.rs");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn bessel_reference_values() {
    for &(n, x, j, int) in bessel_table::BESSEL_REFERENCE {
        let got = bessel_j(n as i32, x);
        let tol = 1e-13 * j.abs().max(1e-2);
        assert!(
            (got - j).abs() <= tol.max(1e-15 * j.abs()) || rel(got, j) < 1e-12,
            "J_{n}({x}) = {got}, want {j}"
        );
        let gi = bessel_j_integral(n, x);
        assert!(
            (gi - int).abs() <= 1e-12 * int.abs().max(1e-2) || rel(gi, int) < 1e-11,
            "int J_{n} to {x} = {gi}, want {int}"
        );
    }
}

#[test]
fn circle_q_reference_values() {
    let cfg = QuadratureConfig::default();
    for &(lambda, k, q) in circle_table::CIRCLE_Q_REFERENCE {
        let spectral = circle_q(k as i32, lambda, &cfg).unwrap();
        let kernel = circle_q_kernel(k as i32, lambda, &cfg).unwrap();
        assert!(
            rel(spectral, q) < 1e-7,
            "lambda={lambda} k={k}: {spectral} vs {q}"
        );
        assert!(
            rel(kernel, q) < 1e-9,
            "lambda={lambda} k={k}: {kernel} vs {q}"
        );
    }
}

/// `J_k(x) = (1/2π) ∫_0^{2π} cos(x sin φ − kφ) dφ` by the trapezoid rule,
/// which is spectrally accurate for periodic integrands.
fn j_by_angle(k: i32, x: f64) -> f64 {
    let n = 256 + 4 * (x.abs() as usize);
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|i| {
            let phi = i as f64 * h;
            (x * phi.sin() - f64::from(k) * phi).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// Composite Gauss–Legendre, 8 nodes per panel.
fn gauss<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_3,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_5,
        0.101_228_536_290_376_3,
    ];
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for i in 0..4 {
            sum += W[i] * half * (f(mid - X[i] * half) + f(mid + X[i] * half));
        }
    }
    sum
}

#[test]
fn circle_fourier_transform_is_a_bessel_function() {
    // |∫_0^{2π} e^{−i p cos φ} e^{ikφ} dφ|² = 4π² J_k(p)²
    for k in 0..6 {
        for &p in &[0.0, 0.3, 1.0, 4.5, 17.0, 40.0] {
            let n = 512;
            let h = 2.0 * PI / n as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..n {
                let phi = i as f64 * h;
                let arg = f64::from(k) * phi - p * phi.cos();
                re += arg.cos() * h;
                im += arg.sin() * h;
            }
            let lhs = re * re + im * im;
            let rhs = 4.0 * PI * PI * bessel_j(k, p).powi(2);
            assert!(
                (lhs - rhs).abs() < 1e-10 * (1.0 + rhs),
                "k={k} p={p}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn circle_density_from_angular_shell() {
    // w_k(t) = p/(2t²) ∫_0^π J_k(p sin θ)² sin θ dθ with p = √(t−λ), J from
    // the angle integral above.
    let lambda = 1.0;
    for k in [0, 1, 3, 5] {
        let m = circle_channel_measure(k, lambda).unwrap();
        for &t in &[1.0001, 1.3, 2.0, 10.0, 101.0, 900.0] {
            let p = (t - lambda).sqrt();
            let shell = gauss(
                |th| j_by_angle(k, p * th.sin()).powi(2) * th.sin(),
                0.0,
                PI,
                64,
            );
            let want = p / (2.0 * t * t) * shell;
            let got = m.density(t);
            // the angle-integral J carries an absolute error near 1e-16
            let tol = 1e-10 * want + p / (2.0 * t * t) * 1e-14 * shell.sqrt();
            assert!((got - want).abs() <= tol, "k={k} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn circle_density_tail_is_inverse_square() {
    let m = circle_channel_measure(2, 1.0).unwrap();
    // average out the oscillation over a period in √t before fitting
    let avg = |t: f64| {
        let p = (t - 1.0_f64).sqrt();
        gauss(
            |q| m.density(1.0 + q * q) * (1.0 + q * q).powi(2),
            p,
            p + 2.0 * PI,
            16,
        ) / (2.0 * PI)
            / (t * t)
    };
    let (t1, t2) = (1e4, 1e6);
    let slope = (avg(t2).ln() - avg(t1).ln()) / (t2.ln() - t1.ln());
    assert!((slope + 2.0).abs() < 0.01, "slope {slope}");
}

/// Mass of the slab channel measure in `t1 ≤ p² + k² ≤ t2`, as a cartesian
/// integral over `p = (p1, p2)` of the squared Fourier density of the
/// channel vector.
///
/// The channel vector is `(1/2π³) ∫ dp e^{ipx}/(p² + k²) · sin(k x₁)` on the
/// slab of width π. Plancherel in `x̄` gives `(2π)²·(1/2π³)²`, the `sin`
/// factor gives `π/2`, and the Fourier normalization `(2π)⁻²` makes the
/// density in `p` equal `N/(p² + k²)²` with `N = 1/(2π³)`.
fn slab_shell_mass(k: u32, t1: f64, t2: f64) -> f64 {
    let n = 1.0 / (2.0 * PI.powi(3));
    let k2 = f64::from(k * k);
    let r2 = (t2 - k2).sqrt();
    let r1 = (t1 - k2).max(0.0).sqrt();
    // for each p1, p2 ranges over the part of the annulus above the axis
    let column = |p1: f64| {
        let hi = (r2 * r2 - p1 * p1).max(0.0).sqrt();
        let lo = (r1 * r1 - p1 * p1).max(0.0).sqrt();
        2.0 * gauss(|p2| n / (p1 * p1 + p2 * p2 + k2).powi(2), lo, hi, 8)
    };
    // p1 = r1 sin v inside the hole and p1 = r2 sin u outside it remove the
    // square-root endpoints of the column limits
    let inner = |v: f64| column(r1 * v.sin()) * r1 * v.cos();
    let outer = |u: f64| column(r2 * u.sin()) * r2 * u.cos();
    let u1 = (r1 / r2).asin();
    2.0 * (gauss(inner, 0.0, PI / 2.0, 100) + gauss(outer, u1, PI / 2.0, 100))
}

#[test]
fn slab_constant_from_cartesian_quadrature() {
    let c = SLAB_DENSITY_COEFFICIENT;
    for k in [1, 2, 5] {
        let k2 = f64::from(k * k);
        let mut points = Vec::new();
        for i in 0..12 {
            let t1 = k2 * 1.6f64.powi(i);
            let t2 = t1 * 1.6;
            let mass = slab_shell_mass(k, t1, t2);
            let want = c * (1.0 / t1 - 1.0 / t2);
            assert!(
                rel(mass, want) < 1e-8,
                "k={k} shell [{t1}, {t2}]: {mass} vs {want}"
            );
            points.push((((t1 * t2).sqrt()).ln(), (mass / (t2 - t1)).ln()));
        }
        let n = points.len() as f64;
        let (sx, sy) = points
            .iter()
            .fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        assert!((num / den + 2.0).abs() < 0.01, "k={k}: slope {}", num / den);
    }
    let m = SpectralMeasure::slab_channel(3).unwrap();
    assert!(rel(m.density(20.0), c / 400.0) < 1e-15);
}

#[test]
fn circle_secular_routes_agree() {
    let cfg = QuadratureConfig::default();
    // the spectral side integrates an oscillating density whose error
    // estimate levels off near 1e-11; ask it for what it can deliver
    let spectral_cfg = QuadratureConfig::with_tolerances(1e-10, 1e-8);
    for k in [0, 1, 3, 6] {
        for lambda in [0.5, 1.0, 4.0] {
            let m = circle_channel_measure(k, lambda).unwrap();
            for frac in [-3.0, -0.5, 0.3, 0.9, 0.999] {
                let e = frac * lambda;
                let kernel = eval_s(&m, e, &cfg).unwrap();
                let spectral = eval_s_spectral(&m, e, &spectral_cfg).unwrap();
                assert!(
                    (kernel - spectral).abs() <= 1e-8 * kernel.abs().max(1e-3),
                    "k={k} lambda={lambda} E={e}: {kernel} vs {spectral}"
                );
            }
        }
    }
}
