use proptest::prelude::*;

use krein_spectra::exec::Execution;
use krein_spectra::model_circle::{circle_channel_measure, circle_coupling, circle_q};
use krein_spectra::model_interval::{
    slab_channel_measure, slab_coupling, slab_eigenvalue_closed_form,
};
use krein_spectra::perturbation::{
    classify_channel, counts_for, point_spectrum, Case, Channel, ChannelSpec, PerturbationSpec,
};
use krein_spectra::report::{build_report, Command, InputSpec};
use krein_spectra::secular::{
    admissible_window, boundary_guard, eval_s, resolvent_inner_product, s_at_minus_infinity,
    solve_secular,
};
use krein_spectra::{ExtendedReal, QuadratureConfig, SolverConfig, SpectralMeasure};

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6b72_6569_6e),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// Measures covering all four window patterns.
fn any_measure() -> impl Strategy<Value = SpectralMeasure> {
    prop_oneof![
        // Case 1
        (0.5..10.0f64, 1.5..2.0f64, 0.1..3.0f64)
            .prop_map(|(m, p, c)| SpectralMeasure::power_law(m, p, c).unwrap()),
        (1u32..12).prop_map(|k| SpectralMeasure::slab_channel(k).unwrap()),
        // Case 2
        (0.5..10.0f64, 0.3..1.0f64, 1.2..2.0f64, 0.1..3.0f64).prop_map(|(m, a, extra, c)| {
            SpectralMeasure::shifted_power_law(m, a + extra, c, a).unwrap()
        }),
        (0i32..6, 0.5..4.0f64).prop_map(|(k, l)| circle_channel_measure(k, l).unwrap()),
        // Case 3
        (0.5..10.0f64, 2.1..5.0f64, 0.1..3.0f64)
            .prop_map(|(m, p, c)| SpectralMeasure::power_law(m, p, c).unwrap()),
        // Case 4
        (0.5..10.0f64, 0.3..1.5f64, 2.2..4.0f64, 0.1..3.0f64).prop_map(|(m, a, extra, c)| {
            SpectralMeasure::shifted_power_law(m, a + extra, c, a).unwrap()
        }),
    ]
}

/// An energy in `(−30M, M − ε_M)`, sometimes close to the threshold.
fn energy_in(m: &SpectralMeasure, u: f64) -> f64 {
    let top = m.lower_bound();
    let guard = boundary_guard(top);
    if u < 0.2 {
        top - guard - (top - guard) * 1e-4 * u / 0.2
    } else {
        -30.0 * top + (31.0 * top - 2.0 * guard) * (u - 0.2) / 0.8
    }
}

fn smooth_family(kind: u8, l: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| match kind {
        0 => (-t / l).exp(),
        1 => 1.0 / (1.0 + t / l),
        _ => 1.0 / (1.0 + (t / l).powi(2)),
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn integration_is_linear(m in 0.5..10.0f64, p in 1.5..5.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64,
                             kf in 0u8..3, kg in 0u8..3, l in 0.5..20.0f64) {
        let meas = SpectralMeasure::power_law(m, p, 1.0).unwrap();
        let (f, g) = (smooth_family(kf, l), smooth_family(kg, 2.0 * l));
        let cfg = q();
        let i_f = meas.integrate(&f, &cfg).unwrap();
        let i_g = meas.integrate(&g, &cfg).unwrap();
        let i_fg = meas.integrate(|t| a * f(t) + b * g(t), &cfg).unwrap();
        let tol = 4.0 * (cfg.abs_tol * (1.0 + a.abs() + b.abs())
            + cfg.rel_tol * (a.abs() * i_f.abs() + b.abs() * i_g.abs() + i_fg.abs()));
        prop_assert!((i_fg - a * i_f - b * i_g).abs() <= tol);
    }

    #[test]
    fn integration_respects_dominance(m in 0.5..10.0f64, p in 1.5..5.0f64, l in 0.5..20.0f64, kf in 0u8..3) {
        let meas = SpectralMeasure::power_law(m, p, 1.0).unwrap();
        let f = smooth_family(kf, l);
        let cfg = q();
        let lo = meas.integrate(&f, &cfg).unwrap();
        let hi = meas.integrate(|t| f(t) + 1.0 / (1.0 + t * t), &cfg).unwrap();
        prop_assert!(lo <= hi + cfg.abs_tol + cfg.rel_tol * hi.abs());
    }

    #[test]
    fn power_law_mass(m in 0.5..10.0f64, p in 1.5..5.0f64, c in 0.1..3.0f64) {
        let meas = SpectralMeasure::power_law(m, p, c).unwrap();
        let got = meas.total_mass(&q()).unwrap();
        let want = c * m.powf(1.0 - p) / (p - 1.0);
        prop_assert!((got - want).abs() <= 2.0 * q().rel_tol * want, "{got} vs {want}");
        // closer to p = 2 the tail past f64::MAX holds more than rel_tol of
        // the first moment
        if p <= 2.0 || p >= 2.1 {
            let fm = meas.first_moment(&q()).unwrap();
            prop_assert_eq!(fm.is_finite(), p > 2.0);
        }
    }

    #[test]
    fn secular_monotone_with_sign_law(meas in any_measure(), u1 in 0.0..1.0f64, u2 in 0.0..1.0f64) {
        let cfg = q();
        let (e1, e2) = (energy_in(&meas, u1.min(u2)), energy_in(&meas, u1.max(u2)));
        let s1 = eval_s(&meas, e1, &cfg).unwrap();
        let s2 = eval_s(&meas, e2, &cfg).unwrap();
        if e1 < e2 {
            prop_assert!(s1 < s2, "E {e1} < {e2} but s {s1} >= {s2}");
        }
        prop_assert_eq!(s1.signum(), e1.signum());
        prop_assert_eq!(s2.signum(), e2.signum());
    }

    #[test]
    fn secular_round_trip(meas in any_measure(), u in 0.0..1.0f64) {
        let cfg = SolverConfig::default();
        let target = energy_in(&meas, u);
        prop_assume!(target != 0.0);
        let b = eval_s(&meas, target, &cfg.quadrature).unwrap();
        let root = solve_secular(&meas, b, &cfg).unwrap().expect("b = s(E*) lies in the window");
        prop_assert!(root.energy < meas.lower_bound());
        prop_assert_eq!(root.energy.signum(), b.signum());
        if !root.near_boundary {
            let back = eval_s(&meas, root.energy, &cfg.quadrature).unwrap();
            prop_assert!((back - b).abs() <= 10.0 * cfg.tolerance, "{back} vs {b}");
        }
    }

    #[test]
    fn inner_product_is_s_over_e(meas in any_measure(), u in 0.2..1.0f64) {
        let cfg = q();
        let e = energy_in(&meas, u);
        prop_assume!(e != 0.0);
        let s = eval_s(&meas, e, &cfg).unwrap();
        // circle channels: the spectral route may legitimately stall far below
        // the threshold; the kernel route is the reference there
        let Ok(inner) = resolvent_inner_product(&meas, e, &cfg) else {
            prop_assume!(false);
            unreachable!()
        };
        let tol = 1e-8 * inner.abs().max(1e-12);
        prop_assert!((inner - s / e).abs() <= tol, "{inner} vs {}", s / e);
    }

    #[test]
    fn channel_windows_count_consistently(
        measures in proptest::collection::vec(any_measure(), 1..7),
        picks in proptest::collection::vec((0u8..5, 1e-6..0.9f64), 7),
    ) {
        let cfg = q();
        let mut channels = Vec::new();
        for (i, m) in measures.into_iter().enumerate() {
            let w = admissible_window(&m, &cfg).unwrap();
            let (pick, u) = picks[i];
            // just inside or just outside either end, or well inside
            let b = match (pick, w.lo, w.hi) {
                (0, ExtendedReal::Finite(lo), _) => lo * (1.0 - u),
                (1, ExtendedReal::Finite(lo), _) => lo * (1.0 + u),
                (2, _, ExtendedReal::Finite(hi)) => hi * (1.0 - u),
                (3, _, ExtendedReal::Finite(hi)) => hi * (1.0 + u),
                _ => if u < 0.45 { -u - 0.01 } else { u },
            };
            channels.push(Channel::new(i as i64, m, b, &cfg).unwrap());
        }
        let (by_window, by_case) = counts_for(&channels);
        prop_assert_eq!(by_window, by_case);
    }

    #[test]
    fn slab_closed_form_matches_solver(k in 1u32..12, alpha in prop_oneof![-5.0..-0.05f64, 0.2..10.0f64]) {
        let cfg = SolverConfig::default();
        let Ok(b) = slab_coupling(k, alpha) else { return Ok(()) };
        let Ok(Some(closed)) = slab_eigenvalue_closed_form(k, alpha) else { return Ok(()) };
        prop_assume!(closed.abs() < 1e6);
        let m = slab_channel_measure(k).unwrap();
        let root = solve_secular(&m, b, &cfg).unwrap().unwrap();
        prop_assert!((root.energy - closed).abs() <= 1e-8 * closed.abs().max(1.0));
    }

    #[test]
    fn circle_existence_is_attraction(k in 0i32..6, lambda in 0.5..4.0f64, alpha in -3.0..3.0f64, v in -2.0..2.0f64) {
        prop_assume!(alpha.abs() > 1e-3 && v.abs() > 1e-3);
        let cfg = q();
        let qk = circle_q(k, lambda, &cfg).unwrap();
        prop_assume!((1.0 + alpha * v * qk).abs() > 1e-6);
        let b = circle_coupling(k, alpha, v, qk).unwrap().unwrap();
        let ch = Channel::new(i64::from(k), circle_channel_measure(k, lambda).unwrap(), b, &cfg).unwrap();
        prop_assert_eq!(classify_channel(&ch).case, Case::Case2);
        prop_assert_eq!(ch.window.contains(b), alpha * v > 0.0);
        if ch.window.contains(b) {
            // the root is negative exactly when the coupling is weak
            prop_assert_eq!(b < 0.0, 1.0 + alpha * v * qk > 0.0);
        }
    }
}

fn spec_strategy() -> impl Strategy<Value = PerturbationSpec> {
    proptest::collection::vec(
        (any_measure(), prop_oneof![-3.0..-0.01f64, 0.01..3.0f64]),
        1..6,
    )
    .prop_map(|chs| {
        let lambda = chs
            .iter()
            .map(|(m, _)| m.lower_bound())
            .fold(f64::INFINITY, f64::min);
        let channels = chs
            .into_iter()
            .enumerate()
            .map(|(i, (m, b))| ChannelSpec::new(i as i64, m, b).unwrap())
            .collect();
        PerturbationSpec::new(lambda, channels, true).unwrap()
    })
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn point_spectrum_records_are_consistent(spec in spec_strategy()) {
        let cfg = SolverConfig::default();
        let ps = point_spectrum(&spec, &cfg, Execution::Parallel).unwrap();
        for r in &ps.records {
            let ch = spec.channels.iter().find(|c| c.k == r.k).unwrap();
            prop_assert_eq!(r.energy < 0.0, ch.b < 0.0);
            prop_assert!(r.energy < ch.measure.lower_bound());
            prop_assert!(r.near_boundary || r.residual <= cfg.tolerance);
        }
    }

    #[test]
    fn reports_are_deterministic(spec in spec_strategy()) {
        let cfg = SolverConfig::default();
        let input = InputSpec::Channels(spec);
        let a = build_report(Command::Solve, &input, &cfg, Execution::Sequential).unwrap();
        let b = build_report(Command::Solve, &input, &cfg, Execution::Parallel).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert_eq!(a.to_csv(), b.to_csv());
        let again = InputSpec::parse(&a.to_json()).unwrap();
        let c = build_report(Command::Solve, &again, &cfg, Execution::Parallel).unwrap();
        prop_assert_eq!(c.summary, a.summary);
    }
}

#[test]
fn limits_approach_minus_infinity_monotonically() {
    let cfg = q();
    // s(E) − s(−∞) = ∫ t²/(t − E) dν shrinks like |E|^{-min(1, decay − 2)},
    // with a log factor at decay 3
    for (m, rate) in [
        (SpectralMeasure::power_law(1.0, 4.0, 1.0).unwrap(), 1.0),
        (SpectralMeasure::power_law(2.0, 2.5, 0.7).unwrap(), 0.5),
        (
            SpectralMeasure::shifted_power_law(1.0, 4.0, 1.0, 1.0).unwrap(),
            1.0,
        ),
    ] {
        let limit = s_at_minus_infinity(&m, &cfg).unwrap().finite().unwrap();
        let values: Vec<f64> = (1..=8)
            .map(|j| eval_s(&m, -(10f64.powi(j)), &cfg).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
        assert!(values.iter().all(|&v| v > limit));
        let gaps: Vec<f64> = values.iter().map(|v| v - limit).collect();
        assert!(
            gaps[7] <= 10.0 * (1.0 + 1e8f64.ln()) * 1e8f64.powf(-rate) * (1.0 + limit.abs()),
            "{} vs {limit}",
            values[7]
        );
        // one decade in E divides the gap by at least 10^rate, up to a log
        assert!(gaps[7] / gaps[6] <= 2.0 * 10f64.powf(-rate), "{gaps:?}");
    }
}
