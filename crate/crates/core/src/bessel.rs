//! Bessel functions of the first kind for integer order, and their running
//! integrals `∫_0^x J_n(t) dt`.
//!
//! Three regimes:
//! * ascending power series when `x² ≤ 4(n+1)` (terms decrease from the start,
//!   so there is no cancellation) or `x ≤ 2`;
//! * Hankel's asymptotic expansion when `x ≥ max(25, n²/2)`;
//! * Miller's backward recurrence, normalized by `J_0 + 2ΣJ_{2m} = 1`,
//!   everywhere in between.

use std::f64::consts::{FRAC_PI_4, PI};

/// Past this argument the running integral uses its asymptotic tail.
const INTEGRAL_ASYMPTOTIC_FROM: f64 = 2.0e4;

/// Lower cut for the recurrence route of the running integral: `∫J_0` from
/// its tail expansion, which is accurate to ~1e-15 from here on.
const INTEGRAL_RECURRENCE_FROM: f64 = 80.0;

fn use_integral_recurrence(n: u32, x: f64) -> bool {
    let nf = f64::from(n);
    x >= INTEGRAL_RECURRENCE_FROM.max(0.5 * nf * nf)
}

fn use_series(n: u32, x: f64) -> bool {
    x <= 2.0 || x * x <= 4.0 * (f64::from(n) + 1.0)
}

fn use_hankel(n: u32, x: f64) -> bool {
    let nf = f64::from(n);
    x >= 25.0_f64.max(0.5 * nf * nf)
}

/// Leading power-series term `(x/2)^n / n!`, built multiplicatively so it
/// underflows gracefully instead of overflowing.
fn leading_term(n: u32, half_x: f64) -> f64 {
    let mut t = 1.0;
    for i in 1..=n {
        t *= half_x / f64::from(i);
        if t == 0.0 {
            break;
        }
    }
    t
}

fn series(n: u32, x: f64) -> f64 {
    let half_x = 0.5 * x;
    let q = half_x * half_x;
    let mut term = leading_term(n, half_x);
    let mut sum = term;
    let mut m = 0.0;
    let nf = f64::from(n);
    loop {
        m += 1.0;
        term *= -q / (m * (m + nf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
            break;
        }
    }
    sum
}

fn hankel(n: u32, x: f64) -> f64 {
    let (p, q) = hankel_pq(n, x);
    let chi = x - (2.0 * f64::from(n) + 1.0) * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn hankel_pq(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0_f64;
    for m in 1..200 {
        let mf = f64::from(m);
        let odd = 2.0 * mf - 1.0;
        let next = a * (mu - odd * odd) / (mf * 8.0 * x);
        if next.abs() > a.abs() && m > 1 {
            break;
        }
        a = next;
        // signs: P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        match m % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn miller_start(order: u32, x: f64) -> usize {
    let top = f64::from(order).max(x);
    let start = (top + 30.0 + 15.0 * top.cbrt()).ceil() as usize;
    start + start % 2
}

/// `J_0(x), …, J_N(x)` by backward recurrence for `x > 0`, with `N` large
/// enough that `J_N` is negligible. The returned vector has length `N + 1`
/// and always covers at least `0..=order`.
fn miller_all(order: u32, x: f64) -> Vec<f64> {
    let start = miller_start(order, x);
    let mut j = vec![0.0; start + 1];
    let mut next = 0.0;
    let mut cur = 1e-300;
    j[start] = cur;
    let mut norm = 0.0;
    for m in (1..=start).rev() {
        let prev = (2.0 * m as f64 / x) * cur - next;
        next = cur;
        cur = prev;
        j[m - 1] = cur;
        if (m - 1) % 2 == 0 && m - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            for v in j[m - 1..].iter_mut() {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j[0];
    for v in j.iter_mut() {
        *v /= norm;
    }
    j
}

fn j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if use_series(n, x) {
        series(n, x)
    } else if use_hankel(n, x) {
        hankel(n, x)
    } else {
        miller_all(n, x)[n as usize]
    }
}

/// `J_n(x)` for any integer order and real argument.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let order = n.unsigned_abs();
    let mut sign = 1.0;
    if n < 0 && order % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && order % 2 == 1 {
        sign = -sign;
    }
    sign * j_nonneg(order, x.abs())
}

/// `∫_0^x J_n(t) dt` for `n ≥ 0`, `x ≥ 0`.
///
/// Uses `∫_0^x J_n = 2 Σ_{m≥0} J_{n+2m+1}(x)` on the Miller sequence, the
/// integrated power series for small `x`, and `1 − ∫_x^∞ J_n` with the
/// tail expansion beyond `2·10⁴`. In between, once every `J_m`, `m < n`,
/// is in the Hankel regime, the recurrence `∫J_{m+1} = ∫J_{m−1} − 2J_m`
/// reduces the integral to `∫J_0` or `∫J_1 = 1 − J_0` plus `O(n)` terms.
pub fn bessel_j_integral(n: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "running integral needs x >= 0, got {x}");
    if x == 0.0 {
        return 0.0;
    }
    if use_series(n, x) {
        let half_x = 0.5 * x;
        let q = half_x * half_x;
        let nf = f64::from(n);
        let mut term = leading_term(n, half_x);
        let mut sum = term * x / (nf + 1.0);
        let mut m = 0.0;
        loop {
            m += 1.0;
            term *= -q / (m * (m + nf));
            let add = term * x / (2.0 * m + nf + 1.0);
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() || add == 0.0 {
                break;
            }
        }
        return sum;
    }
    if x >= INTEGRAL_ASYMPTOTIC_FROM {
        return 1.0 - integral_tail_asymptotic(n, x);
    }
    if use_integral_recurrence(n, x) {
        return integral_by_recurrence(n, x);
    }
    let j = miller_all(n + 1, x);
    j.iter()
        .skip(n as usize + 1)
        .step_by(2)
        .fold(0.0, |acc, v| acc + v)
        * 2.0
}

fn integral_by_recurrence(n: u32, x: f64) -> f64 {
    let (base, first) = if n % 2 == 0 {
        (1.0 - integral_tail_asymptotic(0, x), 1)
    } else {
        (1.0 - hankel(0, x), 2)
    };
    let mut sum = 0.0;
    let mut m = first;
    while m < n {
        sum += hankel(m, x);
        m += 2;
    }
    base - 2.0 * sum
}

/// `∫_x^∞ J_n(t) dt` from Hankel's expansion integrated term by term:
/// `Re[i·e^{iχ} Σ_{m,j} i^m (−i)^j a_m (m+½)_j x^{−½−m−j}]·√(2/π)`,
/// with `a_m` the Hankel coefficients and `(·)_j` the rising factorial.
fn integral_tail_asymptotic(n: u32, x: f64) -> f64 {
    const ORDER: usize = 10;
    let mu = 4.0 * f64::from(n) * f64::from(n);
    let mut a = [0.0; ORDER + 1];
    a[0] = 1.0;
    for m in 1..=ORDER {
        let odd = 2.0 * m as f64 - 1.0;
        a[m] = a[m - 1] * (mu - odd * odd) / (m as f64 * 8.0);
    }
    // powers of i as (re, im)
    let i_pow = |k: usize| match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    };
    let (mut re, mut im) = (0.0, 0.0);
    let mut x_pow = 1.0;
    for r in 0..=ORDER {
        let (mut cr, mut ci) = (0.0, 0.0);
        for m in 0..=r {
            let j = r - m;
            let mut rising = 1.0;
            for q in 0..j {
                rising *= m as f64 + 0.5 + q as f64;
            }
            // i^m (−i)^j = i^(m + 3j)
            let (pr, pi) = i_pow(m + 3 * j);
            cr += pr * a[m] * rising;
            ci += pi * a[m] * rising;
        }
        re += cr * x_pow;
        im += ci * x_pow;
        x_pow /= x;
    }
    let chi = x - (2.0 * f64::from(n) + 1.0) * FRAC_PI_4;
    // Re[i e^{iχ} (re + i im)] = −sin χ·re − cos χ·im
    (2.0 / (PI * x)).sqrt() * (-chi.sin() * re - chi.cos() * im)
}
