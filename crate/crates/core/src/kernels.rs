//! Closed forms for single rows of the plate lattice.
//!
//! A row fixes one winding number and runs over the other. Summed over
//! the free index each row collapses to hyperbolic functions (the row's
//! Poisson dual). Small arguments switch to ζ-series to avoid the
//! cancellation between the `x^{-4}` / `x^{-6}` poles.
//!
//! Every kernel returns `(value, abs_error_bound)`.

use std::f64::consts::PI;

use crate::series::{zeta_int, NeumaierSum};

/// Below this argument the ζ-series branch is used.
pub(crate) const SERIES_SWITCH: f64 = 0.5;

/// For x ≥ 1 every full-line kernel differs from its power asymptote by at
/// most `EXP_REMAINDER_FULL · e^{-2πx}` (half-line kernels by half that).
pub(crate) const EXP_REMAINDER_FULL: f64 = 50.0;

const CLOSED_FORM_ULPS: f64 = 16.0;

/// coth(πx) and csch²(πx), stable for all x > 0.
fn coth_csch2(x: f64) -> (f64, f64) {
    let q = (-2.0 * PI * x).exp();
    let one_minus_q = -(-2.0 * PI * x).exp_m1();
    let coth = (1.0 + q) / one_minus_q;
    let csch2 = 4.0 * q / (one_minus_q * one_minus_q);
    (coth, csch2)
}

fn closed(parts: &[f64]) -> (f64, f64) {
    let acc: NeumaierSum = parts.iter().copied().collect();
    (acc.value(), CLOSED_FORM_ULPS * f64::EPSILON * acc.magnitude())
}

/// Σ_{k∈ℤ} (k² + x²)^{-2}, closed form.
fn full_s2_closed(x: f64) -> (f64, f64) {
    let (c, q) = coth_csch2(x);
    closed(&[0.5 * PI * c / x.powi(3), 0.5 * PI * PI * q / (x * x)])
}

/// Σ_{k∈ℤ} (k² + x²)^{-3}, closed form.
fn full_s3_closed(x: f64) -> (f64, f64) {
    let (c, q) = coth_csch2(x);
    closed(&[
        0.375 * PI * c / x.powi(5),
        0.375 * PI * PI * q / x.powi(4),
        0.25 * PI.powi(3) * c * q / x.powi(3),
    ])
}

/// Σ_{k∈ℤ} k² (k² + x²)^{-3}, closed form.
fn full_t3_closed(x: f64) -> (f64, f64) {
    let (c, q) = coth_csch2(x);
    closed(&[
        0.125 * PI * c / x.powi(3),
        0.125 * PI * PI * q / (x * x),
        -0.25 * PI.powi(3) * c * q / x,
    ])
}

/// Σ_j (-1)^j w(j) ζ(2j + shift) x^{2j}, alternating with decreasing terms
/// for x < 1/2, so the first omitted term bounds the remainder.
fn zeta_series(x: f64, shift: usize, weight: impl Fn(usize) -> f64) -> (f64, f64) {
    let x2 = x * x;
    let mut acc = NeumaierSum::new();
    let mut power = 1.0;
    let mut j = 0usize;
    loop {
        let term = weight(j) * zeta_int(2 * j + shift) * power;
        let signed = if j % 2 == 0 { term } else { -term };
        if term < 1e-18 * acc.value().abs() || 2 * j + shift + 2 >= crate::series::ZETA_TABLE_LEN {
            return (acc.value(), term + acc.rounding_bound(2.0));
        }
        acc.add(signed);
        power *= x2;
        j += 1;
    }
}

/// Σ_{m≥1} (m² + x²)^{-2}.
pub(crate) fn half_r2(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        zeta_series(x, 4, |j| (j + 1) as f64)
    } else {
        let (s, e) = full_s2_closed(x);
        let pole = x.powi(-4);
        (0.5 * (s - pole), 0.5 * e + 2.0 * f64::EPSILON * pole)
    }
}

/// Σ_{m≥1} m² (m² + x²)^{-3}.
pub(crate) fn half_u3(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        zeta_series(x, 4, |j| ((j + 1) * (j + 2) / 2) as f64)
    } else {
        let (t, e) = full_t3_closed(x);
        (0.5 * t, 0.5 * e)
    }
}

/// Σ_{m≥1} (m² + x²)^{-3}.
pub(crate) fn half_r3(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        zeta_series(x, 6, |j| ((j + 1) * (j + 2) / 2) as f64)
    } else {
        let (s, e) = full_s3_closed(x);
        let pole = x.powi(-6);
        (0.5 * (s - pole), 0.5 * e + 2.0 * f64::EPSILON * pole)
    }
}

/// Σ_{m≥1} (m² − x²)(m² + x²)^{-3}; the row derivative kernel.
pub(crate) fn half_d3(x: f64) -> (f64, f64) {
    let (u, eu) = half_u3(x);
    let (r, er) = half_r3(x);
    let x2r = x * x * r;
    (u - x2r, eu + x * x * er + 2.0 * f64::EPSILON * (u.abs() + x2r.abs()))
}

/// Σ_{k∈ℤ} (k² + x²)^{-2} with the k = 0 pole removed: returns
/// `x^{-4}`-free part `Σ_{k≠0}` together with the closed full value when
/// the argument is large enough. Callers that need the full sum add
/// `x^{-4}` themselves so that tiny `x` never forms the pole in isolation.
pub(crate) fn full_s2_without_pole(x: f64) -> (f64, f64) {
    let (r, e) = half_r2(x);
    (2.0 * r, 2.0 * e)
}

/// Σ_{k∈ℤ} (k² + x²)^{-2}.
pub(crate) fn full_s2(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        let (r, e) = half_r2(x);
        let pole = x.powi(-4);
        (pole + 2.0 * r, 2.0 * e + 2.0 * f64::EPSILON * pole)
    } else {
        full_s2_closed(x)
    }
}

/// Σ_{k∈ℤ} k² (k² + x²)^{-3}.
pub(crate) fn full_t3(x: f64) -> (f64, f64) {
    let (u, e) = half_u3(x);
    (2.0 * u, 2.0 * e)
}
