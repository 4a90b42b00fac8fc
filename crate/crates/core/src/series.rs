//! Series bookkeeping: compensated accumulation, Hurwitz-type power tails
//! with Euler–Maclaurin error bounds, and the [`SeriesValue`] result type.

use std::fmt;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

/// Which formulation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "lattice")]
    Lattice,
    #[serde(rename = "expansion_highT")]
    ExpansionHighT,
    #[serde(rename = "expansion_lowT")]
    ExpansionLowT,
    #[serde(rename = "oracle")]
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Lattice => "lattice",
            Method::ExpansionHighT => "expansion_highT",
            Method::ExpansionLowT => "expansion_lowT",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A summed value with a bound on its truncation (and rounding) error.
///
/// For lattice results the exact value lies in
/// `[value - tail_bound, value + tail_bound]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: usize,
    pub method: Method,
}

impl SeriesValue {
    pub fn new(value: f64, tail_bound: f64, terms_used: usize, method: Method) -> Self {
        debug_assert!(tail_bound >= 0.0);
        SeriesValue {
            value,
            tail_bound,
            terms_used,
            method,
        }
    }

    pub fn exact(value: f64, method: Method) -> Self {
        Self::new(value, 0.0, 0, method)
    }

    /// True when `other` is compatible with `self` given both bounds plus
    /// an extra absolute slack.
    pub fn agrees_with(&self, other: &SeriesValue, slack: f64) -> bool {
        (self.value - other.value).abs() <= self.tail_bound + other.tail_bound + slack
    }
}

/// Kahan–Babuška–Neumaier accumulator.
///
/// Also tracks the sum of magnitudes so callers can bound rounding error.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
    magnitude: f64,
    count: usize,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.magnitude += x.abs();
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Σ|x_i| over everything added.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// A conservative bound on accumulated rounding, assuming each added
    /// term carries a relative error of at most `per_term_ulps` ulps.
    pub fn rounding_bound(&self, per_term_ulps: f64) -> f64 {
        (per_term_ulps + 2.0) * f64::EPSILON * self.magnitude
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

// B_2, B_4, ..., B_20
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Σ_{n ≥ start} n^{-s} for real s > 1 and start ≥ 1.
///
/// Returns `(value, error_bound)`. The head is summed directly up to a
/// shift point where the Euler–Maclaurin series for x^{-s} is rapidly
/// convergent; the first omitted correction bounds the remainder.
pub fn power_tail(s: f64, start: u64) -> (f64, f64) {
    assert!(s > 1.0, "power_tail needs s > 1, got {s}");
    assert!(start >= 1, "power_tail needs start >= 1");
    let shift = (start as f64).max(12.0).max(s.ceil()) as u64;
    let mut head = NeumaierSum::new();
    for n in start..shift {
        head.add((n as f64).powf(-s));
    }
    let m = shift as f64;
    let fm = m.powf(-s);
    let mut em = NeumaierSum::new();
    em.add(m * fm / (s - 1.0));
    em.add(0.5 * fm);
    // term_j = B_2j/(2j)! · s(s+1)…(s+2j-2) · m^{-s-2j+1}
    let mut rising = s; // (s)_{1}
    let mut factorial = 2.0; // (2j)!
    let mut power = fm / m; // m^{-s-1}
    let mut bound = f64::INFINITY;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / factorial * rising * power;
        if j + 1 == BERNOULLI_EVEN.len() || term.abs() < 1e-24 * em.value().abs() {
            bound = term.abs();
            break;
        }
        em.add(term);
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (s + k - 1.0) * (s + k);
        factorial *= (k + 1.0) * (k + 2.0);
        power /= m * m;
    }
    let value = head.value() + em.value();
    let rounding = 4.0 * f64::EPSILON * (head.magnitude() + em.magnitude());
    (value, bound + rounding)
}

/// Riemann zeta at real s > 1.
pub fn zeta(s: f64) -> f64 {
    power_tail(s, 1).0
}

/// ζ(k) for k = 0..=ZETA_TABLE_LEN-1 (entries below 2 are unused and NaN).
pub const ZETA_TABLE_LEN: usize = 160;

static ZETA_TABLE: LazyLock<Vec<f64>> = LazyLock::new(|| {
    (0..ZETA_TABLE_LEN)
        .map(|k| if k < 2 { f64::NAN } else { zeta(k as f64) })
        .collect()
});

/// ζ(k) for integer k ≥ 2, from a cached table.
pub fn zeta_int(k: usize) -> f64 {
    if k < ZETA_TABLE_LEN {
        ZETA_TABLE[k]
    } else {
        // 1 + 2^{-k} + 3^{-k} already exhausts double precision here
        1.0 + 2f64.powi(-(k as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(3.0) - crate::units::ZETA3).abs() < 1e-15);
        assert!((zeta_int(6) - PI.powi(6) / 945.0).abs() < 1e-15);
        assert!((zeta_int(100) - 1.0).abs() < 1e-29 + 1e-30);
    }

    #[test]
    fn power_tail_against_direct_summation() {
        for &(s, n0) in &[(2.0, 1u64), (3.0, 5), (4.0, 40), (3.0, 1000), (7.5, 2)] {
            let (v, b) = power_tail(s, n0);
            // direct sum far enough that the remainder is below 1e-16 relative,
            // plus the integral estimate of what is left
            let cut = 2_000_000u64;
            let mut acc = NeumaierSum::new();
            for n in n0..cut {
                acc.add((n as f64).powf(-s));
            }
            let rest = (cut as f64 - 0.5).powf(1.0 - s) / (s - 1.0);
            let direct = acc.value() + rest;
            assert!(
                (v - direct).abs() <= b + 1e-13 * v,
                "s={s} n0={n0}: {v} vs {direct} (bound {b})"
            );
            assert!(b < 1e-14 * v.max(1e-300));
        }
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let acc: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
        assert_eq!(acc.count(), 4);
    }

    #[test]
    fn agreement_uses_both_bounds() {
        let a = SeriesValue::new(1.0, 0.1, 3, Method::Lattice);
        let b = SeriesValue::new(1.15, 0.1, 3, Method::Oracle);
        assert!(a.agrees_with(&b, 0.0));
        assert!(!a.agrees_with(&SeriesValue::exact(1.3, Method::Oracle), 0.0));
    }
}
