//! High- and low-temperature expansions of the plate free energy.
//!
//! Both follow from one exponentially convergent representation of Δ:
//!
//! ```text
//! Δ(z) = −π⁴/(180 z²) + π ζ(3)/(4z) + (π/2z) Σ_{n≥1} σ₋₃(n) (1 + 2πnz) e^{−2πnz}
//! ```
//!
//! used directly for z ≥ 1 and at 1/z otherwise (Δ(z) = Δ(1/z)).

use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::lattice::ReducedThermo;
use crate::series::{zeta_int, Method, SeriesValue};
use crate::units::{thermal_length, PlateGeometry, UnitSystem, ZETA3};

/// Highest order tried by the automatic evaluators.
pub const MAX_ORDER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "highT")]
    HighT,
    #[serde(rename = "lowT")]
    LowT,
}

impl Regime {
    pub fn method(self) -> Method {
        match self {
            Regime::HighT => Method::ExpansionHighT,
            Regime::LowT => Method::ExpansionLowT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionResult {
    pub value: f64,
    /// number of exponential terms kept
    pub order: usize,
    pub regime: Regime,
    /// magnitude of the first omitted exponential term
    pub estimated_error: f64,
}

/// Σ_{n≥1} 1/(n² + a²) = (aπ coth(aπ) − 1)/(2a²).
pub fn coth_identity(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(CasimirError::Domain(format!("coth identity needs a > 0, got {a}")));
    }
    if a < 0.2 {
        // Σ_k (−1)^k ζ(2k+2) a^{2k}
        let a2 = a * a;
        let mut sum = 0.0;
        let mut p = 1.0;
        for k in 0..40 {
            let t = p * zeta_int(2 * k + 2);
            sum += if k % 2 == 0 { t } else { -t };
            p *= a2;
            if t < 1e-18 * sum {
                break;
            }
        }
        return Ok(sum);
    }
    let x = a * PI;
    let coth = if x > 20.0 { 1.0 } else { 1.0 / x.tanh() };
    Ok((x * coth - 1.0) / (2.0 * a * a))
}

const SIGMA_TABLE_LEN: usize = 256;

static SIGMA_TABLE: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let mut t = vec![0.0; SIGMA_TABLE_LEN + 1];
    for m in 1..=SIGMA_TABLE_LEN {
        let w = (m as f64).powi(-3);
        for k in (m..=SIGMA_TABLE_LEN).step_by(m) {
            t[k] += w;
        }
    }
    t
});

/// Σ_{m | n} m^{-3}.
pub fn sigma_minus3(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(CasimirError::Domain("σ₋₃ needs n ≥ 1".into()));
    }
    if (n as usize) <= SIGMA_TABLE_LEN {
        return Ok(SIGMA_TABLE[n as usize]);
    }
    let mut s = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += (d as f64).powi(-3);
            let e = n / d;
            if e != d {
                s += (e as f64).powi(-3);
            }
        }
        d += 1;
    }
    Ok(s)
}

fn sigma(n: usize) -> f64 {
    sigma_minus3(n as u64).expect("n ≥ 1")
}

/// Σ_{n=1..order} σ₋₃(n) g(n, 2πnw) e^{−2πnw}, and the first omitted term.
fn lambert<G: Fn(f64, f64) -> f64>(w: f64, order: usize, g: G) -> (f64, f64) {
    let term = |n: usize| {
        let x = 2.0 * PI * n as f64 * w;
        sigma(n) * g(n as f64, x) * (-x).exp()
    };
    let mut sum = 0.0;
    for n in (1..=order).rev() {
        sum += term(n);
    }
    (sum, term(order + 1).abs())
}

/// Rigorous bound on Σ_{n>order} ζ(3) p(n) e^{−2πnw} for p of degree ≤ 2,
/// given the magnitude bound p at n = order + 1.
fn lambert_remainder(w: f64, order: usize, p_first: f64) -> f64 {
    let n1 = (order + 1) as f64;
    let r = ((n1 + 1.0) / n1).powi(2) * (-2.0 * PI * w).exp();
    if r >= 1.0 {
        return f64::INFINITY;
    }
    ZETA3 * p_first * (-2.0 * PI * n1 * w).exp() / (1.0 - r)
}

/// Δ(z) from the high-temperature form of the series.
pub fn delta_expansion(z: f64, order: usize) -> Result<ExpansionResult> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("Δ expansion needs z > 0, got {z}")));
    }
    let (s, first) = lambert(z, order, |_, x| 1.0 + x);
    let pre = PI / (2.0 * z);
    Ok(ExpansionResult {
        value: -PI.powi(4) / (180.0 * z * z) + PI * ZETA3 / (4.0 * z) + pre * s,
        order,
        regime: Regime::HighT,
        estimated_error: pre * first,
    })
}

/// Reduced free energy and its z-derivative, each with a first-omitted-term
/// estimate and a rigorous remainder bound.
#[derive(Debug, Clone, Copy)]
struct Branch {
    a: f64,
    da: f64,
    a_first: f64,
    da_first: f64,
    a_bound: f64,
    da_bound: f64,
}

fn high_branch(z: f64, order: usize) -> Branch {
    let c = ZETA3 / (16.0 * PI);
    let k = 1.0 / (8.0 * PI);
    let (s, sf) = lambert(z, order, |_, x| 1.0 + x);
    let (d, df) = lambert(z, order, |_, x| 1.0 + x - x * x);
    let x1 = 2.0 * PI * (order + 1) as f64 * z;
    Branch {
        a: -c * z - k * z * s,
        da: -c - k * d,
        a_first: k * z * sf,
        da_first: k * df,
        a_bound: k * z * lambert_remainder(z, order, 1.0 + x1),
        da_bound: k * lambert_remainder(z, order, 1.0 + x1 + x1 * x1),
    }
}

fn low_branch(z: f64, order: usize) -> Branch {
    let w = 1.0 / z;
    let c = ZETA3 / (16.0 * PI);
    let k = 1.0 / (8.0 * PI);
    let t0 = -PI * PI / 720.0;
    let z2 = z * z;
    let z3 = z2 * z;
    let (s, sf) = lambert(w, order, |_, x| 1.0 + x);
    // d/dz of z³(1 + x)e^{−x}, x = 2πn/z, is (3z² + 3xz² + x²z²) e^{−x}
    let (d, df) = lambert(w, order, |_, x| 3.0 + 3.0 * x + x * x);
    let x1 = 2.0 * PI * (order + 1) as f64 * w;
    Branch {
        a: t0 - t0 * z2 * z2 - c * z3 - k * z3 * s,
        da: -4.0 * t0 * z3 - 3.0 * c * z2 - k * z2 * d,
        a_first: k * z3 * sf,
        da_first: k * z2 * df,
        a_bound: k * z3 * lambert_remainder(w, order, 1.0 + x1),
        da_bound: k * z2 * lambert_remainder(w, order, 3.0 + 3.0 * x1 + x1 * x1),
    }
}

fn branch(z: f64, order: usize, regime: Regime) -> Branch {
    match regime {
        Regime::HighT => high_branch(z, order),
        Regime::LowT => low_branch(z, order),
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("z must be finite and ≥ 0, got {z}")));
    }
    Ok(())
}

/// Reduced free energy from one branch at fixed order.
pub fn a_hat_expansion(z: f64, order: usize, regime: Regime) -> Result<ExpansionResult> {
    check_z(z)?;
    if z == 0.0 {
        return match regime {
            Regime::LowT => Ok(ExpansionResult {
                value: -PI * PI / 720.0,
                order,
                regime,
                estimated_error: 0.0,
            }),
            Regime::HighT => Err(CasimirError::Domain(
                "high-temperature branch is undefined at z = 0".into(),
            )),
        };
    }
    let b = branch(z, order, regime);
    Ok(ExpansionResult {
        value: b.a,
        order,
        regime,
        estimated_error: b.a_first,
    })
}

/// Canonical branch for z: high-T at z ≥ 1.
pub fn regime_for(z: f64) -> Regime {
    if z >= 1.0 {
        Regime::HighT
    } else {
        Regime::LowT
    }
}

/// Reduced free energy to `tolerance`, using the branch chosen by [`regime_for`].
pub fn auto_eval(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(auto_thermo(z, tolerance)?.a_hat)
}

/// Full reduced thermodynamics from the expansions, to `tolerance`.
pub fn auto_thermo(z: f64, tolerance: f64) -> Result<ReducedThermo> {
    check_z(z)?;
    if !(tolerance > 0.0) {
        return Err(CasimirError::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let regime = regime_for(z);
    let method = regime.method();
    if z == 0.0 {
        let a = -PI * PI / 720.0;
        return Ok(ReducedThermo {
            z,
            a_hat: SeriesValue::new(a, 0.0, 0, method),
            f_hat: SeriesValue::new(3.0 * a, 0.0, 0, method),
            e_hat: SeriesValue::new(a, 0.0, 0, method),
            s_hat: SeriesValue::exact(0.0, method),
        });
    }
    let mut order = 0;
    let b = loop {
        let b = branch(z, order, regime);
        let worst = b.a_bound.max(z * b.da_bound);
        if worst < 0.25 * tolerance || order >= MAX_ORDER {
            break b;
        }
        order += 1;
    };
    let rnd = |x: f64| 8.0 * f64::EPSILON * x.abs();
    let za = z * b.da;
    let zb = z * b.da_bound;
    let e = b.a - za;
    let f = 3.0 * b.a - za;
    let s = -2.0 * b.da;
    Ok(ReducedThermo {
        z,
        a_hat: SeriesValue::new(b.a, b.a_bound + rnd(b.a), order, method),
        e_hat: SeriesValue::new(e, b.a_bound + zb + rnd(b.a) + rnd(za), order, method),
        f_hat: SeriesValue::new(f, 3.0 * b.a_bound + zb + rnd(3.0 * b.a) + rnd(za), order, method),
        s_hat: SeriesValue::new(s, 2.0 * b.da_bound + rnd(s) + rnd(z * b.da), order, method),
    })
}

/// The derivative branch da/dz at fixed order, with its first omitted term.
pub fn da_hat_expansion(z: f64, order: usize, regime: Regime) -> Result<ExpansionResult> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("derivative branch needs z > 0, got {z}")));
    }
    let b = branch(z, order, regime);
    Ok(ExpansionResult {
        value: b.da,
        order,
        regime,
        estimated_error: b.da_first,
    })
}

/// High-temperature A/𝒜 in the units of `units`.
pub fn free_energy_high_t(
    geometry: &PlateGeometry,
    units: &UnitSystem,
    order: usize,
) -> Result<ExpansionResult> {
    let lt = thermal_length(geometry.temperature, units)?;
    let kt = units.boltzmann * geometry.temperature;
    let l3 = geometry.l3;
    let w = 2.0 * l3 / lt;
    let pre = kt / (lt * l3);
    let (s, first) = lambert(w, order, |n, _| n + lt / (4.0 * PI * l3));
    Ok(ExpansionResult {
        value: -ZETA3 * kt / (8.0 * PI * l3 * l3) - pre * s,
        order,
        regime: Regime::HighT,
        estimated_error: pre * first,
    })
}

/// The classical leading term −ζ(3) k_B T/(8π l3²) alone.
pub fn high_t_leading(geometry: &PlateGeometry, units: &UnitSystem) -> f64 {
    -ZETA3 * units.boltzmann * geometry.temperature / (8.0 * PI * geometry.l3 * geometry.l3)
}

/// Low-temperature A/𝒜 in the units of `units`; exact at T = 0.
pub fn free_energy_low_t(
    geometry: &PlateGeometry,
    units: &UnitSystem,
    order: usize,
) -> Result<ExpansionResult> {
    let l3 = geometry.l3;
    let casimir = -PI * PI * units.hbar_c / (720.0 * l3.powi(3));
    if geometry.is_zero_temperature() {
        return Ok(ExpansionResult {
            value: casimir,
            order,
            regime: Regime::LowT,
            estimated_error: 0.0,
        });
    }
    let lt = thermal_length(geometry.temperature, units)?;
    let kt = units.boltzmann * geometry.temperature;
    let w = lt / (2.0 * l3);
    let pre = kt / (lt * l3);
    let (s, first) = lambert(w, order, |n, _| n + l3 / (PI * lt));
    Ok(ExpansionResult {
        value: casimir - kt * ZETA3 / (2.0 * PI * lt * lt) + PI * PI * kt * l3 / (45.0 * lt.powi(3))
            - pre * s,
        order,
        regime: Regime::LowT,
        estimated_error: pre * first,
    })
}
