//! Classical high-temperature free-energy shift of a scalar field when a
//! movable wall inside a box of length L sits at l3 instead of L/2.
//!
//! Everything here depends on lengths only; ħ and c never enter.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::quadrature;
use crate::series::{power_tail, Method, NeumaierSum, SeriesValue};
use crate::units::ZETA3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxPartition {
    /// total box length
    pub total: f64,
    /// wall position
    pub l3: f64,
    pub transverse_area: f64,
}

impl BoxPartition {
    pub fn new(total: f64, l3: f64, transverse_area: f64) -> Result<Self> {
        if !(total.is_finite() && l3 > 0.0 && l3 < total && transverse_area > 0.0) {
            return Err(CasimirError::InvalidGeometry(format!(
                "need 0 < l3 < L and positive area, got L = {total}, l3 = {l3}, area = {transverse_area}"
            )));
        }
        Ok(Self {
            total,
            l3,
            transverse_area,
        })
    }

    pub fn midpoint(total: f64, transverse_area: f64) -> Result<Self> {
        Self::new(total, 0.5 * total, transverse_area)
    }

    fn pieces(&self) -> [(f64, f64); 3] {
        let rest = self.total - self.l3;
        let half = 0.5 * self.total;
        [(self.l3, self.l3), (rest, rest), (-self.total, half)]
    }
}

/// Both sides of Σ_n e^{−n²π²x} = (πx)^{−1/2} Σ_n e^{−n²/x}, |n| ≤ n_max.
pub fn theta_reflection(x: f64, n_max: u32) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(CasimirError::Domain(format!("θ reflection needs x > 0, got {x}")));
    }
    let mut lhs = NeumaierSum::new();
    let mut rhs = NeumaierSum::new();
    for n in (1..=n_max).rev() {
        let n2 = (n as f64).powi(2);
        lhs.add(2.0 * (-n2 * PI * PI * x).exp());
        rhs.add(2.0 * (-n2 / x).exp());
    }
    lhs.add(1.0);
    rhs.add(1.0);
    Ok((lhs.value(), rhs.value() / (PI * x).sqrt()))
}

/// ΔA/(k_BT 𝒜) = −(ζ(3)/16π)·[1/l3² + 1/(L−l3)² − 8/L²].
pub fn classical_shift_closed(p: &BoxPartition) -> f64 {
    let rest = p.total - p.l3;
    -ZETA3 / (16.0 * PI) * (p.l3.powi(-2) + rest.powi(-2) - 8.0 * p.total.powi(-2))
}

/// ∫₀^∞ dλ λ^{−5/2} Σ_j w_j e^{−n² s_j²/λ} with λ = 1/t², i.e. ∫₀^∞ 2t² Σ_j w_j e^{−n² s_j² t²} dt.
fn lambda_integral(p: &BoxPartition, n: u64, quad_tolerance: f64) -> Result<(f64, f64)> {
    let pieces = p.pieces();
    let nf = n as f64;
    let integrand = |t: f64| {
        let t2 = t * t;
        let mut acc = NeumaierSum::new();
        for &(w, s) in &pieces {
            acc.add(w * (-(nf * s) * (nf * s) * t2).exp());
        }
        2.0 * t2 * acc.value()
    };
    let s_min = pieces.iter().map(|q| q.1).fold(f64::INFINITY, f64::min);
    let t_max = 9.0 / (nf * s_min);
    let mut breaks: Vec<f64> = pieces
        .iter()
        .flat_map(|&(_, s)| [0.5, 1.0, 2.0, 4.0].map(|k| k / (nf * s)))
        .filter(|&b| b < t_max)
        .collect();
    breaks.push(0.0);
    breaks.push(t_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut acc = NeumaierSum::new();
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let r = quadrature::integrate(integrand, w[0], w[1], 0.1 * quad_tolerance, 1e-14, 400)?;
        acc.add(r.value);
        err += r.error;
    }
    // ∫_T^∞ 2t² e^{−a t²} dt ≤ (T/a + 1/(a² T)) e^{−a T²}, a = (n s_min)²
    let a = (nf * s_min).powi(2);
    let weight: f64 = pieces.iter().map(|q| q.0.abs()).sum();
    err += weight * (t_max / a + 1.0 / (a * a * t_max)) * (-a * t_max * t_max).exp();
    Ok((acc.value(), err))
}

/// The n-sum of λ-integrals, each by adaptive quadrature, for 1 ≤ n ≤ n_max.
/// Terms beyond n_max follow from the n = 1 integral through the exact
/// n⁻³ scaling of the λ-integrals.
pub fn classical_shift_quadrature(p: &BoxPartition, n_max: u64, quad_tolerance: f64) -> Result<SeriesValue> {
    if n_max < 1 {
        return Err(CasimirError::Domain("need n_max ≥ 1".into()));
    }
    if !(quad_tolerance > 0.0) {
        return Err(CasimirError::Domain("quadrature tolerance must be positive".into()));
    }
    let pre = -1.0 / (16.0 * PI * PI.sqrt()) * 2.0;
    let mut acc = NeumaierSum::new();
    let mut err = 0.0;
    let mut first = (0.0, 0.0);
    for n in 1..=n_max {
        let (v, e) = lambda_integral(p, n, quad_tolerance * (n as f64).powi(-3))?;
        if n == 1 {
            first = (v, e);
        }
        acc.add(v);
        err += e;
    }
    let (h3, hb) = power_tail(3.0, n_max + 1);
    acc.add(first.0 * h3);
    err += first.1 * h3 + first.0.abs() * hb;
    let value = pre * acc.value();
    Ok(SeriesValue::new(
        value,
        pre.abs() * (err + acc.rounding_bound(4.0)),
        n_max as usize,
        Method::Oracle,
    ))
}

/// 2·ΔA (leading large-L piece) over the EM high-T leading term
/// −ζ(3) k_BT/(8π l3²); tends to 1 as L/l3 → ∞.
pub fn em_high_t_consistency(l3: f64, total: f64) -> Result<f64> {
    if !(l3 > 0.0) || !(total >= 100.0 * l3) {
        return Err(CasimirError::Domain(format!(
            "consistency ratio needs L ≥ 100·l3, got l3 = {l3}, L = {total}"
        )));
    }
    let p = BoxPartition::new(total, l3, 1.0)?;
    let em = -ZETA3 / (8.0 * PI * l3 * l3);
    Ok(2.0 * classical_shift_closed(&p) / em)
}
