//! Reduced thermodynamics of ideal plates from the periodic-orbit lattice.
//!
//! With u = n3², v = nT²/z² the reduced free energy is
//!
//! ```text
//! â(z) = −1/(8π²) Σ_{n3≥1, nT∈ℤ} (u + v)^{-2}
//! ```
//!
//! and energy, force and entropy follow termwise. Rows of the lattice are
//! summed exactly through their hyperbolic closed forms, the list of rows is
//! summed directly, and the rows beyond a cutoff are replaced by their power
//! asymptotes (summed with Euler–Maclaurin) plus an explicit bound on the
//! exponentially small remainder.
//!
//! Two row orientations are available: rows of fixed n3 ("direct", the
//! canonical route) and rows of fixed nT after splitting off nT = 0
//! (the Δ decomposition). They share no row arithmetic.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::expansion;
use crate::kernels::{self, EXP_REMAINDER_FULL};
use crate::orbits::{self, em_scalar_factor, GeometryCase};
use crate::series::{power_tail, Method, NeumaierSum, SeriesValue};
use crate::units::{reduced_z, PlateGeometry, UnitSystem};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Outside `[Z_MIN_LATTICE, Z_MAX_LATTICE]` the exponentially exact
/// expansions are used instead of the lattice.
pub const Z_MIN_LATTICE: f64 = 1e-3;
pub const Z_MAX_LATTICE: f64 = 1e3;

const CASIMIR_T0: f64 = -PI * PI / 720.0;

/// Reduced free energy, force, energy and entropy at one z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedThermo {
    pub z: f64,
    /// A l3³ / (ħc 𝒜)
    pub a_hat: SeriesValue,
    /// F l3⁴ / (ħc 𝒜), F = −∂A/∂l3 at fixed T
    pub f_hat: SeriesValue,
    /// ℰ l3³ / (ħc 𝒜)
    pub e_hat: SeriesValue,
    /// S l3² / (k_B 𝒜)
    pub s_hat: SeriesValue,
}

/// Description of a row sum Σ_{n≥1} row(n), row argument x = n·spacing.
struct RowSum<'a> {
    spacing: f64,
    row: &'a dyn Fn(u64, f64) -> (f64, f64),
    /// For x ≥ 1: row ≈ Σ coef · x^{-power}
    asymptote: &'a [(f64, f64)],
    /// |row − asymptote| ≤ exp_coef · e^{-2πx} for x ≥ 1
    exp_coef: f64,
}

#[derive(Debug, Clone, Copy)]
struct RowTotal {
    value: f64,
    bound: f64,
    explicit_rows: u64,
}

impl RowSum<'_> {
    fn cutoff_for(&self, tol: f64) -> f64 {
        let h = self.spacing;
        let denom = -(-2.0 * PI * h).exp_m1();
        let need = (self.exp_coef / (0.25 * tol * denom)).ln() / (2.0 * PI);
        need.max(1.0)
    }

    /// Rows with argument below `cut` are summed explicitly.
    fn evaluate(&self, cut: f64) -> RowTotal {
        let h = self.spacing;
        let cut = cut.max(1.0);
        let explicit = ((cut / h).ceil() as u64).saturating_sub(1);
        let mut acc = NeumaierSum::new();
        let mut err = 0.0;
        for n in 1..=explicit {
            let (v, e) = (self.row)(n, n as f64 * h);
            acc.add(v);
            err += e;
        }
        let first_tail = explicit + 1;
        let mut tail = NeumaierSum::new();
        for &(coef, power) in self.asymptote {
            let (t, tb) = power_tail(power, first_tail);
            let scale = coef * h.powf(-power);
            tail.add(scale * t);
            err += scale.abs() * tb;
        }
        let q = (-2.0 * PI * first_tail as f64 * h).exp();
        let exp_tail = self.exp_coef * q / -(-2.0 * PI * h).exp_m1();
        let value = acc.value() + tail.value();
        let bound = err + exp_tail + acc.rounding_bound(2.0) + tail.rounding_bound(2.0);
        RowTotal {
            value,
            bound,
            explicit_rows: explicit,
        }
    }
}

/// The two basic lattice sums over n3 ≥ 1, nT ∈ ℤ:
/// P = Σ (u+v)^{-2} and W = Σ v (u+v)^{-3}.
fn direct_sums(z: f64, cut: Option<f64>, tol: f64) -> (RowTotal, RowTotal) {
    let z4 = z.powi(4);
    // row n3: Σ_nT (n3² + nT²/z²)^{-2} = z⁴ S2(n3 z)
    let p_row = |n: u64, b: f64| -> (f64, f64) {
        if b < kernels::SERIES_SWITCH {
            let (r, e) = kernels::full_s2_without_pole(b);
            ((n as f64).powi(-4) + z4 * r, z4 * e + f64::EPSILON * (n as f64).powi(-4))
        } else {
            let (s, e) = kernels::full_s2(b);
            (z4 * s, z4 * e)
        }
    };
    let w_row = |_n: u64, b: f64| -> (f64, f64) {
        let (t, e) = kernels::full_t3(b);
        (z4 * t, z4 * e)
    };
    let p_asym = [(z4 * 0.5 * PI, 3.0)];
    let w_asym = [(z4 * 0.125 * PI, 3.0)];
    let p = RowSum {
        spacing: z,
        row: &p_row,
        asymptote: &p_asym,
        exp_coef: z4 * EXP_REMAINDER_FULL,
    };
    let w = RowSum {
        spacing: z,
        row: &w_row,
        asymptote: &w_asym,
        exp_coef: z4 * EXP_REMAINDER_FULL,
    };
    let cp = cut.unwrap_or_else(|| p.cutoff_for(tol));
    let cw = cut.unwrap_or_else(|| w.cutoff_for(tol * z.min(1.0)));
    (p.evaluate(cp), w.evaluate(cw))
}

/// Δ(z) and Δ′(z) summed in rows of fixed n (the nT winding).
fn delta_sums(z: f64, cut: Option<f64>, tol: f64) -> (RowTotal, RowTotal) {
    let zi2 = z.powi(-2);
    let zi3 = z.powi(-3);
    // row n: Σ_m (m² z + n²/z)^{-2} = z^{-2} R2(n/z)
    let d_row = |_n: u64, c: f64| -> (f64, f64) {
        let (r, e) = kernels::half_r2(c);
        (zi2 * r, zi2 * e)
    };
    // d/dz of the row: −2 z^{-3} Σ_m (m² − c²)/(m² + c²)³
    let dp_row = |_n: u64, c: f64| -> (f64, f64) {
        let (d, e) = kernels::half_d3(c);
        (-2.0 * zi3 * d, 2.0 * zi3 * e)
    };
    let d_asym = [(zi2 * 0.25 * PI, 3.0), (-0.5 * zi2, 4.0)];
    let dp_asym = [(2.0 * zi3 * 0.125 * PI, 3.0), (-zi3, 4.0)];
    let d = RowSum {
        spacing: 1.0 / z,
        row: &d_row,
        asymptote: &d_asym,
        exp_coef: zi2 * 0.5 * EXP_REMAINDER_FULL,
    };
    let dp = RowSum {
        spacing: 1.0 / z,
        row: &dp_row,
        asymptote: &dp_asym,
        exp_coef: 2.0 * zi3 * EXP_REMAINDER_FULL,
    };
    let cd = cut.unwrap_or_else(|| d.cutoff_for(tol / z.max(1.0)));
    let cdp = cut.unwrap_or_else(|| dp.cutoff_for(tol / z.max(1.0)));
    (d.evaluate(cd), dp.evaluate(cdp))
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("z must be finite and ≥ 0, got {z}")));
    }
    Ok(())
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if !(tolerance > 0.0) {
        return Err(CasimirError::Domain(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    Ok(())
}

/// Δ(z) = Σ_{n,m≥1} (m² z + n²/z)^{-2}.
pub fn delta_of_z(z: f64, tolerance: f64) -> Result<SeriesValue> {
    delta_of_z_with_cutoff(z, tolerance, None)
}

/// As [`delta_of_z`], forcing the row argument beyond which asymptotes
/// replace explicit rows (clamped to ≥ 1).
pub fn delta_of_z_with_cutoff(z: f64, tolerance: f64, cut: Option<f64>) -> Result<SeriesValue> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("Δ(z) needs z > 0, got {z}")));
    }
    check_tolerance(tolerance)?;
    let (d, _) = delta_sums(z, cut, tolerance);
    Ok(SeriesValue::new(
        d.value,
        d.bound,
        d.explicit_rows as usize,
        Method::Lattice,
    ))
}

fn zero_temperature() -> ReducedThermo {
    let a = SeriesValue::new(CASIMIR_T0, 2.0 * f64::EPSILON * CASIMIR_T0.abs(), 0, Method::Lattice);
    let f = SeriesValue::new(3.0 * CASIMIR_T0, 6.0 * f64::EPSILON * CASIMIR_T0.abs(), 0, Method::Lattice);
    ReducedThermo {
        z: 0.0,
        a_hat: a,
        f_hat: f,
        e_hat: a,
        s_hat: SeriesValue::exact(0.0, Method::Lattice),
    }
}

fn combine(p: RowTotal, w: RowTotal, z: f64) -> ReducedThermo {
    let k = 1.0 / (8.0 * PI * PI);
    let terms = (p.explicit_rows + w.explicit_rows) as usize;
    let rnd = |x: f64| 4.0 * f64::EPSILON * x.abs();
    let a = -k * p.value;
    let e = -k * (p.value - 4.0 * w.value);
    let f = -k * (3.0 * p.value - 4.0 * w.value);
    let s = w.value / (PI * PI * z);
    let pb = k * p.bound;
    let wb = k * w.bound;
    let cancel = rnd(k * p.value) + rnd(4.0 * k * w.value);
    ReducedThermo {
        z,
        a_hat: SeriesValue::new(a, pb + rnd(a), terms, Method::Lattice),
        e_hat: SeriesValue::new(e, pb + 4.0 * wb + cancel, terms, Method::Lattice),
        f_hat: SeriesValue::new(f, 3.0 * pb + 4.0 * wb + 3.0 * cancel, terms, Method::Lattice),
        s_hat: SeriesValue::new(s, w.bound / (PI * PI * z) + rnd(s), terms, Method::Lattice),
    }
}

/// Lattice thermodynamics through rows of fixed n3, with `cut` forcing the
/// asymptote switch (testing hook for tail honesty).
pub fn reduced_thermo_direct(z: f64, tolerance: f64, cut: Option<f64>) -> Result<ReducedThermo> {
    check_z(z)?;
    check_tolerance(tolerance)?;
    if z == 0.0 {
        return Ok(zero_temperature());
    }
    let (p, w) = direct_sums(z, cut, tolerance);
    Ok(combine(p, w, z))
}

/// Lattice thermodynamics through −π²/720 − z² Δ(z)/(4π²) and its
/// termwise derivative.
pub fn reduced_thermo_decomposed(z: f64, tolerance: f64) -> Result<ReducedThermo> {
    check_z(z)?;
    check_tolerance(tolerance)?;
    if z == 0.0 {
        return Ok(zero_temperature());
    }
    let (d, dp) = delta_sums(z, None, tolerance);
    let k = 1.0 / (4.0 * PI * PI);
    let z2 = z * z;
    let z3 = z2 * z;
    let terms = (d.explicit_rows + dp.explicit_rows) as usize;
    let rnd = |x: f64| 4.0 * f64::EPSILON * x.abs();
    let (zd, zdp) = (z2 * d.value, z3 * dp.value);
    let (zdb, zdpb) = (z2 * d.bound, z3 * dp.bound);
    let cancel = rnd(CASIMIR_T0) + rnd(k * zd) + rnd(k * zdp);
    let a = CASIMIR_T0 - k * zd;
    let e = CASIMIR_T0 + k * (zd + zdp);
    let f = 3.0 * CASIMIR_T0 + k * (zdp - zd);
    let s = (2.0 * z * d.value + z2 * dp.value) / (2.0 * PI * PI);
    let sb = (2.0 * z * d.bound + z2 * dp.bound) / (2.0 * PI * PI) + rnd(s) + rnd(z * d.value);
    Ok(ReducedThermo {
        z,
        a_hat: SeriesValue::new(a, k * zdb + cancel, terms, Method::Lattice),
        e_hat: SeriesValue::new(e, k * (zdb + zdpb) + cancel, terms, Method::Lattice),
        f_hat: SeriesValue::new(f, k * (zdb + zdpb) + 3.0 * cancel, terms, Method::Lattice),
        s_hat: SeriesValue::new(s, sb, terms, Method::Lattice),
    })
}

/// Reduced thermodynamics at z. Extreme z delegate to the expansions.
pub fn reduced_thermo(z: f64, tolerance: f64) -> Result<ReducedThermo> {
    check_z(z)?;
    check_tolerance(tolerance)?;
    if z > 0.0 && !(Z_MIN_LATTICE..=Z_MAX_LATTICE).contains(&z) {
        return expansion::auto_thermo(z, tolerance);
    }
    reduced_thermo_direct(z, tolerance, None)
}

pub fn a_hat_lattice(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(reduced_thermo(z, tolerance)?.a_hat)
}

/// â through the Δ decomposition only (no delegation).
pub fn a_hat_decomposed(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(reduced_thermo_decomposed(z, tolerance)?.a_hat)
}

pub fn f_hat_lattice(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(reduced_thermo(z, tolerance)?.f_hat)
}

pub fn e_hat_lattice(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(reduced_thermo(z, tolerance)?.e_hat)
}

pub fn s_hat_lattice(z: f64, tolerance: f64) -> Result<SeriesValue> {
    Ok(reduced_thermo(z, tolerance)?.s_hat)
}

/// Brute-force â from the cylinder orbits with L ≤ `max_length` (l3 = 1).
///
/// Every omitted term is positive and the omitted total is bounded by a
/// quarter-plane integral (the summand decreases in both windings), so the
/// returned midpoint is within `tail_bound` of the full lattice value.
pub fn a_hat_orbit_sum(z: f64, max_length: f64) -> Result<SeriesValue> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("orbit sum needs z > 0, got {z}")));
    }
    let (l3, lt) = (1.0, 2.0 / z);
    let orbits = orbits::cylinder_orbits(l3, lt, max_length)?;
    let mut acc = NeumaierSum::new();
    for o in &orbits {
        acc.add(o.multiplicity as f64 * o.length.powi(-4));
    }
    // in units of the reduced lattice: X = n3, Y = nT/z, term = (X² + Y²)^{-2}
    let rho = max_length / (2.0 * l3);
    let diag = (1.0 + 1.0 / (z * z)).sqrt();
    let excluded_rho = (rho - diag).max(f64::MIN_POSITIVE);
    if rho <= 2.0 * diag {
        return Err(CasimirError::Domain(format!(
            "max_length {max_length} too short for a tail bound at z = {z}"
        )));
    }
    // both nT signs off-axis + the nT = 0 column beyond rho
    let off_axis = 2.0 * z * PI / (4.0 * excluded_rho * excluded_rho);
    let on_axis = (rho - 1.0).powi(-3) / 3.0;
    let tail_upper = off_axis + on_axis;
    // a = −(1/π²) Σ mult L^{-4} with l3 = 1; reduced terms carry 1/16
    let scale = 1.0 / (PI * PI);
    let partial = -scale * acc.value();
    let half = 0.5 * tail_upper / (8.0 * PI * PI);
    Ok(SeriesValue::new(
        partial - half,
        half + acc.rounding_bound(4.0) * scale,
        orbits.len(),
        Method::Lattice,
    ))
}

/// Whether results describe the electromagnetic field or a single scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Electromagnetic,
    Scalar,
}

/// Per-area thermodynamics in the units of the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalThermo {
    pub z: f64,
    pub field: FieldKind,
    /// A/𝒜 (energy / length²)
    pub free_energy: f64,
    /// F/𝒜 (energy / length³); negative is attractive
    pub pressure: f64,
    /// ℰ/𝒜
    pub energy: f64,
    /// S/𝒜 (k_B units / length²)
    pub entropy: f64,
    pub reduced: ReducedThermo,
}

pub fn physical_thermo(
    geometry: &PlateGeometry,
    units: &UnitSystem,
    field: FieldKind,
    tolerance: f64,
) -> Result<PhysicalThermo> {
    let state = reduced_z(geometry, units);
    let reduced = reduced_thermo(state.z, tolerance)?;
    let scale = match field {
        FieldKind::Electromagnetic => 1.0,
        FieldKind::Scalar => 1.0 / em_scalar_factor(GeometryCase::Plates)? as f64,
    };
    let l3 = geometry.l3;
    let hc = units.hbar_c;
    Ok(PhysicalThermo {
        z: state.z,
        field,
        free_energy: scale * hc * reduced.a_hat.value / l3.powi(3),
        pressure: scale * hc * reduced.f_hat.value / l3.powi(4),
        energy: scale * hc * reduced.e_hat.value / l3.powi(3),
        entropy: scale * units.boltzmann * reduced.s_hat.value / (l3 * l3),
        reduced,
    })
}
