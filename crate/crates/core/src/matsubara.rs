//! Mode-sum formulations: the force as a Matsubara sum over the thermal
//! index, single-mode free energies, and a toy four-dimensional cavity
//! spectrum.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{CasimirError, Result};
use crate::expansion::coth_identity;
use crate::quadrature;
use crate::series::{power_tail, Method, NeumaierSum, SeriesValue};
use crate::units::{reduced_z, PlateGeometry, UnitSystem};

/// Beyond this α the quadrature route for J is not attempted.
pub const J_QUADRATURE_ALPHA_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JMethod {
    Quadrature,
    Series,
    Closed,
}

/// Decreasing convex tail Σ_{m>M} f(m) from an antiderivative `tail_int(x) = ∫_x^∞ f`:
/// bracketed by the trapezoid and midpoint comparisons.
fn convex_tail(m: f64, f: impl Fn(f64) -> f64, tail_int: impl Fn(f64) -> f64) -> (f64, f64) {
    let lower = tail_int(m + 1.0) + 0.5 * f(m + 1.0);
    let upper = tail_int(m + 0.5);
    (0.5 * (lower + upper), 0.5 * (upper - lower).abs())
}

/// J(α) = ∫₀^∞ sin(αy)/(e^y − 1) dy = Σ_{m≥1} α/(m² + α²).
pub fn j_integral(alpha: f64, method: JMethod) -> Result<SeriesValue> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(CasimirError::Domain(format!("J needs α ≥ 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(SeriesValue::exact(0.0, Method::Oracle));
    }
    match method {
        JMethod::Closed => {
            let v = alpha * coth_identity(alpha)?;
            Ok(SeriesValue::new(v, 8.0 * f64::EPSILON * v, 0, Method::Oracle))
        }
        JMethod::Series => {
            let m_max = (10.0 * alpha).max(20_000.0).ceil();
            let mut acc = NeumaierSum::new();
            for m in (1..=m_max as u64).rev() {
                let m = m as f64;
                acc.add(alpha / (m * m + alpha * alpha));
            }
            let (t, tb) = convex_tail(m_max, |m| alpha / (m * m + alpha * alpha), |x| (alpha / x).atan());
            Ok(SeriesValue::new(
                acc.value() + t,
                tb + acc.rounding_bound(2.0),
                m_max as usize,
                Method::Oracle,
            ))
        }
        JMethod::Quadrature => j_quadrature(alpha),
    }
}

fn j_quadrature(alpha: f64) -> Result<SeriesValue> {
    if alpha > J_QUADRATURE_ALPHA_MAX {
        return Err(CasimirError::Quadrature {
            achieved: f64::INFINITY,
            requested: 1e-13,
        });
    }
    let integrand = |y: f64| {
        if y == 0.0 {
            alpha
        } else {
            (alpha * y).sin() / y.exp_m1()
        }
    };
    let y_max: f64 = 40.0;
    // |∫_Y^∞| ≤ e^{−Y}/(1 − e^{−Y})
    let tail = (-y_max).exp() / -(-y_max).exp_m1();
    let step = PI / alpha;
    let mut acc = NeumaierSum::new();
    let mut err = tail;
    let mut evaluations = 0;
    let mut lo = 0.0;
    let mut k = 1.0;
    while lo < y_max {
        let hi = (k * step).min(y_max);
        let r = quadrature::integrate(integrand, lo, hi, 1e-16, 1e-14, 200)?;
        acc.add(r.value);
        err += r.error;
        evaluations += r.evaluations;
        lo = hi;
        k += 1.0;
    }
    Ok(SeriesValue::new(
        acc.value(),
        err + acc.rounding_bound(4.0),
        evaluations,
        Method::Oracle,
    ))
}

/// Σ_{m≥1} (3m² − α²)/(m² + α²)³ with a bracketed tail.
pub fn c_series(alpha: f64) -> SeriesValue {
    let a2 = alpha * alpha;
    let g = |m: f64| (3.0 * m * m - a2) / (m * m + a2).powi(3);
    let m_max = (10.0 * alpha).max(2000.0).ceil();
    let mut acc = NeumaierSum::new();
    for m in (1..=m_max as u64).rev() {
        acc.add(g(m as f64));
    }
    let (t, tb) = convex_tail(m_max, g, |x| x / (x * x + a2).powi(2));
    SeriesValue::new(
        acc.value() + t,
        tb + acc.rounding_bound(4.0),
        m_max as usize,
        Method::Oracle,
    )
}

/// c(α) = β/(2π² l3) · Σ_{m≥1} (3m² − α²)/(m² + α²)³.
pub fn c_coefficient(alpha: f64, beta: f64, l3: f64) -> Result<SeriesValue> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(CasimirError::Domain(format!("c needs α ≥ 0, got {alpha}")));
    }
    let s = c_series(alpha);
    let k = beta / (2.0 * PI * PI * l3);
    Ok(SeriesValue::new(k * s.value, k.abs() * s.tail_bound, s.terms_used, Method::Oracle))
}

/// c(α) through −J″(α)/(2α) with a five-point difference of the closed J.
pub fn c_from_j_second_derivative(alpha: f64, beta: f64, l3: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(CasimirError::Domain("second-derivative route needs α > 0".into()));
    }
    let h = 1e-2 * alpha.max(0.5);
    let j = |a: f64| j_integral(a, JMethod::Closed).map(|v| v.value);
    let d2 = (-j(alpha + 2.0 * h)? + 16.0 * j(alpha + h)? - 30.0 * j(alpha)? + 16.0 * j(alpha - h)?
        - j(alpha - 2.0 * h)?)
        / (12.0 * h * h);
    Ok(beta / (2.0 * PI * PI * l3) * (-d2 / (2.0 * alpha)))
}

/// |Σ_{m≥1} g(m) − 1/(2α⁴)| ≤ C_EXP_REMAINDER e^{−2πα} for α ≥ 1.
const C_EXP_REMAINDER: f64 = 82.0;

/// Σ_{n∈ℤ} C(n/z) in reduced form, with its bound and term count.
fn matsubara_sum(z: f64, tolerance: f64) -> SeriesValue {
    let c0 = c_series(0.0);
    if z == 0.0 {
        return c0;
    }
    let h = 1.0 / z;
    let denom = -(-2.0 * PI * h).exp_m1();
    let cut = ((2.0 * C_EXP_REMAINDER / (0.25 * tolerance * c0.value * denom)).ln() / (2.0 * PI)).max(1.0);
    let n_explicit = ((cut * z).ceil() as u64).max(1);
    let mut acc = NeumaierSum::new();
    let mut err = c0.tail_bound;
    for n in (1..=n_explicit).rev() {
        let c = c_series(n as f64 * h);
        acc.add(2.0 * c.value);
        err += 2.0 * c.tail_bound;
    }
    // n > n_explicit: 2·z⁴/(2n⁴) + exponentially small
    let (pt, pb) = power_tail(4.0, n_explicit + 1);
    let z4 = z.powi(4);
    acc.add(z4 * pt);
    err += z4 * pb;
    err += 2.0 * C_EXP_REMAINDER * (-2.0 * PI * (n_explicit + 1) as f64 * h).exp() / denom;
    acc.add(c0.value);
    SeriesValue::new(acc.value(), err + acc.rounding_bound(4.0), n_explicit as usize, Method::Oracle)
}

/// F/𝒜 = −(1/(4β l3³)) Σ_{n∈ℤ} c(n l_T/(2 l3)), in the caller's units.
pub fn force_matsubara(geometry: &PlateGeometry, units: &UnitSystem, tolerance: f64) -> Result<SeriesValue> {
    if !(tolerance > 0.0) {
        return Err(CasimirError::Domain("tolerance must be positive".into()));
    }
    let z = reduced_z(geometry, units).z;
    let s = matsubara_sum(z, tolerance);
    let k = units.hbar_c / (8.0 * PI * PI * geometry.l3.powi(4));
    Ok(SeriesValue::new(-k * s.value, k * s.tail_bound, s.terms_used, Method::Oracle))
}

/// Reduced force F l3⁴/(ħc𝒜) from the Matsubara sum.
pub fn f_hat_matsubara(z: f64, tolerance: f64) -> Result<SeriesValue> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(CasimirError::Domain(format!("z must be finite and ≥ 0, got {z}")));
    }
    let s = matsubara_sum(z, tolerance);
    let k = 1.0 / (8.0 * PI * PI);
    Ok(SeriesValue::new(-k * s.value, k * s.tail_bound, s.terms_used, Method::Oracle))
}

/// A = E/2 + β⁻¹ ln(1 − e^{−βE}) for a mode of energy E = ħω.
pub fn mode_free_energy(energy: f64, beta: f64) -> Result<f64> {
    check_mode(energy, beta)?;
    let x = beta * energy;
    Ok((0.5 * x + (-(-x).exp_m1()).ln()) / beta)
}

/// The same free energy as β⁻¹ ln(2 sinh(βE/2)).
pub fn mode_free_energy_trace(energy: f64, beta: f64) -> Result<f64> {
    check_mode(energy, beta)?;
    let x = beta * energy;
    if x > 700.0 {
        return Ok(energy / 2.0 + (-(-x).exp_m1()).ln() / beta);
    }
    Ok((2.0 * (0.5 * x).sinh()).ln() / beta)
}

fn check_mode(energy: f64, beta: f64) -> Result<()> {
    if !(energy > 0.0) || !(beta > 0.0) || !energy.is_finite() || !beta.is_finite() {
        return Err(CasimirError::Domain(format!(
            "mode energy and β must be positive, got E = {energy}, β = {beta}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraModeSum {
    /// truncated sum plus the leading analytic tail
    pub value: f64,
    /// β⁻¹ Σ_{|n|≤n_max} [ln E(ω,n) − ln E(ω_ref,n)] alone
    pub truncated: f64,
    /// leading estimate of the omitted |n| > n_max terms
    pub tail_estimate: f64,
    pub n_max: u64,
}

/// Regularized Matsubara sum for A(E) − A(E_ref), E(ω,n) = √(E² + (2πn/β)²).
pub fn mode_free_energy_matsubara(
    energy: f64,
    beta: f64,
    n_max: u64,
    reference_energy: f64,
) -> Result<MatsubaraModeSum> {
    check_mode(energy, beta)?;
    check_mode(reference_energy, beta)?;
    let d = (energy - reference_energy) * (energy + reference_energy);
    let r2 = reference_energy * reference_energy;
    let nu = 2.0 * PI / beta;
    let term = |n: u64| {
        let v = nu * n as f64;
        0.5 * (d / (r2 + v * v)).ln_1p()
    };
    let mut acc = NeumaierSum::new();
    for n in (1..=n_max).rev() {
        acc.add(2.0 * term(n));
    }
    acc.add(term(0));
    let truncated = acc.value() / beta;
    // ½ ln(1 + d/ν_n²) ≈ d β²/(8π² n²) on both signs of n
    let (h2, _) = power_tail(2.0, n_max + 1);
    let tail_estimate = d * beta / (4.0 * PI * PI) * h2;
    Ok(MatsubaraModeSum {
        value: truncated + tail_estimate,
        truncated,
        tail_estimate,
        n_max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub quantum_numbers: Vec<i64>,
    /// mode energy ħω
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub label: String,
    pub modes: Vec<Mode>,
}

impl ModeSpectrum {
    /// Sorts by energy (ties by quantum numbers); all energies must be positive.
    pub fn new(label: impl Into<String>, mut modes: Vec<Mode>) -> Result<Self> {
        if let Some(bad) = modes.iter().find(|m| !(m.energy > 0.0) || !m.energy.is_finite()) {
            return Err(CasimirError::Domain(format!(
                "mode {:?} has non-positive energy {}",
                bad.quantum_numbers, bad.energy
            )));
        }
        modes.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.quantum_numbers.cmp(&b.quantum_numbers))
        });
        Ok(Self {
            label: label.into(),
            modes,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "quantum_numbers", "energy"])?;
        for m in &self.modes {
            let qn: Vec<String> = m.quantum_numbers.iter().map(|q| q.to_string()).collect();
            w.write_record([self.label.clone(), qn.join(" "), format!("{:.16e}", m.energy)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalDiff {
    /// k_BT Σ ln(E′/E)
    pub classical: f64,
    /// Σ [A(E′) − A(E)]
    pub exact: f64,
}

/// Free-energy change between two spectra whose modes are paired by
/// quantum numbers.
pub fn classical_diff(a: &ModeSpectrum, b: &ModeSpectrum, beta: f64) -> Result<ClassicalDiff> {
    if a.len() != b.len() {
        return Err(CasimirError::Pairing(format!(
            "{} has {} modes, {} has {}",
            a.label,
            a.len(),
            b.label,
            b.len()
        )));
    }
    let mut by_qn: Vec<&Mode> = b.modes.iter().collect();
    by_qn.sort_by(|x, y| x.quantum_numbers.cmp(&y.quantum_numbers));
    let mut classical = NeumaierSum::new();
    let mut exact = NeumaierSum::new();
    for m in &a.modes {
        let idx = by_qn
            .binary_search_by(|p| p.quantum_numbers.cmp(&m.quantum_numbers))
            .map_err(|_| CasimirError::Pairing(format!("no partner for mode {:?}", m.quantum_numbers)))?;
        let p = by_qn[idx];
        classical.add((p.energy / m.energy).ln());
        exact.add(mode_free_energy(p.energy, beta)? - mode_free_energy(m.energy, beta)?);
    }
    Ok(ClassicalDiff {
        classical: classical.value() / beta,
        exact: exact.value(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraEnergy {
    /// E(k, n) = √(E_k² + (2πn/β)²)
    pub energy: f64,
    /// position of the spatial mode in lexicographic (n1, n2, n3) order
    pub k_index: usize,
    pub spatial: [u32; 3],
    pub n: i64,
}

/// Energies πħc √(Σᵢ (nᵢ/l̄)² + (n/(l_T/2))²) for 1 ≤ nᵢ ≤ `n_spatial_max`,
/// |n| ≤ `n_t_max`, sorted ascending.
pub fn cubic_cavity_spectrum(
    side: f64,
    lt: f64,
    n_spatial_max: u32,
    n_t_max: u32,
    units: &UnitSystem,
) -> Result<Vec<MatsubaraEnergy>> {
    if !(side > 0.0) || !(lt > 0.0) {
        return Err(CasimirError::InvalidGeometry(format!(
            "cube side and thermal length must be positive, got {side}, {lt}"
        )));
    }
    let half = 0.5 * lt;
    let mut out = Vec::new();
    let mut k_index = 0;
    for n1 in 1..=n_spatial_max {
        for n2 in 1..=n_spatial_max {
            for n3 in 1..=n_spatial_max {
                let spatial = ((n1 * n1 + n2 * n2 + n3 * n3) as f64) / (side * side);
                for n in -(n_t_max as i64)..=(n_t_max as i64) {
                    let t = n as f64 / half;
                    out.push(MatsubaraEnergy {
                        energy: PI * units.hbar_c * (spatial + t * t).sqrt(),
                        k_index,
                        spatial: [n1, n2, n3],
                        n,
                    });
                }
                k_index += 1;
            }
        }
    }
    out.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then_with(|| a.spatial.cmp(&b.spatial))
            .then_with(|| a.n.cmp(&b.n))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// counts[k] covers [k·w, (k+1)·w)
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_centre(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["bin_lo", "bin_hi", "count"])?;
        for (k, c) in self.counts.iter().enumerate() {
            w.write_record([
                format!("{:.16e}", k as f64 * self.bin_width),
                format!("{:.16e}", (k + 1) as f64 * self.bin_width),
                c.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn spectral_density_histogram(spectrum: &[MatsubaraEnergy], bin_width: f64) -> Result<Histogram> {
    if spectrum.is_empty() {
        return Err(CasimirError::EmptySpectrum);
    }
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(CasimirError::Domain(format!("bin width must be positive, got {bin_width}")));
    }
    let max = spectrum.iter().map(|e| e.energy).fold(0.0, f64::max);
    let bins = (max / bin_width).floor() as usize + 1;
    let mut counts = vec![0u64; bins];
    for e in spectrum {
        counts[(e.energy / bin_width).floor() as usize] += 1;
    }
    Ok(Histogram { bin_width, counts })
}

/// Log-log slope of the bin counts between `e_lo` and `e_hi` (least squares).
pub fn density_growth_exponent(h: &Histogram, e_lo: f64, e_hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = (0..h.counts.len())
        .filter(|&k| h.counts[k] > 0)
        .map(|k| (h.bin_centre(k), h.counts[k] as f64))
        .filter(|&(e, _)| e >= e_lo && e <= e_hi)
        .map(|(e, c)| (e.ln(), c.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;

    const J_HALF: f64 = 0.712_688_574_959_647_755_61;
    const J_ONE: f64 = 1.076_674_047_468_581_174_1;
    const J_FIVE: f64 = 1.470_796_326_794_967_968;

    #[test]
    fn j_three_ways() {
        for (a, want) in [(0.5, J_HALF), (1.0, J_ONE), (5.0, J_FIVE)] {
            for m in [JMethod::Closed, JMethod::Series, JMethod::Quadrature] {
                let v = j_integral(a, m).unwrap();
                assert!((v.value - want).abs() < 1e-12, "{m:?} α={a}: {}", v.value);
                assert!((v.value - want).abs() <= v.tail_bound + 1e-15);
            }
        }
        for m in [JMethod::Closed, JMethod::Series, JMethod::Quadrature] {
            assert_eq!(j_integral(0.0, m).unwrap().value, 0.0);
        }
        assert!(j_integral(-1.0, JMethod::Closed).is_err());
        assert!(j_integral(60.0, JMethod::Quadrature).is_err());
    }

    #[test]
    fn c_limits() {
        let c0 = c_coefficient(0.0, 2.0, 1.5).unwrap();
        let want = 2.0 * PI * PI / (60.0 * 1.5);
        assert!((c0.value - want).abs() < 1e-14);
        assert!(c_coefficient(1e4, 1.0, 1.0).unwrap().value.abs() < 1e-15);
        let direct = c_coefficient(1.0, 1.0, 1.0).unwrap().value;
        let fd = c_from_j_second_derivative(1.0, 1.0, 1.0).unwrap();
        assert!((direct - fd).abs() < 1e-8 * direct.abs());
    }

    #[test]
    fn large_alpha_asymptote_is_honest() {
        for a in [1.0, 1.5, 2.0, 3.0] {
            let c = c_series(a);
            let gap = (c.value - 0.5 * a.powi(-4)).abs();
            assert!(gap <= C_EXP_REMAINDER * (-2.0 * PI * a).exp() + c.tail_bound, "α={a}");
        }
    }

    #[test]
    fn force_matches_lattice() {
        for z in [0.1, 0.37, 1.0, 2.2, 10.0] {
            let m = f_hat_matsubara(z, 1e-13).unwrap();
            let l = lattice::f_hat_lattice(z, 1e-13).unwrap();
            assert!(((m.value - l.value) / l.value).abs() < 1e-12, "z={z}: {} {}", m.value, l.value);
        }
        let g = PlateGeometry::unit_area(2.0, 0.0).unwrap();
        let f0 = force_matsubara(&g, &UnitSystem::natural(), 1e-12).unwrap();
        assert!((f0.value + PI * PI / (240.0 * 16.0)).abs() < 1e-15);
    }

    #[test]
    fn single_mode_forms() {
        let beta = 3.0;
        for x in [1e-3, 0.1, 1.0, 7.0, 50.0] {
            let a = mode_free_energy(x / beta, beta).unwrap();
            let b = mode_free_energy_trace(x / beta, beta).unwrap();
            assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300), "x={x}");
        }
        let a = mode_free_energy(0.01, 1.0).unwrap();
        assert!((a - 0.01f64.ln()).abs() < 0.006);
        assert!((mode_free_energy(2.0, 1e3).unwrap() - 1.0).abs() < 1e-15);
        assert!(mode_free_energy(0.0, 1.0).is_err());
    }

    #[test]
    fn matsubara_mode_sum() {
        let s = mode_free_energy_matsubara(1.0, 2.0, 50, 1.0).unwrap();
        assert_eq!(s.value, 0.0);
        let exact = mode_free_energy(1.0, 1.0).unwrap() - mode_free_energy(2.0, 1.0).unwrap();
        let s = mode_free_energy_matsubara(1.0, 1.0, 10_000, 2.0).unwrap();
        assert!((s.truncated - exact).abs() < 1e-4);
        assert!((s.value - exact).abs() < 1e-10);
        // algebraic rate: error ∝ 1/n_max
        let e1 = (mode_free_energy_matsubara(1.0, 1.0, 1000, 2.0).unwrap().truncated - exact).abs();
        let e2 = (mode_free_energy_matsubara(1.0, 1.0, 2000, 2.0).unwrap().truncated - exact).abs();
        assert!((e1 / e2 - 2.0).abs() < 0.01);
    }

    #[test]
    fn classical_pairing() {
        let modes = |s: f64| {
            (1..=10)
                .map(|k| Mode {
                    quantum_numbers: vec![k],
                    energy: s * k as f64 * 1e-3,
                })
                .collect::<Vec<_>>()
        };
        let a = ModeSpectrum::new("a", modes(1.0)).unwrap();
        let b = ModeSpectrum::new("b", modes(1.1)).unwrap();
        let same = classical_diff(&a, &a, 1.0).unwrap();
        assert_eq!(same.classical, 0.0);
        assert_eq!(same.exact, 0.0);
        let d = classical_diff(&a, &b, 1.0).unwrap();
        assert!((d.classical - 10.0 * 1.1f64.ln()).abs() < 1e-13);
        assert!(((d.classical - d.exact) / d.exact).abs() < 0.01);
        let short = ModeSpectrum::new("s", modes(1.0)[..9].to_vec()).unwrap();
        assert!(matches!(classical_diff(&a, &short, 1.0), Err(CasimirError::Pairing(_))));
        let mut other = modes(1.0);
        other[0].quantum_numbers = vec![99];
        let other = ModeSpectrum::new("o", other).unwrap();
        assert!(classical_diff(&a, &other, 1.0).is_err());
    }

    #[test]
    fn cube_spectrum_properties() {
        let u = UnitSystem::natural();
        let lt = 2.0;
        let sp = cubic_cavity_spectrum(1.0, lt, 4, 4, &u).unwrap();
        assert_eq!(sp.len(), 64 * 9);
        assert!(sp.windows(2).all(|w| w[0].energy <= w[1].energy));
        // l̄ = l_T/2: swapping n1 with the thermal index keeps the energy
        let find = |s: [u32; 3], n: i64| sp.iter().find(|e| e.spatial == s && e.n == n).unwrap().energy;
        assert_eq!(find([3, 1, 2], 2), find([2, 1, 2], 3));
        for e in &sp {
            let ek = find(e.spatial, 0);
            assert!(e.energy >= ek);
            assert_eq!(e.energy == ek, e.n == 0);
        }
        let pure = cubic_cavity_spectrum(1.0, lt, 3, 0, &u).unwrap();
        assert_eq!(pure.len(), 27);
        assert!((pure[0].energy - PI * 3f64.sqrt()).abs() < 1e-14);

        // brute-force count below a cutoff
        let cutoff = 12.0;
        let mut brute = 0;
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    for n in -4i64..=4 {
                        let e = PI * (((a * a + b * b + c * c) as f64) + (n * n) as f64).sqrt();
                        if e < cutoff {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(sp.iter().filter(|e| e.energy < cutoff).count(), brute);
    }

    #[test]
    fn histograms() {
        let u = UnitSystem::natural();
        let one = cubic_cavity_spectrum(1.0, 2.0, 1, 0, &u).unwrap();
        let h = spectral_density_histogram(&one, 0.5).unwrap();
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!(spectral_density_histogram(&[], 1.0).is_err());

        let sp = cubic_cavity_spectrum(1.0, 2.0, 30, 30, &u).unwrap();
        let h1 = spectral_density_histogram(&sp, 1.0).unwrap();
        let h2 = spectral_density_histogram(&sp, 2.0).unwrap();
        assert_eq!(h1.total(), h2.total());
        for (k, c) in h2.counts.iter().enumerate() {
            let merged: u64 = h1.counts.iter().skip(2 * k).take(2).sum();
            assert_eq!(*c, merged);
        }
        // complete below π·30; 4D Weyl growth of the density ∝ E³
        let slope = density_growth_exponent(&h2, 30.0, 90.0).unwrap();
        assert!((slope - 3.0).abs() < 0.35, "slope {slope}");
    }
}
