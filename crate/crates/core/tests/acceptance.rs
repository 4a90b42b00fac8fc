//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use casimir_core::classical_box::{
    classical_shift_closed, classical_shift_quadrature, em_high_t_consistency, BoxPartition,
};
use casimir_core::expansion::{a_hat_expansion, Regime};
use casimir_core::lattice::{self, physical_thermo, FieldKind};
use casimir_core::matsubara::{self, classical_diff, JMethod, Mode, ModeSpectrum};
use casimir_core::selftest::{derivative_mismatch, log_grid, order0_relative_error, orbits_match_brute_force};
use casimir_core::units::{thermal_length, PlateGeometry, UnitSystem, ZETA3};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn zero_temperature() -> Outcome {
    let a = lattice::a_hat_lattice(0.0, 1e-12).unwrap().value;
    let d = (a + PI * PI / 720.0).abs();
    outcome(d <= 1e-12, format!("a_hat(0) = {a:.16e}, |dev| = {d:.2e}"))
}

fn reflection() -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for z in [0.1, 0.5, 2.0, 10.0] {
        let a = lattice::delta_of_z(z, 1e-10).unwrap();
        let b = lattice::delta_of_z(1.0 / z, 1e-10).unwrap();
        let d = (a.value - b.value).abs();
        ok &= d <= a.tail_bound + b.tail_bound && a.tail_bound < 1e-10 && b.tail_bound < 1e-10;
        worst = worst.max(d);
    }
    outcome(ok, format!("max |Δ(z) - Δ(1/z)| = {worst:.2e}"))
}

fn mode_sum_equivalence() -> Outcome {
    let si = UnitSystem::si();
    let lengths = log_grid(1e-6, 1e-5, 5);
    // T chosen so that z runs from 0.1 (shortest l3, coldest) to 10
    let t_for = |z: f64, l3: f64| z * si.hbar_c / (2.0 * l3 * si.boltzmann);
    let temps = log_grid(t_for(0.1, 1e-6), t_for(1.0, 1e-6), 5);
    let mut worst: f64 = 0.0;
    let (mut zmin, mut zmax) = (f64::INFINITY, 0.0f64);
    for &l3 in &lengths {
        for &t in &temps {
            let g = PlateGeometry::unit_area(l3, t).unwrap();
            let lat = physical_thermo(&g, &si, FieldKind::Electromagnetic, 1e-13).unwrap();
            let m = matsubara::force_matsubara(&g, &si, 1e-13).unwrap();
            worst = worst.max(rel(m.value, lat.pressure));
            zmin = zmin.min(lat.z);
            zmax = zmax.max(lat.z);
        }
    }
    let spans = zmin <= 0.1 * (1.0 + 1e-9) && zmax >= 10.0 * (1.0 - 1e-9);
    outcome(
        worst <= 1e-10 && spans,
        format!("max rel dev = {worst:.2e} over z in [{zmin:.3}, {zmax:.3}]"),
    )
}

fn dual_expansions() -> Outcome {
    let mut worst: f64 = 0.0;
    for z in [2.0, 2.5, 4.0, 7.0, 10.0, 20.0] {
        let e = a_hat_expansion(z, 8, Regime::HighT).unwrap().value;
        worst = worst.max((e - lattice::a_hat_lattice(z, 1e-14).unwrap().value).abs());
    }
    for z in [0.5, 0.4, 0.25, 0.14, 0.1, 0.05] {
        let e = a_hat_expansion(z, 8, Regime::LowT).unwrap().value;
        worst = worst.max((e - lattice::a_hat_lattice(z, 1e-14).unwrap().value).abs());
    }
    outcome(worst <= 1e-12, format!("max |expansion - lattice| = {worst:.2e}"))
}

fn crossover() -> Outcome {
    let zs = log_grid(0.2, 5.0, 81);
    let errs: Vec<f64> = zs.iter().map(|&z| order0_relative_error(z, 1e-13).unwrap()).collect();
    let (imax, peak) = errs
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, e)| if e > acc.1 { (i, e) } else { acc });
    let at_one = (zs[imax] - 1.0).abs() < 1e-12;
    outcome(
        (0.02..=0.025).contains(&peak) && at_one,
        format!("peak {:.4}% at z = {}", 100.0 * peak, zs[imax]),
    )
}

fn classicality() -> Outcome {
    let l3 = 1.3;
    // z = 50 when ħc = 1; doubling ħc halves z but leaves k_BT and l3 alone
    let t = 50.0 / (2.0 * l3);
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    for hbar_c in [1.0, 2.0] {
        let units = UnitSystem::custom(hbar_c, 1.0).unwrap();
        let g = PlateGeometry::unit_area(l3, t).unwrap();
        let p = physical_thermo(&g, &units, FieldKind::Electromagnetic, 1e-13).unwrap();
        let leading = -ZETA3 * units.boltzmann * t / (8.0 * PI * l3 * l3);
        worst = worst.max(rel(p.free_energy, leading));
        values.push(p.free_energy);
    }
    let change = rel(values[1], values[0]);
    outcome(
        worst <= 1e-10 && change <= 1e-10,
        format!("rel dev from -ζ(3)kT/(8πl3²) = {worst:.2e}, ħc change = {change:.2e}"),
    )
}

fn classical_box() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut mid_zero = true;
    for (l, l3) in [(10.0, 1.0), (10.0, 5.0), (3.0, 0.4), (7.0, 5.5), (100.0, 1.0)] {
        let p = BoxPartition::new(l, l3, 1.0).unwrap();
        let q = classical_shift_quadrature(&p, 32, 1e-13).unwrap().value;
        let c = classical_shift_closed(&p);
        if l3 == 0.5 * l {
            mid_zero &= q == 0.0 && c == 0.0;
        } else {
            worst = worst.max(rel(q, c));
        }
    }
    let ratio = em_high_t_consistency(1.0, 1e3).unwrap();
    outcome(
        worst <= 1e-8 && mid_zero && (ratio - 1.0).abs() <= 1e-4,
        format!("max rel quadrature dev = {worst:.2e}, midpoint exact zero = {mid_zero}, ratio at 1e3 = {ratio:.8}"),
    )
}

fn single_mode_regularization() -> Outcome {
    let beta = 50.0;
    let exact = matsubara::mode_free_energy(1.0, beta).unwrap() - matsubara::mode_free_energy(2.0, beta).unwrap();
    let s = matsubara::mode_free_energy_matsubara(1.0, beta, 100_000, 2.0).unwrap();
    let err = (s.value - exact).abs();
    outcome(
        err < 1e-6,
        format!(
            "error = {err:.2e} (bare truncated sum error {:.2e}, tail estimate {:.2e})",
            (s.truncated - exact).abs(),
            s.tail_estimate
        ),
    )
}

fn classical_mode_asymptote() -> Outcome {
    let beta = 1.0;
    let max = 0.01;
    let a: Vec<Mode> = (1..=10)
        .map(|k| Mode {
            quantum_numbers: vec![k],
            energy: max * (0.35 + 0.065 * k as f64),
        })
        .collect();
    let b: Vec<Mode> = a
        .iter()
        .map(|m| Mode {
            quantum_numbers: m.quantum_numbers.clone(),
            energy: m.energy * (0.7 + 0.02 * m.quantum_numbers[0] as f64),
        })
        .collect();
    let bmax = a.iter().chain(b.iter()).map(|m| beta * m.energy).fold(0.0, f64::max);
    let sa = ModeSpectrum::new("a", a).unwrap();
    let sb = ModeSpectrum::new("b", b).unwrap();
    let d = classical_diff(&sa, &sb, beta).unwrap();
    let e = rel(d.classical, d.exact);
    outcome(
        e < 0.01 && bmax <= 0.01 + 1e-15,
        format!("β E_max = {bmax:.4}, relative error = {e:.2e}"),
    )
}

fn j_triple() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 5.0] {
        let q = matsubara::j_integral(a, JMethod::Quadrature).unwrap().value;
        let s = matsubara::j_integral(a, JMethod::Series).unwrap().value;
        let c = matsubara::j_integral(a, JMethod::Closed).unwrap().value;
        worst = worst.max((q - s).abs()).max((q - c).abs()).max((s - c).abs());
    }
    outcome(worst <= 1e-8, format!("max pairwise |ΔJ| = {worst:.2e}"))
}

fn physical_units() -> Outcome {
    let lt = thermal_length(300.0, &UnitSystem::si()).unwrap();
    let r = rel(lt, 7.6e-6);
    outcome(
        r <= 0.01,
        format!("l_T(300 K) = {:.4} um, l_T/2 = {:.3} um", lt * 1e6, lt * 5e5),
    )
}

fn orbit_enumeration() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0b17);
    let mut matched = 0;
    for _ in 0..10 {
        let l3 = rng.gen_range(0.2..3.0);
        let lt = rng.gen_range(0.2..5.0);
        let cut = rng.gen_range(2.0 * l3..40.0);
        if orbits_match_brute_force(l3, lt, cut).unwrap() {
            matched += 1;
        }
    }
    outcome(matched == 10, format!("{matched}/10 random (l3, lT, cutoff) sets match"))
}

fn derivative_consistency() -> Outcome {
    let zs = log_grid(0.1, 10.0, 9);
    let (f, s) = derivative_mismatch(&zs, 1e-14).unwrap();
    outcome(
        f <= 1e-6 && s <= 1e-6,
        format!("max rel dev force = {f:.2e}, entropy = {s:.2e}"),
    )
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("T=0 limit", 1, zero_temperature),
        ("reflection property", 5, reflection),
        ("mode-sum force equivalence", 30, mode_sum_equivalence),
        ("dual expansions at order 8", 10, dual_expansions),
        ("crossover error peak", 30, crossover),
        ("high-T classicality", 1, classicality),
        ("classical box", 10, classical_box),
        ("single-mode Matsubara regularization", 5, single_mode_regularization),
        ("classical mode-sum asymptote", 1, classical_mode_asymptote),
        ("J triple consistency", 5, j_triple),
        ("physical-units sanity", 1, physical_units),
        ("orbit enumeration", 5, orbit_enumeration),
        ("derivative consistency", 10, derivative_consistency),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let passed = o.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} {:>2} {}: {} [{:.3} s, limit {} s]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            o.detail,
            took.as_secs_f64(),
            limit
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
