use proptest::prelude::*;

use casimir_core::expansion::{auto_eval, delta_expansion};
use casimir_core::lattice::{self, reduced_thermo_decomposed, reduced_thermo_direct};
use casimir_core::orbits::{cylinder_orbits, interval_orbits, orbit_order};
use casimir_core::units::{reduced_z, thermal_length, PlateGeometry, UnitSystem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_holds(lz in -3.0f64..3.0) {
        let z = 10f64.powf(lz);
        let a = lattice::delta_of_z(z, 1e-12).unwrap();
        let b = lattice::delta_of_z(1.0 / z, 1e-12).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.tail_bound + b.tail_bound);
    }

    #[test]
    fn routes_agree(lz in -2.5f64..2.5) {
        let z = 10f64.powf(lz);
        let d = reduced_thermo_direct(z, 1e-12, None).unwrap();
        let c = reduced_thermo_decomposed(z, 1e-12).unwrap();
        for (x, y) in [(d.a_hat, c.a_hat), (d.f_hat, c.f_hat), (d.e_hat, c.e_hat), (d.s_hat, c.s_hat)] {
            prop_assert!(x.agrees_with(&y, 1e-15), "z={} {:?} {:?}", z, x, y);
        }
        prop_assert!(d.a_hat.value < 0.0);
        prop_assert!(d.s_hat.value >= 0.0);
    }

    #[test]
    fn lattice_matches_expansions(lz in -3.0f64..3.0) {
        let z = 10f64.powf(lz);
        let l = lattice::a_hat_lattice(z, 1e-13).unwrap();
        let e = auto_eval(z, 1e-13).unwrap();
        prop_assert!((l.value - e.value).abs() < 1e-12 * l.value.abs().max(1.0));
    }

    #[test]
    fn delta_series_is_monotone_in_order(z in 1.0f64..4.0, k in 0usize..6) {
        let a = delta_expansion(z, k).unwrap().value;
        let b = delta_expansion(z, k + 1).unwrap().value;
        prop_assert!(b >= a);
    }

    #[test]
    fn z_monotone(l3 in 1e-7f64..1e-4, t in 1.0f64..2000.0, bump in 1.001f64..2.0) {
        let u = UnitSystem::si();
        let z = |l: f64, tt: f64| reduced_z(&PlateGeometry::unit_area(l, tt).unwrap(), &u).z;
        prop_assert!(z(l3 * bump, t) > z(l3, t));
        prop_assert!(z(l3, t * bump) > z(l3, t));
        let lt = thermal_length(t, &u).unwrap();
        prop_assert!((lt * z(l3, t) - 2.0 * l3).abs() <= 1e-12 * l3);
    }

    #[test]
    fn cylinder_orbits_sorted_and_bounded(l3 in 0.2f64..3.0, lt in 0.2f64..5.0, cut in 1.0f64..30.0) {
        let o = cylinder_orbits(l3, lt, cut).unwrap();
        prop_assert!(o.iter().all(|r| r.length <= cut && r.length > 0.0));
        prop_assert!(o.windows(2).all(|w| orbit_order(&w[0], &w[1]).is_le()));
        let far = cylinder_orbits(l3, 10.0 * cut + 1.0, cut).unwrap();
        let line = interval_orbits(l3, cut).unwrap();
        let strip = |v: Vec<casimir_core::orbits::OrbitRecord>| {
            v.into_iter().map(|r| (r.windings[0], r.length, r.multiplicity)).collect::<Vec<_>>()
        };
        prop_assert_eq!(strip(far), strip(line));
    }
}
