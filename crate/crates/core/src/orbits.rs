//! Periodic classical paths between ideal walls.
//!
//! Records collapse sign choices into a multiplicity: it counts the signed
//! winding tuples of the full sum that a record stands for. An interval
//! path (n3) stands for ±n3, a cylinder path (n3, nT ≠ 0) for (±n3, ±nT).

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CasimirError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Interval,
    Cylinder,
    Box,
}

impl OrbitKind {
    pub fn winding_names(&self) -> &'static [&'static str] {
        match self {
            OrbitKind::Interval => &["n3"],
            OrbitKind::Cylinder => &["n3", "nT"],
            OrbitKind::Box => &["n1", "n2", "n3"],
        }
    }
}

/// One periodic path: non-negative representative windings, its length and
/// the number of signed tuples it stands for.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub windings: Vec<i64>,
    pub length: f64,
    pub multiplicity: u32,
}

impl OrbitRecord {
    fn from_components(windings: Vec<i64>, components: &[f64]) -> Self {
        let length_sq: f64 = components.iter().map(|c| c * c).sum();
        let multiplicity = 1u32 << windings.iter().filter(|&&n| n != 0).count();
        OrbitRecord {
            windings,
            length: length_sq.sqrt(),
            multiplicity,
        }
    }
}

/// Orders by length, ties by lexicographic winding tuple.
pub fn orbit_order(a: &OrbitRecord, b: &OrbitRecord) -> Ordering {
    a.length
        .total_cmp(&b.length)
        .then_with(|| a.windings.cmp(&b.windings))
}

fn sorted(mut v: Vec<OrbitRecord>) -> Vec<OrbitRecord> {
    v.sort_by(orbit_order);
    v
}

fn check_positive(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !(*v > 0.0) || v.is_nan() {
            return Err(CasimirError::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// Paths bouncing between two walls a distance `l3` apart: L = 2 n3 l3.
pub fn interval_orbits(l3: f64, max_length: f64) -> Result<Vec<OrbitRecord>> {
    check_positive(&[("l3", l3), ("max_length", max_length)])?;
    let max_sq = max_length * max_length;
    let mut out = Vec::new();
    for n3 in 1i64.. {
        let leg = 2.0 * n3 as f64 * l3;
        if leg * leg > max_sq {
            break;
        }
        out.push(OrbitRecord::from_components(vec![n3], &[leg]));
    }
    Ok(out)
}

/// Paths on the cylinder section of height `l3` and circumference `lt`:
/// L(n3, nT) = √((2 n3 l3)² + (nT lt)²) with n3 ≥ 1.
///
/// The n3 = 0 paths are omitted; they only add a volume term.
pub fn cylinder_orbits(l3: f64, lt: f64, max_length: f64) -> Result<Vec<OrbitRecord>> {
    check_positive(&[("l3", l3), ("lT", lt), ("max_length", max_length)])?;
    let max_sq = max_length * max_length;
    let n3_max = (max_length / (2.0 * l3)).floor() as i64 + 1;
    let rows: Vec<Vec<OrbitRecord>> = (1..=n3_max)
        .into_par_iter()
        .map(|n3| {
            let leg = 2.0 * n3 as f64 * l3;
            let mut row = Vec::new();
            if leg * leg > max_sq {
                return row;
            }
            if lt.is_infinite() {
                row.push(OrbitRecord::from_components(vec![n3, 0], &[leg]));
                return row;
            }
            for nt in 0i64.. {
                let wind = nt as f64 * lt;
                if leg * leg + wind * wind > max_sq {
                    break;
                }
                row.push(OrbitRecord::from_components(vec![n3, nt], &[leg, wind]));
            }
            row
        })
        .collect();
    Ok(sorted(rows.into_iter().flatten().collect()))
}

/// L(n1, n2, n3) = √((2 l1 n1)² + (2 l2 n2)² + (2 l3 n3)²).
pub fn box_orbit_length(n1: i64, n2: i64, n3: i64, l1: f64, l2: f64, l3: f64) -> Result<f64> {
    if n1 == 0 && n2 == 0 && n3 == 0 {
        return Err(CasimirError::Domain(
            "the all-zero winding is not a periodic path".into(),
        ));
    }
    let comps = [
        2.0 * l1 * n1 as f64,
        2.0 * l2 * n2 as f64,
        2.0 * l3 * n3 as f64,
    ];
    Ok(comps.iter().map(|c| c * c).sum::<f64>().sqrt())
}

/// All box paths with non-negative windings (not all zero) and L ≤ max_length.
pub fn box_orbits(l1: f64, l2: f64, l3: f64, max_length: f64) -> Result<Vec<OrbitRecord>> {
    check_positive(&[("l1", l1), ("l2", l2), ("l3", l3), ("max_length", max_length)])?;
    let max_sq = max_length * max_length;
    let n1_max = (max_length / (2.0 * l1)).floor() as i64;
    let rows: Vec<Vec<OrbitRecord>> = (0..=n1_max)
        .into_par_iter()
        .map(|n1| {
            let mut row = Vec::new();
            let c1 = 2.0 * l1 * n1 as f64;
            for n2 in 0i64.. {
                let c2 = 2.0 * l2 * n2 as f64;
                if c1 * c1 + c2 * c2 > max_sq {
                    break;
                }
                for n3 in 0i64.. {
                    let c3 = 2.0 * l3 * n3 as f64;
                    if c1 * c1 + c2 * c2 + c3 * c3 > max_sq {
                        break;
                    }
                    if n1 == 0 && n2 == 0 && n3 == 0 {
                        continue;
                    }
                    row.push(OrbitRecord::from_components(vec![n1, n2, n3], &[c1, c2, c3]));
                }
            }
            row
        })
        .collect();
    Ok(sorted(rows.into_iter().flatten().collect()))
}

/// Lift of a spatial path that also winds `nt` times around the thermal circle.
pub fn thermal_lift(base_length: f64, lt: f64, nt: i64) -> f64 {
    debug_assert!(base_length > 0.0 && lt > 0.0);
    let wind = nt as f64 * lt;
    (base_length * base_length + wind * wind).sqrt()
}

/// Geometries for which the electromagnetic response is a multiple of the
/// scalar one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryCase {
    /// l1, l2 ≫ l3.
    Plates,
    /// l1 ≫ l2, l3: only planar orbits.
    LongBoxPlanar,
    /// Arbitrary box; non-planar orbits mix polarizations.
    GeneralBox,
}

/// Ratio of electromagnetic to scalar response for planar-orbit geometries.
pub fn em_scalar_factor(case: GeometryCase) -> Result<u32> {
    match case {
        GeometryCase::Plates | GeometryCase::LongBoxPlanar => Ok(2),
        GeometryCase::GeneralBox => Err(CasimirError::UnsupportedCase(
            "non-planar orbits mix the two polarizations; no constant factor exists".into(),
        )),
    }
}

/// Writes `windings..., length, multiplicity` rows.
pub fn write_orbits_csv<W: Write>(
    kind: OrbitKind,
    records: &[OrbitRecord],
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = kind.winding_names().to_vec();
    header.extend(["length", "multiplicity"]);
    w.write_record(&header)?;
    for r in records {
        let mut row: Vec<String> = r.windings.iter().map(|n| n.to_string()).collect();
        row.push(format!("{:.16e}", r.length));
        row.push(r.multiplicity.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_examples() {
        let o = interval_orbits(1.0, 5.0).unwrap();
        let lengths: Vec<f64> = o.iter().map(|r| r.length).collect();
        assert_eq!(lengths, vec![2.0, 4.0]);
        assert!(o.iter().all(|r| r.multiplicity == 2));

        assert!(interval_orbits(1.0, 1.9).unwrap().is_empty());

        let o = interval_orbits(0.5, 10.0).unwrap();
        assert_eq!(o.len(), 10);
        for (i, r) in o.iter().enumerate() {
            assert_eq!(r.length, (i + 1) as f64);
        }
    }

    #[test]
    fn cylinder_length_formula() {
        let o = cylinder_orbits(1.0, 1.0, 2.3).unwrap();
        let r = o.iter().find(|r| r.windings == vec![1, 1]).unwrap();
        assert!((r.length - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.multiplicity, 4);
        assert_eq!(thermal_lift(2.0, 1.0, 1), r.length);
    }

    #[test]
    fn cylinder_with_huge_thermal_length_is_the_interval() {
        let a = cylinder_orbits(1.0, 1e9, 40.0).unwrap();
        let b = interval_orbits(1.0, 40.0).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.length, y.length);
            assert_eq!(x.multiplicity, y.multiplicity);
            assert_eq!(x.windings[0], y.windings[0]);
        }
        let c = cylinder_orbits(1.0, f64::INFINITY, 40.0).unwrap();
        assert_eq!(c.len(), b.len());
    }

    #[test]
    fn cylinder_small_grid() {
        // l3 = 1, lT = 2, max 4.5: (1,0)=2, (1,1)=√8, (2,0)=4, (1,2)=(2,1)=√20
        let o = cylinder_orbits(1.0, 2.0, 4.5).unwrap();
        let w: Vec<Vec<i64>> = o.iter().map(|r| r.windings.clone()).collect();
        assert_eq!(
            w,
            vec![vec![1, 0], vec![1, 1], vec![2, 0], vec![1, 2], vec![2, 1]]
        );
        assert_eq!(o[3].length, o[4].length);
    }

    #[test]
    fn box_lengths() {
        let (l1, l2, l3): (f64, f64, f64) = (1.3, 0.7, 0.2);
        let d = (l1 * l1 + l2 * l2 + l3 * l3).sqrt();
        assert!((box_orbit_length(1, 1, 1, l1, l2, l3).unwrap() - 2.0 * d).abs() < 1e-15);
        assert_eq!(box_orbit_length(0, 0, 1, 5.0, 5.0, 1.0).unwrap(), 2.0);
        assert_eq!(box_orbit_length(2, 1, 0, 1.0, 1.0, 9.0).unwrap(), 20f64.sqrt());
        assert!(box_orbit_length(0, 0, 0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn box_enumeration_counts_signed_tuples() {
        let o = box_orbits(1.0, 1.0, 1.0, 2.0 * 3f64.sqrt() + 1e-9).unwrap();
        let total: u32 = o.iter().map(|r| r.multiplicity).sum();
        // signed tuples with n1²+n2²+n3² ≤ 3, excluding the origin
        assert_eq!(total, 6 + 12 + 8);
    }

    #[test]
    fn em_factor_cases() {
        assert_eq!(em_scalar_factor(GeometryCase::Plates).unwrap(), 2);
        assert_eq!(em_scalar_factor(GeometryCase::LongBoxPlanar).unwrap(), 2);
        assert!(matches!(
            em_scalar_factor(GeometryCase::GeneralBox),
            Err(CasimirError::UnsupportedCase(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let o = cylinder_orbits(1.0, 1.0, 2.3).unwrap();
        let mut buf = Vec::new();
        write_orbits_csv(OrbitKind::Cylinder, &o, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "n3,nT,length,multiplicity");
        assert_eq!(lines.next().unwrap(), "1,0,2.0000000000000000e0,2");
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn invalid_inputs() {
        assert!(interval_orbits(0.0, 1.0).is_err());
        assert!(cylinder_orbits(1.0, -1.0, 1.0).is_err());
        assert!(box_orbits(1.0, 1.0, 1.0, f64::NAN).is_err());
    }
}
