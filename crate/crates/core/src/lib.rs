//! Finite-temperature Casimir free energy of ideal parallel plates from the
//! periodic-orbit lattice, with independent expansion, mode-sum and
//! classical-box checks.

pub mod classical_box;
pub mod error;
pub mod expansion;
mod kernels;
pub mod lattice;
pub mod matsubara;
pub mod orbits;
pub mod quadrature;
pub mod selftest;
pub mod series;
pub mod units;

pub use error::{CasimirError, Result};
pub use lattice::{FieldKind, PhysicalThermo, ReducedThermo};
pub use series::{Method, SeriesValue};
pub use units::{DimensionlessState, PlateGeometry, UnitMode, UnitSystem};
