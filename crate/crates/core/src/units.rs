//! Physical constants, plate geometry and the reduced temperature variable.
//!
//! Internally every computation runs in natural units (ħ = c = k_B = 1),
//! where a temperature is an inverse length. SI values only appear at the
//! boundary, through [`UnitSystem`].

use serde::{Deserialize, Serialize};

use crate::error::{CasimirError, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Natural,
    Si,
    /// SI-like bookkeeping with a user supplied ħc or k_B.
    Custom,
}

/// The unit system in which geometry and results are expressed.
///
/// Lengths are always in the system's length unit (metres for SI). Energies
/// are `hbar_c / length`; temperatures convert through `boltzmann`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub mode: UnitMode,
    /// ħc in energy·length.
    pub hbar_c: f64,
    /// k_B in energy/temperature.
    pub boltzmann: f64,
}

impl UnitSystem {
    pub const fn natural() -> Self {
        UnitSystem {
            mode: UnitMode::Natural,
            hbar_c: 1.0,
            boltzmann: 1.0,
        }
    }

    pub fn si() -> Self {
        UnitSystem {
            mode: UnitMode::Si,
            hbar_c: HBAR_SI * SPEED_OF_LIGHT_SI,
            boltzmann: BOLTZMANN_SI,
        }
    }

    /// A system with arbitrary ħc and k_B. Used to probe which results
    /// depend on ħ.
    pub fn custom(hbar_c: f64, boltzmann: f64) -> Result<Self> {
        if !(hbar_c > 0.0 && hbar_c.is_finite() && boltzmann > 0.0 && boltzmann.is_finite()) {
            return Err(CasimirError::Domain(format!(
                "unit constants must be positive and finite (hbar_c={hbar_c}, k_B={boltzmann})"
            )));
        }
        Ok(UnitSystem {
            mode: UnitMode::Custom,
            hbar_c,
            boltzmann,
        })
    }

    pub fn from_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Natural | UnitMode::Custom => Self::natural(),
            UnitMode::Si => Self::si(),
        }
    }

    /// ħc / k_B, the length·temperature product that defines l_T.
    pub fn thermal_constant(&self) -> f64 {
        self.hbar_c / self.boltzmann
    }

    /// Converts a temperature of this system into natural units
    /// (inverse length, same length unit).
    pub fn temperature_to_natural(&self, temperature: f64) -> f64 {
        temperature * self.boltzmann / self.hbar_c
    }

    pub fn temperature_from_natural(&self, temperature: f64) -> f64 {
        temperature * self.hbar_c / self.boltzmann
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

/// Two ideal plates of edge lengths `l1`, `l2` a distance `l3` apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateGeometry {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub temperature: f64,
}

impl PlateGeometry {
    pub fn new(l1: f64, l2: f64, l3: f64, temperature: f64) -> Result<Self> {
        for (name, v) in [("l1", l1), ("l2", l2), ("l3", l3)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CasimirError::InvalidGeometry(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(CasimirError::InvalidGeometry(format!(
                "temperature must be non-negative and finite, got {temperature}"
            )));
        }
        Ok(PlateGeometry {
            l1,
            l2,
            l3,
            temperature,
        })
    }

    /// Plates of unit area; per-area results do not depend on l1, l2.
    pub fn unit_area(l3: f64, temperature: f64) -> Result<Self> {
        Self::new(1.0, 1.0, l3, temperature)
    }

    pub fn area(&self) -> f64 {
        self.l1 * self.l2
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// Re-express the temperature in natural units of `units`.
    pub fn to_natural(&self, units: &UnitSystem) -> Self {
        PlateGeometry {
            temperature: units.temperature_to_natural(self.temperature),
            ..*self
        }
    }

    pub fn from_natural(&self, units: &UnitSystem) -> Self {
        PlateGeometry {
            temperature: units.temperature_from_natural(self.temperature),
            ..*self
        }
    }
}

/// The reduced variable z = 2 l3 / l_T together with l_T itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessState {
    pub z: f64,
    /// `None` encodes an infinite thermal length (T = 0).
    pub thermal_length: Option<f64>,
}

impl DimensionlessState {
    pub fn zero_temperature() -> Self {
        DimensionlessState {
            z: 0.0,
            thermal_length: None,
        }
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.thermal_length.is_none()
    }
}

/// l_T = ħc / (k_B T).
pub fn thermal_length(temperature: f64, units: &UnitSystem) -> Result<f64> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(CasimirError::InfiniteThermalLength(temperature));
    }
    Ok(units.thermal_constant() / temperature)
}

/// z = 2 l3 k_B T / (ħc). T = 0 maps to z = 0 with an infinite thermal length.
pub fn reduced_z(geometry: &PlateGeometry, units: &UnitSystem) -> DimensionlessState {
    if geometry.is_zero_temperature() {
        return DimensionlessState::zero_temperature();
    }
    let lt = units.thermal_constant() / geometry.temperature;
    DimensionlessState {
        z: 2.0 * geometry.l3 / lt,
        thermal_length: Some(lt),
    }
}
