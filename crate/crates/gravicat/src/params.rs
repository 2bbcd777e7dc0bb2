//! Physical constants and unit systems.
//!
//! Two modes are supported. SI mode carries CODATA constants in SI units.
//! Dimensionless mode sets ħ = G = 1 and measures mass in units of a
//! reference mass, so the natural scales below all equal one at M = 1.
//! Mass stays a free parameter in dimensionless mode; sweeping it (or
//! rescaling a solution) probes the equation's exact mass covariance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 values.
pub const HBAR_SI: f64 = 1.054_571_817e-34; // J s
pub const G_SI: f64 = 6.674_30e-11; // m^3 kg^-1 s^-2
pub const C_SI: f64 = 2.997_924_58e8; // m / s

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitSystem {
    Si,
    Dimensionless,
}

impl std::fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UnitSystem::Si => write!(f, "SI"),
            UnitSystem::Dimensionless => write!(f, "dimensionless"),
        }
    }
}

impl std::str::FromStr for UnitSystem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "SI" | "si" => Ok(UnitSystem::Si),
            "dimensionless" => Ok(UnitSystem::Dimensionless),
            other => Err(format!("unknown unit system `{other}`")),
        }
    }
}

/// Physical parameters of a run: ħ, G, M, c and the contractive-potential
/// stiffness `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub hbar: f64,
    pub gravity: f64,
    pub mass: f64,
    pub light_speed: f64,
    /// Stiffness of the contractive ½α²(x − ⟨x⟩)² potential.
    pub alpha: f64,
    pub unit_system: UnitSystem,
}

impl Params {
    /// Dimensionless mode: ħ = G = 1, mass in reference-mass units.
    pub fn dimensionless(mass: f64) -> Result<Self> {
        Params {
            hbar: 1.0,
            gravity: 1.0,
            mass,
            light_speed: 1.0,
            alpha: 0.0,
            unit_system: UnitSystem::Dimensionless,
        }
        .validated()
    }

    /// SI mode with CODATA constants and the given mass in kilograms.
    pub fn si(mass_kg: f64) -> Result<Self> {
        Params {
            hbar: HBAR_SI,
            gravity: G_SI,
            mass: mass_kg,
            light_speed: C_SI,
            alpha: 0.0,
            unit_system: UnitSystem::Si,
        }
        .validated()
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::Parameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        self.mass = mass;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("G", self.gravity),
            ("M", self.mass),
            ("c", self.light_speed),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        if self.alpha < 0.0 || !self.alpha.is_finite() {
            return Err(Error::Parameter(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        Ok(self)
    }

    /// Natural length ħ²/(G M³): the self-gravitating ground-state scale.
    pub fn natural_length(&self) -> f64 {
        self.hbar * self.hbar / (self.gravity * self.mass.powi(3))
    }

    /// Natural time ħ³/(G² M⁵).
    pub fn natural_time(&self) -> f64 {
        self.hbar.powi(3) / (self.gravity.powi(2) * self.mass.powi(5))
    }

    /// Natural energy G² M⁵/ħ².
    pub fn natural_energy(&self) -> f64 {
        self.gravity.powi(2) * self.mass.powi(5) / (self.hbar * self.hbar)
    }

    /// Planck mass √(ħc/G).
    pub fn planck_mass(&self) -> f64 {
        (self.hbar * self.light_speed / self.gravity).sqrt()
    }
}
