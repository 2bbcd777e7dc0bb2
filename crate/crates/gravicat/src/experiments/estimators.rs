//! Closed-form time-scale estimators and the Planck-mass threshold.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{Params, UnitSystem};

/// Two-body oscillation period π√(ℓ³/2GM) of a pair of half-mass lobes
/// released at separation ℓ.
pub fn estimate_period(params: &Params, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    Ok(std::f64::consts::PI * (ell.powi(3) / (2.0 * params.gravity * params.mass)).sqrt())
}

/// Orthogonalization-time estimate ħℓ/GM².
pub fn estimate_delta_t(params: &Params, ell: f64) -> Result<f64> {
    check_ell(ell)?;
    Ok(params.hbar * ell / (params.gravity * params.mass * params.mass))
}

/// Kinematic oracle √(2Dℓ²/GM): the free-fall time for the lobes to close
/// in by one soliton diameter D under their mutual acceleration GM/ℓ².
pub fn kinematic_delta_t(params: &Params, ell: f64, soliton_diameter: f64) -> Result<f64> {
    check_ell(ell)?;
    if !(soliton_diameter.is_finite() && soliton_diameter > 0.0) {
        return Err(Error::Parameter(format!(
            "soliton diameter {soliton_diameter}"
        )));
    }
    Ok((2.0 * soliton_diameter * ell * ell / (params.gravity * params.mass)).sqrt())
}

fn check_ell(ell: f64) -> Result<()> {
    if ell.is_finite() && ell > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("separation ell = {ell}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SuperluminalVerdict {
    /// M below the Planck mass: the telegraph is slower than light.
    Subluminal,
    /// M within [1, 10]·m_P: at threshold order, inside the "a few times"
    /// band where the verdict depends on O(1) prefactors.
    WithinBand,
    /// M above 10·m_P: superluminal for any O(1) prefactor.
    Superluminal,
}

/// Planck-mass threshold analysis. The signalling condition c·δt < ℓ with
/// δt = ħℓ/GM² makes ℓ cancel: c·δt/ℓ = ħc/GM² = (m_P/M)².
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub planck_mass: f64,
    pub mass: f64,
    pub mass_over_planck: f64,
    /// c·δt/ℓ, independent of ℓ.
    pub light_crossing_ratio: f64,
    pub verdict: SuperluminalVerdict,
    /// Band within which the paper's "a few times" qualifier applies.
    pub band: (f64, f64),
}

/// Evaluate the threshold in SI mode. `ell` only checks the algebraic
/// cancellation; the ratio it returns is ℓ-independent.
pub fn superluminal_threshold(params: &Params, ell: f64) -> Result<ThresholdReport> {
    if params.unit_system != UnitSystem::Si {
        return Err(Error::Parameter(
            "superluminal threshold is defined in SI mode".into(),
        ));
    }
    check_ell(ell)?;
    let m_p = params.planck_mass();
    let delta_t = estimate_delta_t(params, ell)?;
    let ratio = params.light_speed * delta_t / ell;
    let x = params.mass / m_p;
    let verdict = if x < 1.0 {
        SuperluminalVerdict::Subluminal
    } else if x <= 10.0 {
        SuperluminalVerdict::WithinBand
    } else {
        SuperluminalVerdict::Superluminal
    };
    Ok(ThresholdReport {
        planck_mass: m_p,
        mass: params.mass,
        mass_over_planck: x,
        light_crossing_ratio: ratio,
        verdict,
        band: (m_p, 10.0 * m_p),
    })
}
