//! The contractive single-particle equation: without the nonlinearity a
//! free packet disperses without limit; with it, a localized Gaussian is
//! stationary, and its width is fixed by the stiffness.

use serde::Serialize;

use crate::error::Result;
use crate::grid::Grid;
use crate::params::Params;
use crate::potentials::StateDependentPotential;
use crate::propagate::{relax_imaginary, step_real, StepperConfig};
use crate::wavefunction::WaveFunction;

use super::report::ExperimentReport;

#[derive(Debug, Clone, Serialize)]
pub struct JanossyConfig {
    pub mass: f64,
    pub alpha: f64,
    pub grid_n: usize,
    pub box_length: f64,
    pub relax_tol: f64,
    /// Initial density std for the free-dispersion control.
    pub dispersion_sigma0: f64,
    pub dispersion_time: f64,
}

impl Default for JanossyConfig {
    fn default() -> Self {
        JanossyConfig {
            mass: 1.0,
            alpha: 1.0,
            grid_n: 512,
            box_length: 40.0,
            relax_tol: 1e-10,
            dispersion_sigma0: 0.5,
            dispersion_time: 1.0,
        }
    }
}

pub fn run_janossy(cfg: &JanossyConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "janossy",
        serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null),
    );
    let grid = Grid::new_1d(cfg.grid_n, cfg.box_length)?;
    let params = Params::dimensionless(cfg.mass)?.with_alpha(cfg.alpha)?;

    // (a) stiffness off: analytic free-packet dispersion
    let sigma0 = cfg.dispersion_sigma0;
    let psi0 = WaveFunction::gaussian_1d(grid, 0.0, sigma0 * 2.0f64.sqrt())?;
    let t = cfg.dispersion_time;
    let dt = 2e-3;
    let stepper = StepperConfig::new(dt, (t / dt).round() as usize, StateDependentPotential::None)?
        .record_every(((t / dt) as usize).max(1))?;
    let (free, _) = step_real(&psi0, &params, &stepper, &[])?;
    let spread = params.hbar * t / (2.0 * params.mass * sigma0 * sigma0);
    let sigma_expected = sigma0 * (1.0 + spread * spread).sqrt();
    let sigma_measured = free.axis_std(0);
    let dispersion_err = (sigma_measured - sigma_expected).abs() / sigma_expected;
    report.measure(
        "free_dispersion_width",
        sigma_measured,
        "length",
        Some(0.005 * sigma_expected),
        "analytic-oracle: σ(t) = σ₀√(1 + (ħt/2Mσ₀²)²)",
    );
    report.criterion(
        "free_packet_disperses_analytically",
        dispersion_err <= 0.005,
        format!("width error {dispersion_err:.2e} vs analytic law (needs ≤ 0.5%)"),
    );

    // (b) stiffness on: relaxed state is the oscillator Gaussian and stays
    // put under real-time evolution
    let guess = WaveFunction::gaussian_1d(grid, 0.0, 1.4)?;
    let sol = relax_imaginary(&guess, &params, &StateDependentPotential::Janossy, cfg.relax_tol)?;
    let variance_expected = params.hbar / (2.0 * params.mass.sqrt() * cfg.alpha);
    let analytic = WaveFunction::gaussian_1d(grid, 0.0, (2.0 * variance_expected).sqrt())?;
    let dv = grid.cell_volume();
    let l2: f64 = sol
        .state
        .amplitudes()
        .iter()
        .zip(analytic.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr() * dv)
        .sum::<f64>()
        .sqrt();
    report.measure(
        "relaxed_state_l2_deviation",
        l2,
        "dimensionless",
        Some(1e-4),
        "analytic-oracle: oscillator Gaussian with Mω² = α²",
    );
    report.criterion(
        "relaxed_state_matches_gaussian",
        l2 <= 1e-4,
        format!("L² deviation {l2:.2e} from the analytic Gaussian (needs ≤ 1e−4)"),
    );
    let variance_measured = sol.state.axis_std(0).powi(2);
    report.measure(
        "relaxed_variance",
        variance_measured,
        "length²",
        Some(1e-4 * variance_expected),
        "analytic-oracle: ħ/(2√M·α)",
    );

    // ten oscillator periods of real-time evolution
    let omega = cfg.alpha / params.mass.sqrt();
    let t_max = 10.0 * 2.0 * std::f64::consts::PI / omega;
    let dt_run = 5e-3;
    let cfg_run = StepperConfig::new(dt_run, (t_max / dt_run).ceil() as usize, StateDependentPotential::Janossy)?
        .record_every(200)?;
    let (_, trace) = step_real(&sol.state, &params, &cfg_run, &[sol.state.clone()])?;
    let min_fidelity = trace
        .overlaps
        .iter()
        .map(|row| row[0].norm())
        .fold(f64::INFINITY, f64::min);
    report.measure(
        "stationary_fidelity_min",
        min_fidelity,
        "dimensionless",
        Some(0.999),
        "measured over 10 periods",
    );
    report.criterion(
        "relaxed_state_is_stationary",
        min_fidelity >= 0.999,
        format!("min fidelity {min_fidelity:.6} over 10 periods (needs ≥ 0.999)"),
    );
    report.trace("janossy_stationary", trace);
    Ok(report)
}
