//! Shared harness for the 1D cat experiments: relax the soliton once,
//! build lobes, cats and the projector, and pick a stable time step.

use serde::Serialize;

use crate::error::Result;
use crate::grid::Grid;
use crate::params::Params;
use crate::potentials::StateDependentPotential;
use crate::propagate::{relax_imaginary, step_real, EvolutionTrace, SolitonProfile, StepperConfig};
use crate::states::{build_cat, left_right_lobes, CatSign, CatSpec, ProjectorLR};
use crate::wavefunction::WaveFunction;

use super::estimators::{estimate_delta_t, estimate_period, kinematic_delta_t};

/// Configuration of the 1D experiment bench.
///
/// The default softening (0.03 length units at M = 1, soliton diameter
/// ≈ 0.7) keeps the lobes far smaller than every standard separation
/// while the kernel tail is already Newtonian at the lobe distances, so
/// the two-body estimates apply cleanly. The scaling sweeps use the
/// tighter [`LabConfig::scaling`] bench. The box covers 8× the largest
/// structure (ℓ + 4D) of the widest sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct LabConfig {
    pub mass: f64,
    pub softening: f64,
    pub ell: f64,
    pub grid_n: usize,
    pub box_length: f64,
    pub relax_tol: f64,
    /// Explicit time step; default picks min(T/2000, 0.1·ħ/max|V|).
    pub dt: Option<f64>,
    pub record_every: usize,
    /// Overlap-ratio threshold defining the measured orthogonalization
    /// time (first time |⟨○_L|ψ⟩| falls to this fraction of its initial
    /// value).
    pub ortho_threshold: f64,
    pub seed: u64,
    pub shots: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            mass: 1.0,
            softening: 0.03,
            ell: 10.0,
            grid_n: 4096,
            box_length: 160.0,
            relax_tol: 1e-10,
            dt: None,
            record_every: 20,
            ortho_threshold: 0.1,
            seed: 42,
            shots: 1000,
        }
    }
}

impl LabConfig {
    /// Bench for the quantitative scaling sweeps: a much tighter soliton
    /// (diameter ≈ 0.45) on a finer grid, so the release transient of the
    /// half-weight lobes no longer bends the measured exponents.
    pub fn scaling() -> Self {
        LabConfig {
            softening: 0.004,
            grid_n: 16384,
            ..LabConfig::default()
        }
    }
}

impl LabConfig {
    pub fn with_ell(mut self, ell: f64) -> Self {
        self.ell = ell;
        self
    }
}


/// Prepared bench: converged soliton, displaced lobes, both cats, the
/// two-lobe projector, and the analytic time scales.
pub struct CatLab {
    pub config: LabConfig,
    pub params: Params,
    pub kind: StateDependentPotential,
    pub grid: Grid,
    pub soliton: SolitonProfile,
    pub left: WaveFunction,
    pub right: WaveFunction,
    pub plus: WaveFunction,
    pub minus: WaveFunction,
    pub projector: ProjectorLR,
    /// Re⟨○_L|○_R⟩ of the displaced lobes.
    pub lobe_overlap: f64,
    pub delta_t_formula: f64,
    pub delta_t_kinematic: f64,
    pub period_formula: f64,
    pub dt: f64,
}

impl CatLab {
    pub fn prepare(config: LabConfig) -> Result<Self> {
        let params = Params::dimensionless(config.mass)?;
        let kind = StateDependentPotential::Newton1dSoft {
            softening: config.softening,
        };
        let grid = Grid::new_1d(config.grid_n, config.box_length)?;
        // any centered bump overlapping the ground state will do
        let guess_width = 0.6 / params.mass.powi(3);
        let guess = WaveFunction::gaussian_1d(grid, 0.0, guess_width)?;
        let soliton = relax_imaginary(&guess, &params, &kind, config.relax_tol)?;

        let spec = CatSpec::new(config.ell, CatSign::Plus);
        let (left, right) = left_right_lobes(&soliton, &spec)?;
        let plus = build_cat(&soliton, &spec)?;
        let minus = build_cat(
            &soliton,
            &CatSpec::new(config.ell, CatSign::Minus),
        )?;
        let projector = ProjectorLR::from_states(&left, &right)?;
        let lobe_overlap = left.inner(&right)?.re;

        let delta_t_formula = estimate_delta_t(&params, config.ell)?;
        let delta_t_kinematic = kinematic_delta_t(&params, config.ell, soliton.fwhm)?;
        let period_formula = estimate_period(&params, config.ell)?;

        let field = kind.evaluate(&soliton.state, &params)?;
        let vmax = field.max_abs() * kind.energy_coupling(&params).abs();
        let dt = config.dt.unwrap_or_else(|| {
            let by_period = period_formula / 2000.0;
            let by_phase = 0.1 * params.hbar / vmax.max(1e-12);
            by_period.min(by_phase)
        });

        Ok(CatLab {
            config,
            params,
            kind,
            grid,
            soliton,
            left,
            right,
            plus,
            minus,
            projector,
            lobe_overlap,
            delta_t_formula,
            delta_t_kinematic,
            period_formula,
            dt,
        })
    }

    /// Rebuild the bench at a different lobe separation, reusing the
    /// already-converged soliton.
    pub fn with_separation(&self, ell: f64) -> Result<Self> {
        let config = LabConfig {
            ell,
            ..self.config.clone()
        };
        let spec = CatSpec::new(ell, CatSign::Plus);
        let (left, right) = left_right_lobes(&self.soliton, &spec)?;
        let plus = build_cat(&self.soliton, &spec)?;
        let minus = build_cat(&self.soliton, &CatSpec::new(ell, CatSign::Minus))?;
        let projector = ProjectorLR::from_states(&left, &right)?;
        let lobe_overlap = left.inner(&right)?.re;
        Ok(CatLab {
            config,
            params: self.params,
            kind: self.kind,
            grid: self.grid,
            soliton: self.soliton.clone(),
            left,
            right,
            plus,
            minus,
            projector,
            lobe_overlap,
            delta_t_formula: estimate_delta_t(&self.params, ell)?,
            delta_t_kinematic: kinematic_delta_t(&self.params, ell, self.soliton.fwhm)?,
            period_formula: estimate_period(&self.params, ell)?,
            dt: self.dt,
        })
    }

    pub fn stepper(&self, t_max: f64) -> Result<StepperConfig> {
        let n_steps = (t_max / self.dt).ceil().max(1.0) as usize;
        Ok(StepperConfig::new(self.dt, n_steps, self.kind)?
            .record_every(self.config.record_every)?
            .lobe_axis(0))
    }

    /// Evolve under the self-gravitating dynamics.
    pub fn evolve(
        &self,
        psi: &WaveFunction,
        t_max: f64,
        references: &[WaveFunction],
    ) -> Result<(WaveFunction, EvolutionTrace)> {
        let cfg = self.stepper(t_max)?;
        step_real(psi, &self.params, &cfg, references)
    }

    /// Evolve with the nonlinearity switched off (linear control).
    pub fn evolve_linear(
        &self,
        psi: &WaveFunction,
        t_max: f64,
        references: &[WaveFunction],
    ) -> Result<(WaveFunction, EvolutionTrace)> {
        let cfg = StepperConfig::new(self.dt, (t_max / self.dt).ceil().max(1.0) as usize, StateDependentPotential::None)?
            .record_every(self.config.record_every)?
            .lobe_axis(0);
        step_real(psi, &self.params, &cfg, references)
    }

    pub fn inputs_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "grid": { "dim": 1, "n": self.grid.n(), "box_length": self.grid.box_length() },
            "soliton": {
                "energy": self.soliton.energy,
                "chemical_potential": self.soliton.chemical_potential,
                "fwhm": self.soliton.fwhm,
                "rms_width": self.soliton.rms_width,
                "residual": self.soliton.residual,
            },
            "lobe_overlap": self.lobe_overlap,
            "dt": self.dt,
        })
    }
}
