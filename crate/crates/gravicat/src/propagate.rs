//! Time evolution: second-order Strang split-step integration in real
//! time, normalized-gradient-flow relaxation in imaginary time, and the
//! exact mass-covariance rescaling of solutions.
//!
//! Real-time scheme per step: exp(−iV dt/2ħ)·exp(−iT dt/ħ)·exp(−iV dt/2ħ)
//! with the state-dependent V refreshed from the current ψ at each
//! half-step application. A phase factor never changes |ψ|², so the field
//! computed after the kinetic sub-step is still exact for the next step's
//! first half-step; one potential solve per step suffices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::Params;
use crate::potentials::{PotentialField, StateDependentPotential};
use crate::spectral;
use crate::wavefunction::{stable_sum, WaveFunction};

/// Stepper settings. `record_every` is in steps; the initial state and the
/// final step are always recorded.
#[derive(Debug, Clone)]
pub struct StepperConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub potential: StateDependentPotential,
    pub record_every: usize,
    /// Axis along which to record the lobe separation, if any.
    pub lobe_axis: Option<usize>,
}

impl StepperConfig {
    pub fn new(dt: f64, n_steps: usize, potential: StateDependentPotential) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
        }
        if n_steps < 1 {
            return Err(Error::Parameter("n_steps must be >= 1".into()));
        }
        Ok(StepperConfig {
            dt,
            n_steps,
            potential,
            record_every: 1,
            lobe_axis: None,
        })
    }

    pub fn record_every(mut self, every: usize) -> Result<Self> {
        if every < 1 {
            return Err(Error::Parameter("record_every must be >= 1".into()));
        }
        self.record_every = every;
        Ok(self)
    }

    pub fn lobe_axis(mut self, axis: usize) -> Self {
        self.lobe_axis = Some(axis);
        self
    }
}

/// Kinetic, potential, and total energy of a state. The self-sourced
/// Newton term carries its ½ factor in `potential`.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

/// Time series recorded during a run.
#[derive(Debug, Clone, Default)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub energy_total: Vec<f64>,
    pub energy_kinetic: Vec<f64>,
    pub energy_potential: Vec<f64>,
    /// One centroid vector (dim entries) per record.
    pub centroids: Vec<Vec<f64>>,
    /// Lobe separation per record; None when not tracked or not defined.
    pub lobe_separations: Vec<Option<f64>>,
    /// Median-based core separation per record (robust to shed tails).
    pub core_separations: Vec<Option<f64>>,
    /// ⟨ref_i|ψ⟩ per reference state per record.
    pub overlaps: Vec<Vec<Complex64>>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Relative drift of the total energy across the whole trace.
    pub fn energy_drift(&self) -> f64 {
        if self.energy_total.len() < 2 {
            return 0.0;
        }
        let first = self.energy_total[0];
        let scale = first.abs().max(1e-300);
        self.energy_total
            .iter()
            .fold(0.0f64, |m, e| m.max((e - first).abs()))
            / scale
    }

    /// First recorded time at which `|⟨ref_i|ψ⟩|` falls to `threshold` times
    /// its initial value, linearly interpolated between records.
    pub fn overlap_crossing_time(&self, reference: usize, threshold: f64) -> Option<f64> {
        let initial = self.overlaps.first()?.get(reference)?.norm();
        if initial <= 0.0 {
            return None;
        }
        let target = threshold * initial;
        let mut prev: Option<(f64, f64)> = None;
        for (t, row) in self.times.iter().zip(&self.overlaps) {
            let v = row[reference].norm();
            if let Some((t0, v0)) = prev {
                if v0 >= target && v < target {
                    let frac = (v0 - target) / (v0 - v);
                    return Some(t0 + frac * (t - t0));
                }
            }
            prev = Some((*t, v));
        }
        None
    }

    /// Merger minima of the lobe separation: local minima falling below
    /// `depth_fraction` of the initial separation, parabola-refined, with
    /// at most one minimum reported per contiguous dip.
    pub fn lobe_minima(&self, depth_fraction: f64) -> Vec<(f64, f64)> {
        Self::minima_of_series(&self.times, &self.lobe_separations, depth_fraction)
    }

    /// Same extraction on the median-based core separation.
    pub fn core_minima(&self, depth_fraction: f64) -> Vec<(f64, f64)> {
        Self::minima_of_series(&self.times, &self.core_separations, depth_fraction)
    }

    fn minima_of_series(
        times: &[f64],
        separations: &[Option<f64>],
        depth_fraction: f64,
    ) -> Vec<(f64, f64)> {
        let series: Vec<(f64, f64)> = times
            .iter()
            .zip(separations)
            .filter_map(|(t, s)| s.map(|v| (*t, v)))
            .collect();
        let Some(&(_, initial)) = series.first() else {
            return Vec::new();
        };
        let threshold = depth_fraction * initial;
        let mut minima = Vec::new();
        let mut k = 1;
        while k + 1 < series.len() {
            let (_, s0) = series[k - 1];
            let (_t1, s1) = series[k];
            let (_, s2) = series[k + 1];
            if s1 < threshold && s1 <= s0 && s1 <= s2 {
                // deepest record of this dip
                let mut j = k;
                while j + 1 < series.len()
                    && series[j + 1].1 < threshold
                    && series[j + 1].1 <= series[j].1
                {
                    j += 1;
                }
                let (tb, sb) = series[j];
                let refined = if j > 0 && j + 1 < series.len() {
                    let (ta, sa) = series[j - 1];
                    let (tc, sc) = series[j + 1];
                    let denom = sa - 2.0 * sb + sc;
                    if denom > 0.0 {
                        let half = 0.5 * (tc - ta);
                        let offset = (0.25 * (tc - ta) * (sa - sc) / denom).clamp(-half, half);
                        (tb + offset, sb - 0.125 * (sa - sc).powi(2) / denom.max(1e-300))
                    } else {
                        (tb, sb)
                    }
                } else {
                    (tb, sb)
                };
                minima.push(refined);
                // skip ahead until the separation recovers above threshold
                while k + 1 < series.len() && series[k].1 < threshold {
                    k += 1;
                }
            }
            k += 1;
        }
        minima
    }

    /// Time and value of the first merger minimum (separation dipping
    /// below 75% of its initial value).
    pub fn first_lobe_minimum(&self) -> Option<(f64, f64)> {
        self.lobe_minima(0.75).into_iter().next()
    }

    /// Full oscillation period measured between consecutive merger minima,
    /// which is free of the one-time lobe-release transient.
    pub fn lobe_oscillation_period(&self) -> Option<f64> {
        let minima = self.lobe_minima(0.75);
        if minima.len() < 2 {
            return None;
        }
        Some(minima[1].0 - minima[0].0)
    }

    /// Smallest recorded |⟨ref_i|ψ⟩| relative to its initial value, with
    /// the time it occurs.
    pub fn overlap_minimum(&self, reference: usize) -> Option<(f64, f64)> {
        let initial = self.overlaps.first()?.get(reference)?.norm();
        if initial <= 0.0 {
            return None;
        }
        self.times
            .iter()
            .zip(&self.overlaps)
            .map(|(t, row)| (*t, row[reference].norm() / initial))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }
}

fn kinetic_factors(grid: &Grid) -> Vec<f64> {
    // k² per flat index
    let n = grid.n();
    let axis: Vec<f64> = (0..n).map(|j| grid.wavenumber(j).powi(2)).collect();
    match grid.dim() {
        1 => axis,
        _ => {
            let mut out = vec![0.0; grid.len()];
            for i in 0..n {
                for j in 0..n {
                    let base = (i * n + j) * n;
                    let partial = axis[i] + axis[j];
                    for k in 0..n {
                        out[base + k] = partial + axis[k];
                    }
                }
            }
            out
        }
    }
}

fn apply_kinetic(amps: &mut [Complex64], grid: &Grid, phases: &[Complex64]) {
    match grid.dim() {
        1 => spectral::forward_1d(amps),
        _ => spectral::forward_3d(amps, grid.n()),
    }
    for (a, p) in amps.iter_mut().zip(phases) {
        *a *= p;
    }
    match grid.dim() {
        1 => spectral::inverse_1d(amps),
        _ => spectral::inverse_3d(amps, grid.n()),
    }
}

fn apply_potential_phase(amps: &mut [Complex64], field: &PotentialField, factor: f64) {
    // factor = coupling · dt/(2ħ); phase = exp(−i · factor · V)
    for (a, v) in amps.iter_mut().zip(field.values()) {
        *a *= Complex64::from_polar(1.0, -factor * v);
    }
}

fn apply_potential_decay(amps: &mut [Complex64], field: &PotentialField, factor: f64) {
    for (a, v) in amps.iter_mut().zip(field.values()) {
        *a *= (-factor * v).exp();
    }
}

/// Energies of `psi` given an already-evaluated potential field.
pub fn energies_with_field(
    psi: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    field: &PotentialField,
) -> EnergyBreakdown {
    let grid = psi.grid();
    let dv = grid.cell_volume();
    let n_total = grid.len() as f64;
    let k2 = kinetic_factors(grid);
    let spectrum = psi.spectrum();
    let kinetic = params.hbar * params.hbar / (2.0 * params.mass)
        * stable_sum(
            spectrum
                .iter()
                .zip(&k2)
                .map(|(a, k)| k * a.norm_sqr()),
        )
        * dv
        / n_total;
    let coupling = kind.energy_coupling(params);
    let vrho = stable_sum(
        psi.amplitudes()
            .iter()
            .zip(field.values())
            .map(|(a, v)| v * a.norm_sqr()),
    ) * dv;
    let potential = kind.self_energy_factor() * coupling * vrho;
    EnergyBreakdown {
        kinetic,
        potential,
        total: kinetic + potential,
    }
}

/// Energies of `psi`, evaluating the state-dependent field internally.
pub fn energies(
    psi: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
) -> Result<EnergyBreakdown> {
    let field = kind.evaluate(psi, params)?;
    Ok(energies_with_field(psi, params, kind, &field))
}

/// ⟨ψ|H[ψ]|ψ⟩ with the full (unhalved) potential term.
pub fn chemical_potential(
    psi: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    field: &PotentialField,
) -> f64 {
    let e = energies_with_field(psi, params, kind, field);
    e.kinetic + e.potential / kind.self_energy_factor()
}

/// H[ψ]ψ for a frozen field.
fn apply_hamiltonian(
    psi: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    field: &PotentialField,
) -> Vec<Complex64> {
    let grid = psi.grid();
    let k2 = kinetic_factors(grid);
    let mut kin = psi.amplitudes().to_vec();
    match grid.dim() {
        1 => spectral::forward_1d(&mut kin),
        _ => spectral::forward_3d(&mut kin, grid.n()),
    }
    let kfac = params.hbar * params.hbar / (2.0 * params.mass);
    for (a, k) in kin.iter_mut().zip(&k2) {
        *a *= kfac * k;
    }
    match grid.dim() {
        1 => spectral::inverse_1d(&mut kin),
        _ => spectral::inverse_3d(&mut kin, grid.n()),
    }
    let coupling = kind.energy_coupling(params);
    for ((h, a), v) in kin.iter_mut().zip(psi.amplitudes()).zip(field.values()) {
        *h += coupling * v * a;
    }
    kin
}

/// L² norm of (H[ψ] − μ)ψ.
pub fn residual_norm(
    psi: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    field: &PotentialField,
) -> f64 {
    let mu = chemical_potential(psi, params, kind, field);
    let h_psi = apply_hamiltonian(psi, params, kind, field);
    let dv = psi.grid().cell_volume();
    (stable_sum(
        h_psi
            .iter()
            .zip(psi.amplitudes())
            .map(|(h, a)| (h - mu * a).norm_sqr()),
    ) * dv)
        .sqrt()
}

/// Strang split-step real-time evolution. Returns the final state and the
/// recorded trace; norm is never renormalized (its conservation is part of
/// the contract). NaN/Inf at a record point aborts with the last finite
/// snapshot.
pub fn step_real(
    psi0: &WaveFunction,
    params: &Params,
    cfg: &StepperConfig,
    references: &[WaveFunction],
) -> Result<(WaveFunction, EvolutionTrace)> {
    let grid = *psi0.grid();
    let hbar = params.hbar;
    let mut field = cfg.potential.evaluate(psi0, params)?;
    let coupling = cfg.potential.energy_coupling(params);

    // resolution guidance from the operation contract
    let vmax = field.max_abs() * coupling.abs();
    if cfg.dt * vmax / hbar > 0.1 {
        log::warn!(
            "dt·max|V|/ħ = {:.3} exceeds 0.1; phase per half-step is coarse",
            cfg.dt * vmax / hbar
        );
    }
    let k_nyq = std::f64::consts::PI * grid.n() as f64 / grid.box_length();
    let k2_max = grid.dim() as f64 * k_nyq * k_nyq;
    if cfg.dt * hbar * k2_max / (2.0 * params.mass) > 0.5 {
        log::warn!(
            "dt·ħk²max/2M = {:.3} exceeds 0.5; kinetic phases wrap at the grid edge",
            cfg.dt * hbar * k2_max / (2.0 * params.mass)
        );
    }

    let k2 = kinetic_factors(&grid);
    let kin_phase: Vec<Complex64> = k2
        .iter()
        .map(|k| Complex64::from_polar(1.0, -hbar * k * cfg.dt / (2.0 * params.mass)))
        .collect();
    let half_v = coupling * cfg.dt / (2.0 * hbar);

    let mut psi = psi0.clone();
    let mut trace = EvolutionTrace::default();
    let mut last_good = psi.clone();
    let mut record = |psi: &WaveFunction,
                      field: &PotentialField,
                      t: f64,
                      trace: &mut EvolutionTrace|
     -> Result<()> {
        psi.check_finite().map_err(|_| Error::Diverged {
            step: (t / cfg.dt).round() as usize,
            time: t,
            last_good: Box::new(last_good.clone()),
        })?;
        let e = energies_with_field(psi, params, &cfg.potential, field);
        trace.times.push(t);
        trace.norms.push(psi.norm());
        trace.energy_kinetic.push(e.kinetic);
        trace.energy_potential.push(e.potential);
        trace.energy_total.push(e.total);
        trace.centroids.push(psi.expectation_x());
        let lobe = cfg
            .lobe_axis
            .and_then(|axis| psi.lobe_separation(axis).ok());
        trace.lobe_separations.push(lobe);
        let core = cfg
            .lobe_axis
            .and_then(|axis| psi.core_separation(axis).ok());
        trace.core_separations.push(core);
        let mut row = Vec::with_capacity(references.len());
        for r in references {
            row.push(r.inner(psi)?);
        }
        trace.overlaps.push(row);
        last_good = psi.clone();
        Ok(())
    };

    record(&psi, &field, 0.0, &mut trace)?;
    for step in 1..=cfg.n_steps {
        apply_potential_phase(psi.amplitudes_mut(), &field, half_v);
        apply_kinetic(psi.amplitudes_mut(), &grid, &kin_phase);
        field = cfg.potential.evaluate(&psi, params)?;
        apply_potential_phase(psi.amplitudes_mut(), &field, half_v);
        if step % cfg.record_every == 0 || step == cfg.n_steps {
            record(&psi, &field, step as f64 * cfg.dt, &mut trace)?;
        }
    }
    Ok((psi, trace))
}

/// Converged ground state with its scalar diagnostics.
#[derive(Debug, Clone)]
pub struct SolitonProfile {
    pub state: WaveFunction,
    pub params: Params,
    pub potential: StateDependentPotential,
    pub energy: f64,
    pub chemical_potential: f64,
    pub rms_width: f64,
    pub fwhm: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Accepted-step energies, monotone non-increasing per stage.
    pub energy_history: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct RelaxOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub dtau0: f64,
    /// Stop refining dτ below this.
    pub dtau_min: f64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions {
            tol: 1e-10,
            max_iter: 200_000,
            dtau0: 0.5,
            dtau_min: 1e-7,
        }
    }
}

/// Imaginary-time (normalized gradient flow) relaxation to the ground
/// state of the given state-dependent potential.
///
/// Convergence requires both |E_n − E_{n−1}|/|E_n| < tol and the
/// eigen-residual ‖Hψ − μψ‖ < 100·tol. The split-step fixed point carries
/// an O(dτ²) bias, so dτ is halved whenever the energy stalls (or would
/// increase) until the residual target is met.
pub fn relax_imaginary(
    psi0: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    tol: f64,
) -> Result<SolitonProfile> {
    relax_imaginary_with(
        psi0,
        params,
        kind,
        RelaxOptions {
            tol,
            ..RelaxOptions::default()
        },
    )
}

pub fn relax_imaginary_with(
    psi0: &WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    opts: RelaxOptions,
) -> Result<SolitonProfile> {
    let grid = *psi0.grid();
    let hbar = params.hbar;
    let coupling = kind.energy_coupling(params);
    let k2 = kinetic_factors(&grid);
    let residual_target = 100.0 * opts.tol;

    let mut psi = psi0.clone();
    let mut dtau = opts.dtau0;
    let mut field = kind.evaluate(&psi, params)?;
    let mut energy = energies_with_field(&psi, params, kind, &field).total;
    let mut history = vec![energy];
    let mut iterations = 0;
    let make_kin = |dtau: f64| -> Vec<f64> {
        k2.iter()
            .map(|k| (-hbar * k * dtau / (2.0 * params.mass)).exp())
            .collect()
    };
    let mut kin_decay = make_kin(dtau);
    // The split fixed point carries an O(dτ²) bias, so the flow stage only
    // refines dτ a few times before handing over to the polish stage.
    let dtau_floor = (opts.dtau0 / 16.0).max(opts.dtau_min);

    // Stage 1: Strang-split imaginary-time flow with restart-halving.
    while iterations < opts.max_iter {
        iterations += 1;
        let mut trial = psi.clone();
        let half = coupling * dtau / (2.0 * hbar);
        apply_potential_decay(trial.amplitudes_mut(), &field, half);
        {
            let amps = trial.amplitudes_mut();
            match grid.dim() {
                1 => spectral::forward_1d(amps),
                _ => spectral::forward_3d(amps, grid.n()),
            }
            for (a, d) in amps.iter_mut().zip(&kin_decay) {
                *a *= *d;
            }
            match grid.dim() {
                1 => spectral::inverse_1d(amps),
                _ => spectral::inverse_3d(amps, grid.n()),
            }
        }
        apply_potential_decay(trial.amplitudes_mut(), &field, half);
        trial.normalize()?;

        let trial_field = kind.evaluate(&trial, params)?;
        let trial_energy = energies_with_field(&trial, params, kind, &trial_field).total;
        let scale = trial_energy.abs().max(1e-300);

        if trial_energy > energy + 1e-14 * scale {
            // overshoot near convergence: restart the step with smaller dτ
            if dtau <= dtau_floor {
                break;
            }
            dtau *= 0.5;
            kin_decay = make_kin(dtau);
            continue;
        }

        let rel_change = (energy - trial_energy).abs() / scale;
        psi = trial;
        field = trial_field;
        energy = trial_energy;
        history.push(energy);

        if rel_change < opts.tol.max(1e-13) {
            let res = residual_norm(&psi, params, kind, &field);
            if rel_change < opts.tol && res < residual_target {
                return Ok(finish_profile(
                    psi, params, kind, &field, energy, res, iterations, history,
                ));
            }
            if dtau <= dtau_floor {
                break; // stalled at the bias floor: polish
            }
            dtau *= 0.5;
            kin_decay = make_kin(dtau);
        }
    }

    // Stage 2: normalized gradient flow on the residual, preconditioned in
    // both position space (for potential-dominated tail modes) and k-space
    // (for kinetic modes). The fixed point Hψ = μψ is exact, so this stage
    // removes the split bias; the same energy-monotone safeguard applies.
    let kin_fac = hbar * hbar / (2.0 * params.mass);
    let mut step_scale: f64 = 1.0;
    let mut last_rel_change = f64::INFINITY;
    let polish_budget = 3000.min(opts.max_iter.saturating_sub(iterations));
    for _ in 0..polish_budget {
        iterations += 1;
        let mu = chemical_potential(&psi, params, kind, &field);
        let h_psi = apply_hamiltonian(&psi, params, kind, &field);
        let dv = grid.cell_volume();
        let res = (stable_sum(
            h_psi
                .iter()
                .zip(psi.amplitudes())
                .map(|(h, a)| (h - mu * a).norm_sqr()),
        ) * dv)
            .sqrt();
        if res < residual_target && last_rel_change < opts.tol {
            return Ok(finish_profile(
                psi, params, kind, &field, energy, res, iterations, history,
            ));
        }
        let alpha = mu.abs().max(1e-6);
        let mut direction: Vec<Complex64> = h_psi
            .iter()
            .zip(psi.amplitudes())
            .zip(field.values())
            .map(|((h, a), v)| {
                let shifted = coupling * v - mu;
                (h - mu * a) / (alpha + shifted.max(0.0))
            })
            .collect();
        match grid.dim() {
            1 => spectral::forward_1d(&mut direction),
            _ => spectral::forward_3d(&mut direction, grid.n()),
        }
        for (d, k) in direction.iter_mut().zip(&k2) {
            *d *= alpha / (alpha + kin_fac * k);
        }
        match grid.dim() {
            1 => spectral::inverse_1d(&mut direction),
            _ => spectral::inverse_3d(&mut direction, grid.n()),
        }

        let mut accepted = false;
        for _ in 0..40 {
            let amps: Vec<Complex64> = psi
                .amplitudes()
                .iter()
                .zip(&direction)
                .map(|(a, d)| a - step_scale * d)
                .collect();
            let mut trial = WaveFunction::from_raw_parts(grid, amps)?;
            trial.normalize()?;
            let trial_field = kind.evaluate(&trial, params)?;
            let trial_energy = energies_with_field(&trial, params, kind, &trial_field).total;
            let scale = trial_energy.abs().max(1e-300);
            // accept strict decrease, or any step once the energy is flat
            // at machine level but the residual still has to fall
            let slack = if res > 10.0 * residual_target { 0.0 } else { 4.0 * f64::EPSILON * scale };
            if trial_energy <= energy + slack {
                last_rel_change = (energy - trial_energy).abs() / scale;
                psi = trial;
                field = trial_field;
                energy = trial_energy;
                history.push(energy);
                step_scale = (step_scale * 1.3).min(1.0);
                accepted = true;
                break;
            }
            step_scale *= 0.5;
            if step_scale < 1e-8 {
                break;
            }
        }
        if !accepted {
            break;
        }
    }

    let res = residual_norm(&psi, params, kind, &field);
    if res < residual_target {
        return Ok(finish_profile(
            psi, params, kind, &field, energy, res, iterations, history,
        ));
    }
    Err(Error::NotConverged {
        iterations,
        residual: res,
        energy,
        best: Box::new(psi),
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_profile(
    psi: WaveFunction,
    params: &Params,
    kind: &StateDependentPotential,
    field: &PotentialField,
    energy: f64,
    residual: f64,
    iterations: usize,
    history: Vec<f64>,
) -> SolitonProfile {
    let mu = chemical_potential(&psi, params, kind, field);
    let rms = psi.rms_width();
    let fwhm = psi.fwhm(0).unwrap_or(f64::NAN);
    SolitonProfile {
        state: psi,
        params: *params,
        potential: *kind,
        energy,
        chemical_potential: mu,
        rms_width: rms,
        fwhm,
        residual,
        iterations,
        energy_history: history,
    }
}

/// Map a dimensionless-mode solution at mass M onto mass `m_new` with the
/// exact covariance x → x·(M/M_new)³ (and t → t·(M/M_new)⁵ for dynamics):
/// same lattice, rescaled box, renormalized amplitudes.
pub fn rescale_solution(
    psi: &WaveFunction,
    params: &Params,
    m_new: f64,
) -> Result<(WaveFunction, Params)> {
    if params.unit_system != crate::params::UnitSystem::Dimensionless {
        return Err(Error::Parameter(
            "rescale_solution requires dimensionless mode".into(),
        ));
    }
    if !(m_new.is_finite() && m_new > 0.0) {
        return Err(Error::Parameter(format!("target mass {m_new}")));
    }
    let lambda = (params.mass / m_new).powi(3);
    let old_grid = psi.grid();
    let new_len = old_grid.box_length() * lambda;
    let new_grid = match old_grid.dim() {
        1 => Grid::new_1d(old_grid.n(), new_len)?,
        _ => Grid::new_3d(old_grid.n(), new_len)?,
    };
    let rescaled = WaveFunction::from_amplitudes(new_grid, psi.amplitudes().to_vec())?;
    let new_params = params.with_mass(m_new)?;
    // the structure keeps its size in cells; guard against degenerate boxes
    if !new_len.is_finite() || new_len <= 0.0 {
        return Err(Error::Resolution(format!(
            "rescaled box length {new_len} is unusable"
        )));
    }
    let fwhm_cells = rescaled.fwhm(0).unwrap_or(f64::NAN) / new_grid.spacing();
    if !fwhm_cells.is_finite() || fwhm_cells < 4.0 {
        return Err(Error::Resolution(format!(
            "rescaled profile spans only {fwhm_cells:.1} cells"
        )));
    }
    Ok((rescaled, new_params))
}
