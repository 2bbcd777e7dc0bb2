//! The telegraph: the receiver measures the two-lobe projector after a
//! few orthogonalization times. In the soliton branches the outcome stays
//! 1; in the cat branches the lobes have moved and the outcome probability
//! collapses. Under linear dynamics the two branch statistics agree
//! identically, so no signal exists.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::propagate::EvolutionTrace;

use super::report::ExperimentReport;
use super::setup::CatLab;

/// Projector expectation per record computed from a trace whose reference
/// states are the two orthonormal projector legs.
fn projector_series(trace: &EvolutionTrace) -> Vec<f64> {
    trace
        .overlaps
        .iter()
        .map(|row| row[0].norm_sqr() + row[1].norm_sqr())
        .collect()
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    match times.iter().position(|&x| x >= t) {
        Some(0) => values[0],
        Some(i) => {
            let frac = (t - times[i - 1]) / (times[i] - times[i - 1]);
            values[i - 1] + frac * (values[i] - values[i - 1])
        }
        None => *values.last().unwrap(),
    }
}

pub fn run_telegraph(lab: &CatLab) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("telegraph", lab.inputs_json());
    let t_max = 4.0 * lab.delta_t_formula;
    let t_star = 3.0 * lab.delta_t_formula;
    report.measure("t_measure", t_star, "time", None, "formula: 3·ħℓ/GM²");

    let refs = [lab.projector.basis()[0].clone(), lab.projector.basis()[1].clone()];
    // branch weights of the σ_x outcomes for finite lobe overlap ε:
    // p± = (1 ± ε)/2, exactly cancelling the cat normalizations
    let w_plus = 0.5 * (1.0 + lab.lobe_overlap);
    let w_minus = 0.5 * (1.0 - lab.lobe_overlap);

    let run = |psi: &crate::wavefunction::WaveFunction,
                   linear: bool|
     -> Result<(Vec<f64>, Vec<f64>, EvolutionTrace)> {
        let (_, trace) = if linear {
            lab.evolve_linear(psi, t_max, &refs)?
        } else {
            lab.evolve(psi, t_max, &refs)?
        };
        Ok((trace.times.clone(), projector_series(&trace), trace))
    };

    // nonlinear branches
    let (times, p_left, trace_left) = run(&lab.left, false)?;
    let (_, p_right, trace_right) = run(&lab.right, false)?;
    let (_, p_plus, trace_plus) = run(&lab.plus, false)?;
    let (_, p_minus, trace_minus) = run(&lab.minus, false)?;

    let p_case_i: Vec<f64> = p_left
        .iter()
        .zip(&p_right)
        .map(|(l, r)| 0.5 * l + 0.5 * r)
        .collect();
    let p_case_ii: Vec<f64> = p_plus
        .iter()
        .zip(&p_minus)
        .map(|(p, m)| w_plus * p + w_minus * m)
        .collect();

    let p_i_star = interpolate(&times, &p_case_i, t_star);
    let p_ii_star = interpolate(&times, &p_case_ii, t_star);
    let distinguishability = (p_i_star - p_ii_star).abs();
    report.measure(
        "p_outcome1_case_i",
        p_i_star,
        "probability",
        Some(0.01),
        "measured at 3·δt",
    );
    report.measure(
        "p_outcome1_case_ii",
        p_ii_star,
        "probability",
        Some(0.1),
        "measured at 3·δt",
    );
    report.measure(
        "distinguishability",
        distinguishability,
        "probability",
        Some(0.9),
        "measured: |P(1|i) − P(1|ii)| at 3·δt",
    );
    report.criterion(
        "case_i_outcome_stays_one",
        p_i_star >= 0.99,
        format!("P(1|case i) = {p_i_star:.6} at t = 3δt (needs ≥ 0.99)"),
    );
    report.criterion(
        "case_ii_outcome_collapses",
        p_ii_star <= 0.1,
        format!("P(1|case ii) = {p_ii_star:.6} at t = 3δt (needs ≤ 0.1)"),
    );
    report.criterion(
        "distinguishability",
        distinguishability >= 0.9,
        format!("TV distance {distinguishability:.4} at t = 3δt (needs ≥ 0.9)"),
    );

    // linear control: identical statistics at every recorded time
    let (_, q_left, _) = run(&lab.left, true)?;
    let (_, q_right, _) = run(&lab.right, true)?;
    let (_, q_plus, _) = run(&lab.plus, true)?;
    let (_, q_minus, _) = run(&lab.minus, true)?;
    let mut max_control = 0.0f64;
    for k in 0..q_left.len() {
        let qi = 0.5 * q_left[k] + 0.5 * q_right[k];
        let qii = w_plus * q_plus[k] + w_minus * q_minus[k];
        max_control = max_control.max((qi - qii).abs());
    }
    report.measure(
        "linear_control_distinguishability",
        max_control,
        "probability",
        Some(1e-3),
        "measured: max over records under G = 0",
    );
    report.criterion(
        "linear_control_no_signal",
        max_control <= 1e-3,
        format!("G = 0 distinguishability {max_control:.3e} (needs ≤ 1e−3)"),
    );

    // sampled single shots at the measurement time
    let mut rng = ChaCha8Rng::seed_from_u64(lab.config.seed);
    let shots = lab.config.shots;
    if shots > 0 {
        let mut ones_i = 0usize;
        for _ in 0..shots {
            let p = if rng.gen_bool(0.5) {
                interpolate(&times, &p_left, t_star)
            } else {
                interpolate(&times, &p_right, t_star)
            };
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                ones_i += 1;
            }
        }
        let mut ones_ii = 0usize;
        for _ in 0..shots {
            let p = if rng.gen_bool(w_plus.clamp(0.0, 1.0)) {
                interpolate(&times, &p_plus, t_star)
            } else {
                interpolate(&times, &p_minus, t_star)
            };
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                ones_ii += 1;
            }
        }
        let f_i = ones_i as f64 / shots as f64;
        let f_ii = ones_ii as f64 / shots as f64;
        let sigma_i = (p_i_star * (1.0 - p_i_star) / shots as f64).sqrt();
        let sigma_ii = (p_ii_star * (1.0 - p_ii_star) / shots as f64).sqrt();
        report.measure("sampled_frequency_case_i", f_i, "probability", None, "sampled");
        report.measure("sampled_frequency_case_ii", f_ii, "probability", None, "sampled");
        let i_ok = (f_i - p_i_star).abs() <= 3.0 * sigma_i + 1.0 / shots as f64;
        let ii_ok = (f_ii - p_ii_star).abs() <= 3.0 * sigma_ii + 1.0 / shots as f64;
        report.criterion(
            "sampled_shots_within_3_sigma",
            i_ok && ii_ok,
            format!(
                "case i {f_i:.4} vs {p_i_star:.4} (σ={sigma_i:.4}); case ii {f_ii:.4} vs {p_ii_star:.4} (σ={sigma_ii:.4})"
            ),
        );
    }

    report.trace("projector_case_left", trace_left);
    report.trace("projector_case_right", trace_right);
    report.trace("projector_case_plus", trace_plus);
    report.trace("projector_case_minus", trace_minus);
    Ok(report)
}
