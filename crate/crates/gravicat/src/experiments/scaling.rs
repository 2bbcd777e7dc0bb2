//! Scaling sweeps: orthogonalization time vs separation, period vs
//! separation, and the exact mass covariances of the soliton diameter and
//! the orthogonalization time.

use crate::error::Result;
use crate::propagate::rescale_solution;

use super::fits::ScalingFit;
use super::report::ExperimentReport;
use super::setup::{CatLab, LabConfig};

pub struct ScalingSuiteOutput {
    pub report: ExperimentReport,
    pub fits: Vec<ScalingFit>,
}

pub const ELL_SWEEP: [f64; 4] = [6.0, 8.0, 10.0, 14.0];
pub const MASS_SWEEP: [f64; 4] = [0.85, 0.95, 1.05, 1.15];
pub const RESCALE_SWEEP: [f64; 4] = [1.0, 1.2, 1.5, 2.0];

pub fn run_scaling_suite(base: &LabConfig) -> Result<ScalingSuiteOutput> {
    let base_lab = CatLab::prepare(base.clone().with_ell(ELL_SWEEP[3]))?;
    let mut report = ExperimentReport::new("scaling-suite", base_lab.inputs_json());
    let mut fits = Vec::new();

    // --- separation sweep at fixed mass
    let mut ortho_points = Vec::new();
    let mut period_points = Vec::new();
    let mut factor_worst: f64 = 1.0;
    for &ell in &ELL_SWEEP {
        let lab = base_lab.with_separation(ell)?;
        let t_max = 1.3 * lab.period_formula;
        let (_, trace) = lab.evolve(&lab.plus, t_max, &[lab.left.clone()])?;
        let ortho = trace
            .overlap_crossing_time(0, lab.config.ortho_threshold)
            .ok_or_else(|| crate::error::Error::Resolution(format!(
                "no orthogonalization crossing found at ell = {ell}"
            )))?;
        let (t_min, sep_min) = trace.first_lobe_minimum().ok_or_else(|| {
            crate::error::Error::Resolution(format!("no lobe minimum found at ell = {ell}"))
        })?;
        let period = 2.0 * t_min;
        ortho_points.push((ell, ortho));
        period_points.push((ell, period));

        let factor = ortho / lab.delta_t_formula;
        factor_worst = factor_worst.max(factor.max(1.0 / factor));
        report.measure(
            &format!("ortho_time_ell{ell}"),
            ortho,
            "time",
            Some(3.0 * lab.delta_t_formula),
            "measured: overlap-ratio crossing",
        );
        report.measure(
            &format!("period_ell{ell}"),
            period,
            "time",
            Some(2.0 * lab.period_formula),
            "measured: 2× first lobe-separation minimum",
        );
        report.measure(
            &format!("lobe_minimum_ell{ell}"),
            sep_min,
            "length",
            None,
            "measured",
        );
        let sep_ratio = lab.delta_t_formula / period;
        report.criterion(
            &format!("delta_t_much_smaller_than_period_ell{ell}"),
            sep_ratio < 0.3,
            format!("ħℓ/GM² over measured period = {sep_ratio:.3} (needs < 0.3)"),
        );
        let period_factor = period / lab.period_formula;
        report.criterion(
            &format!("period_within_factor_two_ell{ell}"),
            (0.5..=2.0).contains(&period_factor),
            format!(
                "measured T = {period:.2} vs π√(ℓ³/2GM) = {:.2} (factor {period_factor:.3})",
                lab.period_formula
            ),
        );
        report.criterion(
            &format!("ortho_time_within_factor_three_ell{ell}"),
            (1.0 / 3.0..=3.0).contains(&factor),
            format!(
                "measured δt = {ortho:.2} vs ħℓ/GM² = {:.2} (factor {factor:.3})",
                lab.delta_t_formula
            ),
        );
    }

    let ortho_fit = ScalingFit::fit("ortho_time_vs_ell", &ortho_points)?;
    report.criterion(
        "ortho_time_exponent",
        (ortho_fit.exponent - 1.0).abs() <= 0.15,
        format!(
            "δt ∝ ℓ^{:.3} ± {:.3} (needs 1.0 ± 0.15)",
            ortho_fit.exponent, ortho_fit.std_error
        ),
    );
    let period_fit = ScalingFit::fit("period_vs_ell", &period_points)?;
    report.criterion(
        "period_exponent",
        (period_fit.exponent - 1.5).abs() <= 0.15,
        format!(
            "T ∝ ℓ^{:.3} ± {:.3} (needs 1.5 ± 0.15)",
            period_fit.exponent, period_fit.std_error
        ),
    );
    report.measure(
        "ortho_time_prefactor",
        ortho_fit.prefactor,
        "time per length",
        Some(0.25 * super::pinned::ORTHO_TIME_PREFACTOR),
        "pinned-regression",
    );
    report.criterion(
        "ortho_time_prefactor_regression",
        (ortho_fit.prefactor / super::pinned::ORTHO_TIME_PREFACTOR - 1.0).abs() <= 0.25,
        format!(
            "measured prefactor {:.3} vs pinned {:.3}",
            ortho_fit.prefactor,
            super::pinned::ORTHO_TIME_PREFACTOR
        ),
    );

    // --- orthogonalization time vs mass at fixed separation, with the
    // surrogate softening rescaled along the covariance a ∝ M⁻³
    let mut mass_points = Vec::new();
    for &mass in &MASS_SWEEP {
        let cfg = LabConfig {
            mass,
            softening: base.softening / mass.powi(3),
            ell: 10.0,
            ..base.clone()
        };
        let lab = CatLab::prepare(cfg)?;
        let t_max = 0.75 * lab.period_formula;
        let (_, trace) = lab.evolve(&lab.plus, t_max, &[lab.left.clone()])?;
        let ortho = trace
            .overlap_crossing_time(0, lab.config.ortho_threshold)
            .ok_or_else(|| crate::error::Error::Resolution(format!(
                "no orthogonalization crossing found at mass = {mass}"
            )))?;
        mass_points.push((mass, ortho));
        report.measure(
            &format!("ortho_time_mass{mass}"),
            ortho,
            "time",
            None,
            "measured",
        );
    }
    let mass_fit = ScalingFit::fit("ortho_time_vs_mass", &mass_points)?;
    report.criterion(
        "ortho_time_mass_exponent",
        (mass_fit.exponent + 2.0).abs() <= 0.2,
        format!(
            "δt ∝ M^{:.3} ± {:.3} (needs −2.0 ± 0.2)",
            mass_fit.exponent, mass_fit.std_error
        ),
    );

    // --- diameter vs mass through the exact rescaling covariance
    let mut d_points = Vec::new();
    for &mass in &RESCALE_SWEEP {
        let (state, _) = rescale_solution(&base_lab.soliton.state, &base_lab.params, mass)?;
        let d = state.fwhm(0)?;
        d_points.push((mass, d));
        report.measure(&format!("fwhm_mass{mass}"), d, "length", None, "measured");
    }
    let d_fit = ScalingFit::fit("fwhm_vs_mass", &d_points)?;
    report.criterion(
        "diameter_mass_exponent",
        (d_fit.exponent + 3.0).abs() <= 0.05,
        format!(
            "D ∝ M^{:.4} ± {:.4} (needs −3.0 ± 0.05, exact by covariance)",
            d_fit.exponent, d_fit.std_error
        ),
    );

    fits.push(ortho_fit);
    fits.push(period_fit);
    fits.push(mass_fit);
    fits.push(d_fit);
    Ok(ScalingSuiteOutput { report, fits })
}
