//! Log-log power-law fits for the scaling sweeps.

use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares exponent estimate from a log-log regression.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub name: String,
    pub exponent: f64,
    pub std_error: f64,
    pub prefactor: f64,
    /// (x, y) sample points in original (not log) coordinates.
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    /// Fit y = prefactor · x^exponent through at least 4 positive samples.
    pub fn fit(name: &str, points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Parameter(format!(
                "scaling fit `{name}` needs at least 4 points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
            return Err(Error::Parameter(format!(
                "scaling fit `{name}` needs positive samples"
            )));
        }
        let n = points.len() as f64;
        let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
        let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss_res: f64 = lx
            .iter()
            .zip(&ly)
            .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
            .sum();
        let dof = (points.len() - 2) as f64;
        let std_error = (ss_res / dof / sxx).sqrt();
        Ok(ScalingFit {
            name: name.to_string(),
            exponent: slope,
            std_error,
            prefactor: intercept.exp(),
            points: points.to_vec(),
        })
    }
}
