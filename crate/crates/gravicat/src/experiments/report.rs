//! Experiment reports: named measurements with units and tolerances,
//! explicit pass/fail criteria, and the raw traces for CSV export.

use serde::Serialize;

use crate::propagate::EvolutionTrace;

#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub units: String,
    /// Tolerance the value was judged against, when it feeds a criterion.
    pub tolerance: Option<f64>,
    /// Where the comparison value comes from: "measured", "formula",
    /// "pinned-regression", "analytic-oracle".
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    /// Input echo (config, grid, physical parameters).
    pub inputs: serde_json::Value,
    pub measurements: Vec<Measurement>,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
    /// Named traces recorded during the experiment; exported as CSV, not
    /// part of the JSON report.
    #[serde(skip)]
    pub traces: Vec<(String, EvolutionTrace)>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, inputs: serde_json::Value) -> Self {
        ExperimentReport {
            schema_version: 1,
            experiment: experiment.to_string(),
            inputs,
            measurements: Vec::new(),
            criteria: Vec::new(),
            passed: true,
            traces: Vec::new(),
        }
    }

    pub fn measure(
        &mut self,
        name: &str,
        value: f64,
        units: &str,
        tolerance: Option<f64>,
        provenance: &str,
    ) {
        self.measurements.push(Measurement {
            name: name.to_string(),
            value,
            units: units.to_string(),
            tolerance,
            provenance: provenance.to_string(),
        });
    }

    pub fn criterion(&mut self, name: &str, passed: bool, detail: String) {
        self.criteria.push(Criterion {
            name: name.to_string(),
            passed,
            detail,
        });
        self.passed &= passed;
    }

    pub fn trace(&mut self, name: &str, trace: EvolutionTrace) {
        self.traces.push((name.to_string(), trace));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.measurements
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.value)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for c in &self.criteria {
            lines.push(format!(
                "[{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        lines
    }
}
