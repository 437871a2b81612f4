//! Structured pass/fail records.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    #[serde(rename = "check")]
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    /// Informational checks are reported but do not affect the verdict.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            // NaN residuals fail
            passed: residual <= tolerance,
            residual,
            tolerance,
            params: Map::new(),
            informational: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            wall_time: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Adds `name` with the given residual and tolerance.
    pub fn record(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.push(Check::new(name, residual, tolerance));
    }

    /// Records that `value` is at least `bound`; the residual is the shortfall.
    pub fn record_lower_bound(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.push(
            Check::new(name, (bound - value).max(0.0), 0.0)
                .param("value", value)
                .param("bound", bound),
        );
    }

    /// Records an exact integer comparison.
    pub fn record_count(&mut self, name: impl Into<String>, found: usize, expected: usize) {
        self.push(
            Check::new(name, found.abs_diff(expected) as f64, 0.0)
                .param("found", found)
                .param("expected", expected),
        );
    }

    pub fn extend(&mut self, other: VerificationReport) {
        let prefix = other.suite;
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}.{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.informational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed && !c.informational)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}
