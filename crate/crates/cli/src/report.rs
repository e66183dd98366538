use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One pass/fail check in a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: &'static str, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            passed: value <= tolerance,
            value,
            tolerance,
        }
    }

    pub fn flag(name: &'static str, passed: bool) -> Self {
        Check {
            name,
            passed,
            value: if passed { 1.0 } else { 0.0 },
            tolerance: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
