use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A property whose deviation exceeded its tolerance in one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub property: String,
    pub trial: usize,
    pub deviation: f64,
}

/// Outcome of a verification run.
///
/// Failures are sorted by property and trial and deviations are keyed by
/// property name, so the serialized report depends only on the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub fd_tol: f64,
    pub failures: Vec<Failure>,
    pub max_deviation: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}
