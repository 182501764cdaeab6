//! Machine-readable verification reports.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub check_id: String,
    pub description: String,
    pub samples: u64,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub elapsed_ms: u64,
}

impl CheckReport {
    /// `passed` is derived as `max_abs_error ≤ tolerance` (false for NaN).
    pub fn new(
        check_id: impl Into<String>,
        description: impl Into<String>,
        samples: usize,
        max_abs_error: f64,
        tolerance: f64,
        elapsed_ms: u64,
    ) -> Self {
        // JSON has no infinities or NaN
        let max_abs_error = if max_abs_error.is_finite() { max_abs_error } else { f64::MAX };
        Self {
            check_id: check_id.into(),
            description: description.into(),
            samples: samples as u64,
            max_abs_error,
            tolerance,
            passed: max_abs_error <= tolerance,
            elapsed_ms,
        }
    }
}

/// Everything needed to reproduce a run, plus its check reports sorted by id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub samples: u64,
    pub a: Vec<f64>,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl RunManifest {
    pub fn new(suite: impl Into<String>, seed: u64, samples: usize, a: Vec<f64>, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|x, y| x.check_id.cmp(&y.check_id));
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.into(),
            seed,
            samples: samples as u64,
            a,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// JSON Schema of [`RunManifest`].
pub fn report_schema() -> serde_json::Value {
    serde_json::to_value(schemars::schema_for!(RunManifest)).expect("schema serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_follows_tolerance() {
        assert!(CheckReport::new("x", "", 1, 1e-12, 1e-10, 0).passed);
        assert!(!CheckReport::new("x", "", 1, 1e-9, 1e-10, 0).passed);
        let nan = CheckReport::new("x", "", 1, f64::NAN, 1e-10, 0);
        assert!(!nan.passed);
        assert_eq!(nan.max_abs_error, f64::MAX);
    }

    #[test]
    fn manifest_sorts_checks() {
        let m = RunManifest::new(
            "all",
            0,
            5,
            vec![1.0],
            vec![CheckReport::new("b", "", 1, 0.0, 0.0, 0), CheckReport::new("a", "", 1, 1.0, 0.0, 0)],
        );
        assert_eq!(m.checks[0].check_id, "a");
        assert!(!m.passed);
        assert_eq!(m.failures().count(), 1);
    }

    #[test]
    fn schema_lists_check_report_fields() {
        let s = report_schema();
        let defs = s.get("$defs").expect("definitions");
        let props = defs["CheckReport"]["properties"].as_object().unwrap();
        let mut keys: Vec<&str> = props.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            ["check_id", "description", "elapsed_ms", "max_abs_error", "passed", "samples", "tolerance"]
        );
    }
}
