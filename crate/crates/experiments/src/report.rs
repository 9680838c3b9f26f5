//! The JSON report shared by all experiments.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Experiment, FAILURE_BUDGET};
use crate::error::ExpError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failures {
    pub count: usize,
    pub total: usize,
    pub budget: f64,
    /// Message of the first failed unit.
    pub first: Option<String>,
}

impl Failures {
    pub fn new(count: usize, total: usize) -> Self {
        Failures {
            count,
            total,
            budget: FAILURE_BUDGET,
            first: None,
        }
    }

    pub fn with_first(mut self, first: Option<String>) -> Self {
        self.first = first;
        self
    }

    /// Errors once more than the budgeted fraction of units failed.
    pub fn check(&self) -> Result<(), ExpError> {
        if self.count as f64 > self.budget * self.total as f64 {
            Err(ExpError::Precision {
                failed: self.count,
                total: self.total,
                budget: 100.0 * self.budget,
                first: self.first.clone().unwrap_or_default(),
            })
        } else {
            Ok(())
        }
    }
}

/// Wall-clock data; left out of determinism comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub experiment: Experiment,
    pub seed: u64,
    pub config: Value,
    pub records: Vec<Value>,
    pub summary: Value,
    pub failures: Failures,
    pub caveats: Vec<String>,
    pub timing: Timing,
}

impl Report {
    /// The report without its timing block, for byte comparisons.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) fn to_values<T: Serialize>(records: &[T]) -> Vec<Value> {
    records
        .iter()
        .map(|r| serde_json::to_value(r).expect("record serializes"))
        .collect()
}

pub(crate) fn from_values<T: serde::de::DeserializeOwned>(records: &[Value]) -> Result<Vec<T>, ExpError> {
    records
        .iter()
        .map(|r| serde_json::from_value(r.clone()).map_err(|e| ExpError::Compute(e.to_string())))
        .collect()
}

pub(crate) const FINITE_RANGE: &str =
    "All quantities are computed over a finite range of parameters; they are evidence for asymptotic or almost-everywhere statements, not verdicts.";
