use diolab::lattice::{systole_trace, Refinement, TracePoint};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{parse_point, SystoleConfig};
use crate::error::{compute, ExpError};
use crate::report::Failures;
use crate::Files;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystoleRecord {
    #[serde(flatten)]
    pub point: TracePoint,
    /// Off-grid minimum of this vector, on its first appearance.
    pub refined: Option<Refinement>,
}

pub fn run(c: &SystoleConfig) -> Result<(Vec<SystoleRecord>, Failures, Files), ExpError> {
    let v = parse_point(&c.v)?;
    let trace = systole_trace(&v, c.t0, c.t1, c.dt, c.norm, c.bits).map_err(compute)?;
    let csv = trace.to_csv();
    let mut refinements = trace.refinements.into_iter();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    let records: Vec<SystoleRecord> = trace
        .points
        .into_iter()
        .map(|point| {
            let refined = if seen.contains(&point.coeffs) {
                None
            } else {
                seen.push(point.coeffs.clone());
                refinements.next()
            };
            SystoleRecord { point, refined }
        })
        .collect();
    let total = records.len();
    Ok((records, Failures::new(0, total), vec![("systole.csv".into(), csv)]))
}

pub fn summarize(records: &[SystoleRecord]) -> Value {
    let grid_min = records.iter().map(|r| r.point.systole).reduce(f64::min);
    let refined_min = records
        .iter()
        .filter_map(|r| r.refined.as_ref().map(|f| f.length))
        .reduce(f64::min);
    json!({
        "grid_points": records.len(),
        "grid_min": grid_min,
        "min_length": match (grid_min, refined_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
        "ties": records.iter().filter(|r| r.point.tie).count(),
        "distinct_vectors": records.iter().filter(|r| r.refined.is_some()).count(),
    })
}

pub const CAVEATS: &[&str] = &[
    "The trace samples a finite time window; bounded or divergent behaviour of the orbit is only suggested.",
];
