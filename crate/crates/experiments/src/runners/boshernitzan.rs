use diolab::cf::{expand_interval, tail_max};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::BoshernitzanConfig;
use crate::error::ExpError;
use crate::report::Failures;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoshernitzanRecord {
    /// `n` for squares, the exponent `l` for prime powers.
    pub n: u64,
    pub multiplier: String,
    pub certified: usize,
    /// Largest partial quotient in the window after the burn-in.
    pub tail_max: Option<String>,
    pub failed: bool,
}

pub fn run(c: &BoshernitzanConfig) -> Result<(Vec<BoshernitzanRecord>, Failures), ExpError> {
    let x = c.x.irrational()?.fract().enclose(c.bits);
    let end = c.window.map_or(c.depth, |w| (c.burn_in + w).min(c.depth));
    let records: Vec<BoshernitzanRecord> = c
        .multipliers()
        .into_par_iter()
        .map(|(n, m)| {
            let cf = x.scale(&m).frac().ok().and_then(|y| expand_interval(&y, c.depth).ok());
            let certified = cf.as_ref().map_or(0, |cf| cf.certified());
            let tail = cf
                .filter(|cf| cf.certified() >= c.depth)
                .and_then(|cf| tail_max(&cf.truncated(end), c.burn_in).ok());
            BoshernitzanRecord {
                n,
                multiplier: m.to_string(),
                certified,
                failed: tail.is_none(),
                tail_max: tail.map(|t| t.to_string()),
            }
        })
        .collect();
    let failed = records.iter().filter(|r| r.failed).count();
    let total = records.len();
    let first = records
        .iter()
        .find(|r| r.failed)
        .map(|r| format!("n = {} certified {} of {} terms", r.n, r.certified, c.depth));
    Ok((records, Failures::new(failed, total).with_first(first)))
}

pub fn summarize(records: &[BoshernitzanRecord]) -> Value {
    let mut best: Option<BigInt> = None;
    let mut running = Vec::new();
    for r in records {
        let Some(t) = r.tail_max.as_ref().and_then(|t| t.parse::<BigInt>().ok()) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| &t > b) {
            running.push(json!({ "n": r.n, "tail_max": t.to_string() }));
            best = Some(t);
        }
    }
    json!({
        "evaluated": records.len(),
        "failed": records.iter().filter(|r| r.failed).count(),
        "records": running,
        "strict_increases": running.len().saturating_sub(1),
        "max_tail": best.map(|b| b.to_string()),
    })
}

pub const CAVEATS: &[&str] = &[
    "The statement concerns a limsup of partial quotients; the report uses maxima over a finite window of certified terms, so the record sequence is a heuristic proxy.",
];
