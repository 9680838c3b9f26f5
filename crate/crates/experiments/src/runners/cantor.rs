use diolab::cf::{contains_pattern, expand_interval};
use diolab::rng::derive_seed;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::CantorPatternsConfig;
use crate::error::{config, ExpError};
use crate::report::Failures;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorRecord {
    pub index: usize,
    pub seed: u64,
    pub certified: usize,
    /// Leading certified partial quotients.
    pub prefix: Vec<String>,
    /// 0-based start of the first occurrence of each pattern.
    pub first_occurrence: Vec<Option<usize>>,
    /// Fewer than `cf_depth` terms were certified.
    pub skipped: bool,
}

pub fn run(c: &CantorPatternsConfig) -> Result<(Vec<CantorRecord>, Failures), ExpError> {
    let sampler = c.sampler.build().map_err(config)?;
    let patterns: Vec<Vec<BigInt>> = c
        .patterns
        .iter()
        .map(|p| p.iter().map(|&a| BigInt::from(a)).collect())
        .collect();
    let records: Vec<CantorRecord> = (0..c.samples)
        .into_par_iter()
        .map(|index| {
            let seed = derive_seed(c.seed, index as u64);
            let iv = sampler.sample(c.digits, seed);
            let cf = expand_interval(&iv, c.cf_depth).unwrap_or_default();
            let skipped = cf.certified() < c.cf_depth;
            let first_occurrence = patterns
                .iter()
                .map(|p| if skipped { None } else { contains_pattern(&cf, p) })
                .collect();
            CantorRecord {
                index,
                seed,
                certified: cf.certified(),
                prefix: cf
                    .certified_quotients()
                    .iter()
                    .take(c.prefix_terms)
                    .map(|a| a.to_string())
                    .collect(),
                first_occurrence,
                skipped,
            }
        })
        .collect();
    let failed = records.iter().filter(|r| r.skipped).count();
    let first = records
        .iter()
        .find(|r| r.skipped)
        .map(|r| format!("sample {} certified {} of {} terms", r.index, r.certified, c.cf_depth));
    Ok((records, Failures::new(failed, c.samples).with_first(first)))
}

pub fn summarize(c: &CantorPatternsConfig, records: &[CantorRecord]) -> Value {
    let used = records.iter().filter(|r| !r.skipped).count();
    let patterns: Vec<Value> = c
        .patterns
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let containing = records
                .iter()
                .filter(|r| !r.skipped && r.first_occurrence[k].is_some())
                .count();
            let fraction = (used > 0).then(|| containing as f64 / used as f64);
            json!({ "pattern": p, "containing": containing, "fraction": fraction })
        })
        .collect();
    json!({
        "samples": records.len(),
        "used": used,
        "skipped": records.len() - used,
        "fraction_undefined": used == 0,
        "patterns": patterns,
    })
}

pub const CAVEATS: &[&str] = &[
    "Containment is checked only within the certified prefix of each expansion; a pattern absent there may occur later.",
];
