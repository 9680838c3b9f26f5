use diolab::modular::{verify_gauss_factor, ModularError};
use diolab::rng::{derive_seed, SplitMix64};
use diolab::QuadraticSurd;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::GaussCheckConfig;
use crate::error::ExpError;
use crate::report::Failures;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussRecord {
    pub index: usize,
    /// `(a + b sqrt(d)) / c`, reduced to its fractional part.
    pub start: String,
    pub residuals: Vec<f64>,
    pub max_residual: Option<f64>,
    pub alternates: bool,
    pub crossings: Vec<u64>,
    pub error: Option<String>,
}

/// A random irrational surd in `(0, 1)`.
pub fn random_surd(seed: u64, max_radicand: u64) -> QuadraticSurd {
    let mut rng = SplitMix64::new(seed);
    loop {
        let d = 2 + rng.next_below(max_radicand - 2) as i64;
        let a = rng.next_below(41) as i64 - 20;
        let b = 1 + rng.next_below(9) as i64;
        let c = 1 + rng.next_below(20) as i64;
        if let Ok(s) = QuadraticSurd::from_i64(a, b, c, d) {
            return s.fract();
        }
    }
}

pub fn run(c: &GaussCheckConfig) -> Result<(Vec<GaussRecord>, Failures), ExpError> {
    let starts: Vec<QuadraticSurd> = match &c.starts {
        Some(s) => s
            .iter()
            .map(|x| x.irrational().map(|s| s.fract()))
            .collect::<Result<_, _>>()?,
        None => (0..c.samples)
            .map(|i| random_surd(derive_seed(c.seed, i as u64), c.max_radicand))
            .collect(),
    };
    let records: Vec<GaussRecord> = starts
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let iv = s.enclose(u64::from(c.bits));
            let mut rec = GaussRecord {
                index,
                start: format!("{s:?}"),
                residuals: Vec::new(),
                max_residual: None,
                alternates: false,
                crossings: Vec::new(),
                error: None,
            };
            match verify_gauss_factor(&iv, c.steps, c.bits) {
                Ok(check) => {
                    rec.max_residual = Some(check.max_residual());
                    rec.residuals = check.residuals;
                    rec.alternates = check.alternates;
                    rec.crossings = check.crossings;
                }
                Err(e @ (ModularError::Precision { .. } | ModularError::ShortExpansion { .. })) => {
                    rec.error = Some(e.to_string())
                }
                Err(e) => rec.error = Some(format!("unexpected: {e}")),
            }
            rec
        })
        .collect();
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let total = records.len();
    let first = records.iter().find_map(|r| r.error.clone());
    Ok((records, Failures::new(failed, total).with_first(first)))
}

pub fn summarize(records: &[GaussRecord]) -> Value {
    let ok: Vec<&GaussRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    json!({
        "starts": records.len(),
        "failed": records.len() - ok.len(),
        "max_residual": ok.iter().filter_map(|r| r.max_residual).reduce(f64::max),
        "all_alternate": ok.iter().all(|r| r.alternates),
    })
}

pub const CAVEATS: &[&str] = &[
    "Residuals compare ball enclosures with exact Gauss iterates of one rational point of the start interval; they bound the factor property only along the followed returns.",
];
