use std::fmt::Write as _;

use diolab::lattice::{escape_fraction, systole_grid};
use diolab::rational::format_rational;
use diolab::sampler::sample_product;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::census::points;
use crate::config::EscapeMassConfig;
use crate::error::{config, ExpError};
use crate::report::Failures;
use crate::Files;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeRecord {
    pub index: usize,
    pub v: Vec<String>,
    /// One entry per threshold, in grid order.
    pub fractions: Vec<f64>,
    pub undecided: Vec<usize>,
    pub grid_points: usize,
    pub min_systole: Option<f64>,
    pub error: Option<String>,
}

pub fn run(c: &EscapeMassConfig) -> Result<(Vec<EscapeRecord>, Failures, Files), ExpError> {
    let sampler = c.sampler.build().map_err(config)?;
    let pts = points(&c.points, c.samples, c.seed, |s| {
        if c.d == 1 {
            vec![sampler.sample(c.digits, s).lo().clone()]
        } else {
            let (x, y) = sample_product(&sampler, &sampler, c.digits, s);
            vec![x.lo().clone(), y.lo().clone()]
        }
    })?;
    let eps = c.epsilons.values();
    let out: Vec<(EscapeRecord, Option<String>)> = pts
        .par_iter()
        .enumerate()
        .map(|(index, v)| {
            let mut rec = EscapeRecord {
                index,
                v: v.iter().map(format_rational).collect(),
                fractions: Vec::new(),
                undecided: Vec::new(),
                grid_points: 0,
                min_systole: None,
                error: None,
            };
            match systole_grid(v, c.t_max, c.dt, c.norm, c.bits) {
                Ok(grid) => {
                    for &e in &eps {
                        let m = escape_fraction(&grid, e);
                        rec.fractions.push(m.fraction);
                        rec.undecided.push(m.undecided);
                    }
                    rec.grid_points = grid.len();
                    rec.min_systole = grid.iter().map(|g| g.systole.to_f64()).reduce(f64::min);
                    let csv = c.traces.then(|| {
                        let mut s = String::from("t,systole\n");
                        for g in &grid {
                            let _ = writeln!(s, "{},{:.17e}", g.t, g.systole.to_f64());
                        }
                        s
                    });
                    (rec, csv)
                }
                Err(e) => {
                    rec.error = Some(e.to_string());
                    (rec, None)
                }
            }
        })
        .collect();
    let mut files = Vec::new();
    let mut records = Vec::with_capacity(out.len());
    for (rec, csv) in out {
        if let Some(csv) = csv {
            files.push((format!("traces/escape_{:05}.csv", rec.index), csv));
        }
        records.push(rec);
    }
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    let total = records.len();
    let first = records.iter().find_map(|r| r.error.clone());
    Ok((records, Failures::new(failed, total).with_first(first), files))
}

pub fn summarize(c: &EscapeMassConfig, records: &[EscapeRecord]) -> Value {
    let ok: Vec<&EscapeRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    let eps = c.epsilons.values();
    let mean: Vec<Option<f64>> = (0..eps.len())
        .map(|k| (!ok.is_empty()).then(|| ok.iter().map(|r| r.fractions[k]).sum::<f64>() / ok.len() as f64))
        .collect();
    json!({
        "samples": records.len(),
        "failed": records.len() - ok.len(),
        "epsilons": eps,
        "mean_fraction": mean,
    })
}

pub const CAVEATS: &[&str] = &[
    "Fractions are Cesaro averages over a finite time grid; escape of mass is a limit as T grows.",
    "Sampled points are left endpoints of digit cells, so every orbit eventually diverges once e^T exceeds the denominator scale.",
];
