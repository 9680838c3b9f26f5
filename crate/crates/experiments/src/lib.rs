//! Seeded batch experiments over the `diolab` core, each producing a
//! versioned JSON report and optional CSV traces.
//!
//! Sample `i` of a run with seed `s` draws from the stream
//! `derive_seed(s, i)`, so reports do not depend on the thread count.

pub mod config;
pub mod error;
pub mod report;
pub mod runners;

use std::path::Path;
use std::time::Instant;

use serde_json::Value;

pub use config::{Experiment, ExperimentConfig};
pub use error::ExpError;
pub use report::{Failures, Report, Timing, SCHEMA_VERSION};

use report::{from_values, to_values, FINITE_RANGE};
use runners::{boshernitzan, cantor, census, escape, gauss, systole};

/// A finished run: the report plus extra files relative to the output directory.
/// Trace files as `(relative path, contents)`.
pub type Files = Vec<(String, String)>;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub files: Files,
}

impl Outcome {
    /// Writes `report.json` and the trace files under `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), ExpError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.report.to_json_pretty())?;
        for (name, body) in &self.files {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, body)?;
        }
        Ok(())
    }
}

fn caveats(extra: &[&str]) -> Vec<String> {
    std::iter::once(FINITE_RANGE)
        .chain(extra.iter().copied())
        .map(String::from)
        .collect()
}

/// Runs one experiment on the current rayon pool.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, ExpError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut files = Vec::new();
    let (records, summary, failures, notes) = match cfg {
        ExperimentConfig::CantorPatterns(c) => {
            let (r, f) = cantor::run(c)?;
            (to_values(&r), cantor::summarize(c, &r), f, cantor::CAVEATS)
        }
        ExperimentConfig::Boshernitzan(c) => {
            let (r, f) = boshernitzan::run(c)?;
            (to_values(&r), boshernitzan::summarize(&r), f, boshernitzan::CAVEATS)
        }
        ExperimentConfig::DiCensus(c) => {
            let (r, f) = census::run(c)?;
            (to_values(&r), census::summarize(&r), f, census::CAVEATS)
        }
        ExperimentConfig::EscapeMass(c) => {
            let (r, f, extra) = escape::run(c)?;
            files = extra;
            (to_values(&r), escape::summarize(c, &r), f, escape::CAVEATS)
        }
        ExperimentConfig::GaussCheck(c) => {
            let (r, f) = gauss::run(c)?;
            (to_values(&r), gauss::summarize(&r), f, gauss::CAVEATS)
        }
        ExperimentConfig::Systole(c) => {
            let (r, f, extra) = systole::run(c)?;
            files = extra;
            (to_values(&r), systole::summarize(&r), f, systole::CAVEATS)
        }
    };
    failures.check()?;
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: cfg.experiment(),
        seed: cfg.seed(),
        config: cfg.to_json(),
        records,
        summary,
        failures,
        caveats: caveats(notes),
        timing: Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
            threads: rayon::current_num_threads(),
        },
    };
    Ok(Outcome { report, files })
}

/// Rebuilds the config from a report's echo.
pub fn config_of(report: &Report) -> Result<ExperimentConfig, ExpError> {
    ExperimentConfig::from_json(report.experiment, &report.config.to_string())
}

/// The summary block recomputed from the per-sample records alone.
pub fn recompute_summary(report: &Report) -> Result<Value, ExpError> {
    let cfg = config_of(report)?;
    let r = &report.records;
    Ok(match &cfg {
        ExperimentConfig::CantorPatterns(c) => cantor::summarize(c, &from_values(r)?),
        ExperimentConfig::Boshernitzan(_) => boshernitzan::summarize(&from_values(r)?),
        ExperimentConfig::DiCensus(_) => census::summarize(&from_values(r)?),
        ExperimentConfig::EscapeMass(c) => escape::summarize(c, &from_values(r)?),
        ExperimentConfig::GaussCheck(_) => gauss::summarize(&from_values(r)?),
        ExperimentConfig::Systole(_) => systole::summarize(&from_values(r)?),
    })
}
