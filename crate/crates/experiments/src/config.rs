//! Experiment configurations, read from JSON and checked before any work starts.

use std::fmt;

use diolab::lattice::NormKind;
use diolab::rational::parse_rational;
use diolab::sampler::{Sampler, SamplerSpec};
use diolab::QuadraticSurd;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{config, ExpError};

/// Average growth of `ln q_n` per partial quotient for almost every real.
pub const LEVY: f64 = 1.186_569_110_415_625;

/// Nats of interval width spent per certified partial quotient in the
/// Boshernitzan precision rule; about 1.5 times the typical `2 * LEVY`.
pub const NATS_PER_TERM: f64 = 3.6;

/// Largest tolerated fraction of failed units before a run aborts.
pub const FAILURE_BUDGET: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    CantorPatterns,
    Boshernitzan,
    DiCensus,
    EscapeMass,
    GaussCheck,
    Systole,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::CantorPatterns => "cantor_patterns",
            Experiment::Boshernitzan => "boshernitzan",
            Experiment::DiCensus => "di_census",
            Experiment::EscapeMass => "escape_mass",
            Experiment::GaussCheck => "gauss_check",
            Experiment::Systole => "systole",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A real number given exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NumberSpec {
    /// `(sqrt 5 - 1) / 2`.
    Golden,
    /// `(a + b sqrt d) / c`.
    Surd { a: i64, b: i64, c: i64, d: i64 },
    Rational { value: String },
}

impl NumberSpec {
    /// The surd, or a config error for rational input.
    pub fn irrational(&self) -> Result<QuadraticSurd, ExpError> {
        match self {
            NumberSpec::Golden => Ok(QuadraticSurd::golden_conjugate()),
            NumberSpec::Surd { a, b, c, d } => QuadraticSurd::from_i64(*a, *b, *c, *d).map_err(config),
            NumberSpec::Rational { value } => Err(ExpError::Config(format!(
                "rational input {value}: the experiment needs an irrational number"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Multipliers {
    /// `n^2` for `n = 1..=n_max`.
    #[default]
    Squares,
    /// `p^l` for `l = 1..=max_exp`.
    PrimePowers { p: u64, max_exp: u32 },
}

/// A list of thresholds, or `count` values `max, max * ratio, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonGrid {
    List(Vec<f64>),
    Geometric { max: f64, ratio: f64, count: usize },
}

impl EpsilonGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            EpsilonGrid::List(v) => v.clone(),
            EpsilonGrid::Geometric { max, ratio, count } => {
                (0..*count).map(|k| max * ratio.powi(k as i32)).collect()
            }
        }
    }
}

fn cantor() -> SamplerSpec {
    SamplerSpec::Cantor
}

fn default_prefix() -> usize {
    32
}

fn default_bits() -> u32 {
    256
}

fn default_lattice_bits() -> u32 {
    128
}

fn default_gamma() -> Vec<String> {
    vec!["1/3".into(), "1/3".into()]
}

fn default_radicand() -> u64 {
    100
}

fn default_dim() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorPatternsConfig {
    #[serde(default)]
    pub seed: u64,
    pub samples: usize,
    #[serde(default = "cantor")]
    pub sampler: SamplerSpec,
    /// Digits `D` per sample.
    pub digits: usize,
    pub cf_depth: usize,
    pub patterns: Vec<Vec<u64>>,
    /// Quotients of each certified prefix copied into the report.
    #[serde(default = "default_prefix")]
    pub prefix_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoshernitzanConfig {
    #[serde(default)]
    pub seed: u64,
    pub x: NumberSpec,
    /// Width of the enclosure of `x` is `2^-bits`.
    pub bits: u64,
    pub n_max: u64,
    pub depth: usize,
    #[serde(default)]
    pub burn_in: usize,
    /// Terms after `burn_in` that enter the tail maximum; all remaining by default.
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub multipliers: Multipliers,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiCensusConfig {
    #[serde(default)]
    pub seed: u64,
    /// Explicit points of the 2-torus as rational strings; overrides sampling.
    #[serde(default)]
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub samples: usize,
    #[serde(default = "cantor")]
    pub sampler: SamplerSpec,
    /// Second factor of the product sampler; the first one is reused if absent.
    #[serde(default)]
    pub sampler_y: Option<SamplerSpec>,
    #[serde(default)]
    pub digits: usize,
    /// Largest `N` of the dyadic grid `1, 2, 4, ...`.
    pub n_max: u64,
    /// Shift of the second-type Cassels scan.
    #[serde(default = "default_gamma")]
    pub gamma: Vec<String>,
    /// Range of `n` for the Cassels and Littlewood scans.
    pub h: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EscapeMassConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub samples: usize,
    #[serde(default = "cantor")]
    pub sampler: SamplerSpec,
    #[serde(default)]
    pub digits: usize,
    #[serde(default = "default_dim")]
    pub d: usize,
    pub epsilons: EpsilonGrid,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default)]
    pub norm: NormKind,
    #[serde(default = "default_lattice_bits")]
    pub bits: u32,
    /// Write one `t,systole` CSV per sample.
    #[serde(default)]
    pub traces: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussCheckConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub samples: usize,
    /// Returns followed per start.
    pub steps: usize,
    #[serde(default = "default_bits")]
    pub bits: u32,
    /// Radicands of random surds are drawn below this bound.
    #[serde(default = "default_radicand")]
    pub max_radicand: u64,
    /// Explicit starts, used instead of random surds.
    #[serde(default)]
    pub starts: Option<Vec<NumberSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystoleConfig {
    #[serde(default)]
    pub seed: u64,
    pub v: Vec<String>,
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    #[serde(default)]
    pub norm: NormKind,
    #[serde(default = "default_lattice_bits")]
    pub bits: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    CantorPatterns(CantorPatternsConfig),
    Boshernitzan(BoshernitzanConfig),
    DiCensus(DiCensusConfig),
    EscapeMass(EscapeMassConfig),
    GaussCheck(GaussCheckConfig),
    Systole(SystoleConfig),
}

macro_rules! each {
    ($self:expr, $c:ident => $body:expr) => {
        match $self {
            ExperimentConfig::CantorPatterns($c) => $body,
            ExperimentConfig::Boshernitzan($c) => $body,
            ExperimentConfig::DiCensus($c) => $body,
            ExperimentConfig::EscapeMass($c) => $body,
            ExperimentConfig::GaussCheck($c) => $body,
            ExperimentConfig::Systole($c) => $body,
        }
    };
}

impl ExperimentConfig {
    /// Parses the JSON for `experiment`. An `"experiment"` key, if present, must agree.
    pub fn from_json(experiment: Experiment, text: &str) -> Result<Self, ExpError> {
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(config)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| ExpError::Config("config must be a JSON object".into()))?;
        if let Some(name) = obj.remove("experiment") {
            if name.as_str() != Some(experiment.name()) {
                return Err(ExpError::Config(format!(
                    "config is for {name}, not {experiment}"
                )));
            }
        }
        fn de<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, ExpError> {
            serde_json::from_value(v).map_err(config)
        }
        let cfg = match experiment {
            Experiment::CantorPatterns => ExperimentConfig::CantorPatterns(de(value)?),
            Experiment::Boshernitzan => ExperimentConfig::Boshernitzan(de(value)?),
            Experiment::DiCensus => ExperimentConfig::DiCensus(de(value)?),
            Experiment::EscapeMass => ExperimentConfig::EscapeMass(de(value)?),
            Experiment::GaussCheck => ExperimentConfig::GaussCheck(de(value)?),
            Experiment::Systole => ExperimentConfig::Systole(de(value)?),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn experiment(&self) -> Experiment {
        match self {
            ExperimentConfig::CantorPatterns(_) => Experiment::CantorPatterns,
            ExperimentConfig::Boshernitzan(_) => Experiment::Boshernitzan,
            ExperimentConfig::DiCensus(_) => Experiment::DiCensus,
            ExperimentConfig::EscapeMass(_) => Experiment::EscapeMass,
            ExperimentConfig::GaussCheck(_) => Experiment::GaussCheck,
            ExperimentConfig::Systole(_) => Experiment::Systole,
        }
    }

    pub fn seed(&self) -> u64 {
        each!(self, c => c.seed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        each!(self, c => c.seed = seed)
    }

    /// The config as JSON, with the experiment name.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = each!(self, c => serde_json::to_value(c).expect("config serializes"));
        v.as_object_mut()
            .expect("configs are objects")
            .insert("experiment".into(), self.experiment().name().into());
        v
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        match self {
            ExperimentConfig::CantorPatterns(c) => c.validate(),
            ExperimentConfig::Boshernitzan(c) => c.validate(),
            ExperimentConfig::DiCensus(c) => c.validate(),
            ExperimentConfig::EscapeMass(c) => c.validate(),
            ExperimentConfig::GaussCheck(c) => c.validate(),
            ExperimentConfig::Systole(c) => c.validate(),
        }
    }
}

fn need(ok: bool, msg: impl Into<String>) -> Result<(), ExpError> {
    if ok {
        Ok(())
    } else {
        Err(ExpError::Config(msg.into()))
    }
}

pub(crate) fn parse_point(p: &[String]) -> Result<Vec<BigRational>, ExpError> {
    p.iter()
        .map(|s| parse_rational(s).ok_or_else(|| ExpError::Config(format!("not a rational: {s}"))))
        .collect()
}

fn build_sampler(s: &SamplerSpec) -> Result<Sampler, ExpError> {
    s.build().map_err(config)
}

impl CantorPatternsConfig {
    /// Certified terms expected from `digits` digits of the sampler's base.
    pub fn expected_depth(&self) -> Result<f64, ExpError> {
        let base = build_sampler(&self.sampler)?.base();
        Ok(self.digits as f64 * f64::from(base).ln() / (2.0 * LEVY))
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        need(self.digits > 0, "digits must be positive")?;
        need(self.cf_depth > 0, "cf_depth must be positive")?;
        need(!self.patterns.is_empty(), "pattern list is empty")?;
        need(
            self.patterns.iter().all(|p| !p.is_empty() && p.iter().all(|&a| a >= 1)),
            "patterns must be nonempty lists of positive integers",
        )?;
        let expected = self.expected_depth()?;
        need(
            expected >= self.cf_depth as f64,
            format!(
                "{} digits give about {expected:.0} certified terms, fewer than cf_depth {}",
                self.digits, self.cf_depth
            ),
        )
    }
}

impl BoshernitzanConfig {
    /// `ln` of the largest multiplier.
    pub fn ln_max_multiplier(&self) -> f64 {
        match &self.multipliers {
            Multipliers::Squares => 2.0 * (self.n_max as f64).ln(),
            Multipliers::PrimePowers { p, max_exp } => f64::from(*max_exp) * (*p as f64).ln(),
        }
    }

    pub fn multipliers(&self) -> Vec<(u64, num_bigint::BigInt)> {
        match &self.multipliers {
            Multipliers::Squares => (1..=self.n_max)
                .map(|n| (n, num_bigint::BigInt::from(n) * n))
                .collect(),
            Multipliers::PrimePowers { p, max_exp } => (1..=*max_exp)
                .map(|l| (u64::from(l), num_bigint::BigInt::from(*p).pow(l)))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        self.x.irrational()?;
        need(self.bits > 0, "bits must be positive")?;
        need(self.depth > 0, "depth must be positive")?;
        need(self.burn_in < self.depth, "burn_in must be below depth")?;
        need(self.window != Some(0), "window must be positive")?;
        match &self.multipliers {
            Multipliers::Squares => need(self.n_max > 0, "n_max must be positive")?,
            Multipliers::PrimePowers { p, max_exp } => {
                need(*max_exp > 0, "max_exp must be positive")?;
                need(
                    diolab::rational::prime_factors(*p) == vec![*p],
                    format!("{p} is not prime"),
                )?;
            }
        }
        // width(x) * max multiplier < exp(-K * depth)
        let ln_width = -(self.bits as f64) * std::f64::consts::LN_2 + self.ln_max_multiplier();
        let budget = -NATS_PER_TERM * self.depth as f64;
        need(
            ln_width < budget,
            format!(
                "precision rule violated: ln(width * max multiplier) = {ln_width:.1} is not below -{NATS_PER_TERM} * depth = {budget:.1}"
            ),
        )
    }
}

fn check_points(points: &[Vec<String>], d: usize) -> Result<(), ExpError> {
    for p in points {
        need(p.len() == d, format!("point {p:?} must have {d} coordinates"))?;
        parse_point(p)?;
    }
    Ok(())
}

impl DiCensusConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        need(self.n_max > 0, "n_max must be positive")?;
        need(self.h > 0, "h must be positive")?;
        need(self.n_max <= 1 << 16, "n_max above 2^16 makes the N^2 scan too long")?;
        need(self.gamma.len() == 2, "gamma must have two coordinates")?;
        parse_point(&self.gamma)?;
        match &self.points {
            Some(p) => check_points(p, 2),
            None => {
                build_sampler(&self.sampler)?;
                if let Some(s) = &self.sampler_y {
                    build_sampler(s)?;
                }
                need(self.samples == 0 || self.digits > 0, "digits must be positive")
            }
        }
    }
}

impl EscapeMassConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        need(self.d == 1 || self.d == 2, "d must be 1 or 2")?;
        need(self.t_max > 0.0 && self.t_max.is_finite(), "t_max must be positive")?;
        need(self.dt > 0.0 && self.dt.is_finite(), "dt must be positive")?;
        need(self.t_max / self.dt <= 1e6, "grid has more than 10^6 points")?;
        need(self.bits >= 53, "bits must be at least 53")?;
        let eps = self.epsilons.values();
        need(!eps.is_empty(), "epsilon grid is empty")?;
        need(
            eps.iter().all(|e| e.is_finite() && *e >= 0.0),
            "epsilons must be finite and non-negative",
        )?;
        match &self.points {
            Some(p) => check_points(p, self.d),
            None => {
                build_sampler(&self.sampler)?;
                need(self.samples == 0 || self.digits > 0, "digits must be positive")
            }
        }
    }
}

impl GaussCheckConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        need(self.bits >= 64, "bits must be at least 64")?;
        need(self.max_radicand >= 3, "max_radicand must be at least 3")?;
        if let Some(starts) = &self.starts {
            for s in starts {
                s.irrational()?;
            }
        }
        Ok(())
    }
}

impl SystoleConfig {
    pub fn validate(&self) -> Result<(), ExpError> {
        need(self.v.len() == 1 || self.v.len() == 2, "v must have 1 or 2 coordinates")?;
        parse_point(&self.v)?;
        need(self.t1 >= self.t0, "t1 must not be below t0")?;
        need(self.dt > 0.0 && self.dt.is_finite(), "dt must be positive")?;
        need((self.t1 - self.t0) / self.dt <= 1e6, "grid has more than 10^6 points")?;
        need(self.bits >= 53, "bits must be at least 53")
    }
}
