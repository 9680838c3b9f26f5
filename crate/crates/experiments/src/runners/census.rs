use diolab::lattice::{dirichlet_profile, littlewood_scan, property_c_scan, CKind, ScanRecord};
use diolab::rational::{format_rational, parse_rational, to_f64};
use diolab::rng::derive_seed;
use diolab::sampler::sample_product;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{parse_point, DiCensusConfig};
use crate::error::{compute, config, ExpError};
use crate::report::Failures;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuPoint {
    pub n: u64,
    pub value: String,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub index: usize,
    pub v: Vec<String>,
    pub nu: Vec<NuPoint>,
    pub sup_nu: f64,
    pub property_c: Vec<ScanRecord>,
    pub littlewood: Vec<ScanRecord>,
}

/// `1, 2, 4, ...` up to `n_max`.
pub fn dyadic_grid(n_max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

pub(crate) fn points(
    explicit: &Option<Vec<Vec<String>>>,
    samples: usize,
    seed: u64,
    draw: impl Fn(u64) -> Vec<BigRational> + Sync,
) -> Result<Vec<Vec<BigRational>>, ExpError> {
    match explicit {
        Some(ps) => ps.iter().map(|p| parse_point(p)).collect(),
        None => Ok((0..samples)
            .into_par_iter()
            .map(|i| draw(derive_seed(seed, i as u64)))
            .collect()),
    }
}

pub fn run(c: &DiCensusConfig) -> Result<(Vec<CensusRecord>, Failures), ExpError> {
    let sx = c.sampler.build().map_err(config)?;
    let sy = c.sampler_y.as_ref().unwrap_or(&c.sampler).build().map_err(config)?;
    let pts = points(&c.points, c.samples, c.seed, |s| {
        let (x, y) = sample_product(&sx, &sy, c.digits, s);
        vec![x.lo().clone(), y.lo().clone()]
    })?;
    let gamma = parse_point(&c.gamma)?;
    let grid = dyadic_grid(c.n_max);
    let records = pts
        .par_iter()
        .enumerate()
        .map(|(index, v)| {
            let nu: Vec<NuPoint> = dirichlet_profile(v, &grid)
                .map_err(compute)?
                .into_iter()
                .map(|(n, q)| NuPoint {
                    n,
                    approx: to_f64(&q),
                    value: format_rational(&q),
                })
                .collect();
            let sup = nu.iter().map(|p| p.approx).fold(0.0, f64::max);
            Ok(CensusRecord {
                index,
                v: v.iter().map(format_rational).collect(),
                sup_nu: sup,
                nu,
                property_c: property_c_scan(v, CKind::Second, &gamma, c.h).map_err(compute)?,
                littlewood: littlewood_scan(&v[0], &v[1], c.h).map_err(compute)?,
            })
        })
        .collect::<Result<Vec<_>, ExpError>>()?;
    let total = records.len();
    Ok((records, Failures::new(0, total)))
}

pub fn summarize(records: &[CensusRecord]) -> Value {
    let sups: Vec<f64> = records.iter().map(|r| r.sup_nu).collect();
    let n = sups.len();
    let above = sups.iter().filter(|&&s| s > 0.9).count();
    let exact = |p: &NuPoint| parse_rational(&p.value).unwrap_or_else(BigRational::zero);
    let violations = records
        .iter()
        .flat_map(|r| &r.nu)
        .filter(|p| exact(p) > BigRational::one())
        .count();
    let hits_zero = records
        .iter()
        .filter(|r| r.nu.iter().any(|p| exact(p).is_zero()))
        .count();
    let stat = |f: fn(f64, f64) -> f64, init: f64| (n > 0).then(|| sups.iter().copied().fold(init, f));
    json!({
        "points": n,
        "sup_nu_min": stat(f64::min, f64::INFINITY),
        "sup_nu_max": stat(f64::max, f64::NEG_INFINITY),
        "sup_nu_mean": (n > 0).then(|| sups.iter().sum::<f64>() / n as f64),
        "above_0_9": above,
        "fraction_above_0_9": (n > 0).then(|| above as f64 / n as f64),
        "dirichlet_violations": violations,
        "hits_zero": hits_zero,
    })
}

pub const CAVEATS: &[&str] = &[
    "Values of nu(N) near 1 on a finite dyadic grid are evidence against Dirichlet improvability, which is a statement about all large N.",
    "Cassels and Littlewood records are running minima up to h; the liminf conditions are not decided by finite scans.",
    "Sampled points are left endpoints of digit cells, which lie in the fractal but are rational.",
];
