use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const MAX_PASSES: usize = 200;
use serde::{Deserialize, Serialize};

use super::{
    flow_diagonal, shortest_vector, shortest_vector_or_tie, LatticeBasis, LatticeError, NormKind,
    ShortVector,
};
use crate::rational::to_f64;
use crate::scalar::Ball;

/// One grid time of a systole trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub systole: f64,
    pub error: f64,
    pub coeffs: Vec<i64>,
    pub tie: bool,
}

/// Exact minimum over `t` of the length of one grid-minimal vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub coeffs: Vec<i64>,
    pub t_star: f64,
    pub length: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystoleTrace {
    pub norm: NormKind,
    pub points: Vec<TracePoint>,
    pub refinements: Vec<Refinement>,
}

impl SystoleTrace {
    /// Smallest systole seen on the grid or at a refinement time.
    pub fn min_length(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.systole)
            .chain(self.refinements.iter().map(|r| r.length))
            .fold(f64::INFINITY, f64::min)
    }

    /// Columns `t,systole,coeffs` with coefficients separated by spaces.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,systole,coeffs\n");
        for p in &self.points {
            let c: Vec<String> = p.coeffs.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{},{:.17e},{}", p.t, p.systole, c.join(" "));
        }
        s
    }
}

fn grid(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>, LatticeError> {
    if !(t0 < t1) || !(dt > 0.0) || !t0.is_finite() || !t1.is_finite() {
        return Err(LatticeError::Parameter(format!(
            "need t0 < t1 and dt > 0, got t0={t0} t1={t1} dt={dt}"
        )));
    }
    let steps = ((t1 - t0) / dt + 1e-9).floor() as usize;
    Ok((0..=steps).map(|k| t0 + k as f64 * dt).collect())
}

/// Flow basis at `(v, t)` after Lagrange reduction, with the integer
/// transform: row `j` holds the original coefficients of reduced column `j`.
///
/// The reduction works on the exact columns of `u_v` and only scales by the
/// flow diagonal when comparing, so rounding never leaks into the
/// components. A generic reduction on the rounded basis loses everything to
/// cancellation once the lattice is skewed by `e^(2t)`.
pub(crate) fn reduced_flow_basis(
    v: &[BigRational],
    t: f64,
    prec: u32,
) -> Result<(LatticeBasis<Ball>, Vec<Vec<i64>>), LatticeError> {
    let d = v.len();
    if d == 0 || d > 2 {
        return Err(LatticeError::Dimension(d));
    }
    let n = d + 1;
    let diag = flow_diagonal::<Ball>(d, t, prec);
    let w: Vec<Ball> = diag.iter().map(|x| x.sqr()).collect();
    let mut cols: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if j == d && i < d {
                        -v[i].clone()
                    } else {
                        BigRational::from_integer(i64::from(i == j).into())
                    }
                })
                .collect()
        })
        .collect();
    let mut coeffs: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|k| i64::from(j == k)).collect())
        .collect();
    let dot = |a: &[BigRational], b: &[BigRational]| -> Ball {
        a.iter()
            .zip(b)
            .zip(&w)
            .fold(Ball::zero(), |acc, ((x, y), wi)| {
                acc + wi.clone() * Ball::from_rational(&(x * y), prec)
            })
    };
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bii = dot(&cols[i], &cols[i]);
                if bii.to_f64() <= 0.0 {
                    return Err(LatticeError::Singular);
                }
                let mu = (dot(&cols[j], &cols[i]) / bii).round_to_int();
                let mu_i = mu.to_i64().ok_or(LatticeError::Overflow)?;
                if mu_i == 0 {
                    continue;
                }
                let m = BigRational::from_integer(mu);
                let new: Vec<BigRational> = cols[j]
                    .iter()
                    .zip(&cols[i])
                    .map(|(x, y)| x - &m * y)
                    .collect();
                if dot(&new, &new).to_f64() >= dot(&cols[j], &cols[j]).to_f64() {
                    continue;
                }
                cols[j] = new;
                for k in 0..n {
                    coeffs[j][k] = coeffs[j][k]
                        .checked_sub(mu_i.checked_mul(coeffs[i][k]).ok_or(LatticeError::Overflow)?)
                        .ok_or(LatticeError::Overflow)?;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| diag[i].clone() * Ball::from_rational(&cols[j][i], prec))
                .collect()
        })
        .collect();
    Ok((LatticeBasis { rows }, coeffs))
}

fn remap(mut s: ShortVector<Ball>, transform: &[Vec<i64>]) -> Result<ShortVector<Ball>, LatticeError> {
    let n = transform.len();
    let mut out = vec![0i64; n];
    for (j, &c) in s.coeffs.iter().enumerate() {
        for k in 0..n {
            out[k] = c
                .checked_mul(transform[j][k])
                .and_then(|x| x.checked_add(out[k]))
                .ok_or(LatticeError::Overflow)?;
        }
    }
    if out.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        out.iter_mut().for_each(|x| *x = -*x);
        s.vector.iter_mut().for_each(|x| *x = -x.clone());
    }
    s.coeffs = out;
    Ok(s)
}

/// Shortest vector at `(v, t)`, retrying once at doubled precision before
/// reporting a tie.
fn robust_shortest(
    v: &[BigRational],
    t: f64,
    norm: NormKind,
    prec: u32,
) -> Result<ShortVector<Ball>, LatticeError> {
    let (b, tr) = reduced_flow_basis(v, t, prec)?;
    match shortest_vector(&b, norm) {
        Err(LatticeError::Ambiguous(..)) => {
            let p2 = prec.saturating_mul(2);
            let (b2, tr2) = reduced_flow_basis(v, t, p2)?;
            remap(shortest_vector_or_tie(&b2, norm)?, &tr2)
        }
        other => remap(other?, &tr),
    }
}

/// Length of the lattice vector `coeffs = (m_1, ..., m_d, n)` of `a_t u_v Z^(d+1)`.
pub fn vector_length_at(
    v: &[BigRational],
    coeffs: &[i64],
    t: f64,
    norm: NormKind,
    prec: u32,
) -> Ball {
    let d = v.len();
    let n = coeffs[d];
    let diag = flow_diagonal::<Ball>(d, t, prec);
    let mut comps: Vec<Ball> = (0..d)
        .map(|i| {
            let r = BigRational::from_integer(coeffs[i].into()) - &v[i] * BigRational::from_integer(n.into());
            Ball::from_rational(&r, prec) * diag[i].clone()
        })
        .collect();
    comps.push(Ball::from_int(n, prec) * diag[d].clone());
    match norm {
        NormKind::Sup => comps
            .iter()
            .map(|c| c.abs())
            .reduce(|a, b| a.max(&b))
            .expect("nonempty"),
        NormKind::Euclidean => comps
            .iter()
            .fold(Ball::zero(), |acc, c| acc + c.sqr())
            .sqrt(),
    }
}

/// Time minimizing the length of `coeffs`, clamped to `[t0, t1]`.
fn closed_form_t_star(v: &[BigRational], coeffs: &[i64], norm: NormKind, t0: f64, t1: f64) -> f64 {
    let d = v.len();
    let n = coeffs[d].unsigned_abs() as f64;
    let r: Vec<BigRational> = (0..d)
        .map(|i| Signed::abs(&(BigRational::from_integer(coeffs[i].into()) - &v[i] * BigRational::from_integer(coeffs[d].into()))))
        .collect();
    let t = if n == 0.0 {
        f64::NEG_INFINITY
    } else if r.iter().all(|x| x.is_zero()) {
        f64::INFINITY
    } else {
        match norm {
            NormKind::Sup => {
                let rmax = r.iter().max().expect("d >= 1");
                (n.ln() - crate::rational::ln_abs(rmax)) / (d as f64 + 1.0)
            }
            NormKind::Euclidean => {
                let r2: f64 = r.iter().map(|x| to_f64(x).powi(2)).sum();
                ((d as f64) * n * n / r2).ln() / (2.0 * (d as f64 + 1.0))
            }
        }
    };
    t.clamp(t0, t1)
}

/// Systole on the grid `t0, t0 + dt, ..., <= t1`, plus the off-grid minimum of
/// every vector that was shortest at some grid time.
pub fn systole_trace(
    v: &[BigRational],
    t0: f64,
    t1: f64,
    dt: f64,
    norm: NormKind,
    prec: u32,
) -> Result<SystoleTrace, LatticeError> {
    if v.is_empty() || v.len() > 2 {
        return Err(LatticeError::Dimension(v.len()));
    }
    let mut points = Vec::new();
    for t in grid(t0, t1, dt)? {
        let s = robust_shortest(v, t, norm, prec)?;
        points.push(TracePoint {
            t,
            systole: s.length.to_f64(),
            error: s.length.radius_f64(),
            coeffs: s.coeffs,
            tie: s.tie,
        });
    }
    let mut seen: Vec<&Vec<i64>> = Vec::new();
    let mut refinements = Vec::new();
    for p in &points {
        if seen.contains(&&p.coeffs) {
            continue;
        }
        seen.push(&p.coeffs);
        let t_star = closed_form_t_star(v, &p.coeffs, norm, t0, t1);
        let len = vector_length_at(v, &p.coeffs, t_star, norm, prec);
        refinements.push(Refinement {
            coeffs: p.coeffs.clone(),
            t_star,
            length: len.to_f64(),
            error: len.radius_f64(),
        });
    }
    Ok(SystoleTrace {
        norm,
        points,
        refinements,
    })
}

/// Systole enclosure at one grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSystole {
    pub t: f64,
    pub systole: Ball,
}

/// Systole enclosures on the grid over `[0, t_max]`.
pub fn systole_grid(
    v: &[BigRational],
    t_max: f64,
    dt: f64,
    norm: NormKind,
    prec: u32,
) -> Result<Vec<GridSystole>, LatticeError> {
    grid(0.0, t_max, dt)?
        .into_iter()
        .map(|t| {
            let (b, _) = reduced_flow_basis(v, t, prec)?;
            Ok(GridSystole {
                t,
                systole: super::systole(&b, norm)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeMass {
    pub epsilon: f64,
    pub fraction: f64,
    pub grid_points: usize,
    pub below: usize,
    /// Grid times whose systole enclosure straddles `epsilon`; counted by midpoint.
    pub undecided: usize,
}

/// Fraction of grid times whose systole is below `epsilon`.
pub fn escape_fraction(grid: &[GridSystole], epsilon: f64) -> EscapeMass {
    let eps = Ball::from_f64(epsilon, 64);
    let mut below = 0;
    let mut undecided = 0;
    for g in grid {
        match g.systole.try_cmp(&eps) {
            Some(std::cmp::Ordering::Less) => below += 1,
            Some(_) => {}
            None => {
                undecided += 1;
                if g.systole.to_f64() < epsilon {
                    below += 1;
                }
            }
        }
    }
    EscapeMass {
        epsilon,
        fraction: if grid.is_empty() {
            0.0
        } else {
            below as f64 / grid.len() as f64
        },
        grid_points: grid.len(),
        below,
        undecided,
    }
}

/// Cesaro fraction of `t` in `[0, T]` (step `dt`) with systole below `epsilon`.
pub fn escape_mass(
    v: &[BigRational],
    t_max: f64,
    epsilon: f64,
    dt: f64,
    norm: NormKind,
    prec: u32,
) -> Result<EscapeMass, LatticeError> {
    if !(t_max > 0.0) {
        return Err(LatticeError::Parameter(format!("T must be positive, got {t_max}")));
    }
    Ok(escape_fraction(&systole_grid(v, t_max, dt, norm, prec)?, epsilon))
}
