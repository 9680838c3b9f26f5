//! Unimodular lattices `a_t u_v Z^(d+1)` for `d` in `{1, 2}`, their shortest
//! vectors, and the Diophantine scans that mirror them.

mod scan;
mod svp;
mod trace;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{RealScalar, Scalar};

pub use scan::{
    dirichlet_min, dirichlet_profile, littlewood_scan, property_c_scan, wa_search, CKind,
    ScanRecord, WaSolution,
};
pub use svp::{shortest_vector, shortest_vector_or_tie, systole, ShortVector};
pub use trace::{
    escape_fraction, escape_mass, systole_grid, systole_trace, vector_length_at, EscapeMass,
    GridSystole, Refinement, SystoleTrace, TracePoint,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("torus dimension must be 1 or 2, got {0}")]
    Dimension(usize),
    #[error("basis must be square of size 2 or 3")]
    Shape,
    #[error("basis is singular or too ill-conditioned at this precision")]
    Singular,
    #[error("candidate lengths {0} and {1} cannot be separated at this precision")]
    Ambiguous(String, String),
    #[error("enumeration box holds {0} points, more than the limit")]
    BoxTooLarge(f64),
    #[error("integer coefficient overflow during reduction")]
    Overflow,
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    #[default]
    Sup,
    Euclidean,
}

/// A torus point `v` together with a flow time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPoint {
    pub v: Vec<BigRational>,
    pub t: f64,
}

impl FlowPoint {
    pub fn new(v: Vec<BigRational>, t: f64) -> Result<Self, LatticeError> {
        if v.is_empty() || v.len() > 2 {
            return Err(LatticeError::Dimension(v.len()));
        }
        if !t.is_finite() {
            return Err(LatticeError::Parameter(format!("flow time {t}")));
        }
        Ok(FlowPoint { v, t })
    }

    pub fn d(&self) -> usize {
        self.v.len()
    }
}

/// Square matrix whose columns span the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> LatticeBasis<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, LatticeError> {
        let n = rows.len();
        if !(2..=3).contains(&n) || rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Shape);
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>], prec: u32) -> Result<Self, LatticeError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_i64(x, prec)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    /// The lattice vector with the given coefficients on the columns.
    pub fn combine(&self, coeffs: &[i64]) -> Vec<S> {
        let prec = self.precision();
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(coeffs)
                    .filter(|(_, &c)| c != 0)
                    .fold(S::zero(), |acc, (x, &c)| acc + x.clone() * S::from_i64(c, prec))
            })
            .collect()
    }

    pub fn determinant(&self) -> S {
        det(&self.rows)
    }

    /// `diag(scales) * self`.
    pub fn scale_rows(&self, scales: &[S]) -> Self {
        LatticeBasis {
            rows: self
                .rows
                .iter()
                .zip(scales)
                .map(|(r, s)| r.iter().map(|x| x.clone() * s.clone()).collect())
                .collect(),
        }
    }

    pub fn precision(&self) -> u32 {
        self.rows[0][0].precision()
    }
}

pub(crate) fn det<S: Scalar>(m: &[Vec<S>]) -> S {
    let e = |i: usize, j: usize| m[i][j].clone();
    match m.len() {
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        3 => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

/// Diagonal of `a_t = diag(e^t, ..., e^t, e^(-d t))`.
pub fn flow_diagonal<S: RealScalar>(d: usize, t: f64, prec: u32) -> Vec<S> {
    let et = S::from_f64(t, prec).exp();
    let edt = S::from_f64(-(d as f64) * t, prec).exp();
    let mut diag = vec![et; d];
    diag.push(edt);
    diag
}

/// `a_t u_v` where `u_v` is the identity with `-v` in the last column.
pub fn flow_basis<S: RealScalar>(p: &FlowPoint, prec: u32) -> Result<LatticeBasis<S>, LatticeError> {
    let v: Vec<S> = p.v.iter().map(|x| S::from_rational(x, prec)).collect();
    flow_basis_scalar(&v, p.t, prec)
}

/// [`flow_basis`] with `v` already converted, for repeated use along a trace.
pub fn flow_basis_scalar<S: RealScalar>(
    v: &[S],
    t: f64,
    prec: u32,
) -> Result<LatticeBasis<S>, LatticeError> {
    let d = v.len();
    if d == 0 || d > 2 {
        return Err(LatticeError::Dimension(d));
    }
    let diag = flow_diagonal::<S>(d, t, prec);
    let mut rows = vec![vec![S::zero(); d + 1]; d + 1];
    for i in 0..d {
        rows[i][i] = diag[i].clone();
        rows[i][d] = -(v[i].clone() * diag[i].clone());
    }
    rows[d][d] = diag[d].clone();
    Ok(LatticeBasis { rows })
}
