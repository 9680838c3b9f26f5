//! Continued fractions of numbers in `[0, 1)`, written `[a_1, a_2, ...]` for
//! `1/(a_1 + 1/(a_2 + ...))`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::RationalInterval;
use crate::rational::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    #[error("{0} is outside [0, 1)")]
    OutOfRange(String),
    #[error("the Gauss map is undefined at 0")]
    GaussAtZero,
    #[error("only {certified} certified terms, burn-in {burn_in} leaves nothing to inspect")]
    InsufficientPrecision { certified: usize, burn_in: usize },
    #[error("partial quotient {index} is {value}, all quotients must be >= 1")]
    NonPositiveQuotient { index: usize, value: String },
}

/// Partial quotients plus the number of leading terms that are guaranteed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContinuedFraction {
    #[serde(with = "crate::serde_util::bigint_vec")]
    quotients: Vec<BigInt>,
    certified: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
    /// 1-based: the convergent `[a_1, ..., a_index]`.
    pub index: usize,
}

impl ContinuedFraction {
    /// Fully certified expansion with the given quotients.
    pub fn new(quotients: Vec<BigInt>) -> Result<Self, CfError> {
        for (i, a) in quotients.iter().enumerate() {
            if !a.is_positive() {
                return Err(CfError::NonPositiveQuotient {
                    index: i + 1,
                    value: a.to_string(),
                });
            }
        }
        let certified = quotients.len();
        Ok(ContinuedFraction {
            quotients,
            certified,
        })
    }

    pub fn from_u64s(quotients: &[u64]) -> Result<Self, CfError> {
        Self::new(quotients.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    pub fn certified(&self) -> usize {
        self.certified
    }

    pub fn certified_quotients(&self) -> &[BigInt] {
        &self.quotients[..self.certified]
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Keep only the first `n` terms.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.quotients.len());
        ContinuedFraction {
            quotients: self.quotients[..n].to_vec(),
            certified: self.certified.min(n),
        }
    }
}

fn check_unit(x: &BigRational) -> Result<(), CfError> {
    if x.is_negative() || x >= &BigRational::one() {
        return Err(CfError::OutOfRange(format_rational(x)));
    }
    Ok(())
}

/// Euclid on the raw pair, so callers with huge unreduced fractions skip the gcd.
fn euclid(mut p: BigInt, mut q: BigInt, max_terms: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    while !p.is_zero() && out.len() < max_terms {
        let (a, r) = q.div_rem(&p);
        out.push(a);
        q = p;
        p = r;
    }
    out
}

/// Exact expansion of a rational in `[0, 1)`, in canonical form.
pub fn expand_rational(x: &BigRational) -> Result<ContinuedFraction, CfError> {
    check_unit(x)?;
    let quotients = euclid(x.numer().clone(), x.denom().clone(), usize::MAX);
    let certified = quotients.len();
    Ok(ContinuedFraction {
        quotients,
        certified,
    })
}

/// Quotients shared by every point of `x`, stopping at the first endpoint
/// disagreement or after `max_terms` terms.
pub fn expand_interval(
    x: &RationalInterval,
    max_terms: usize,
) -> Result<ContinuedFraction, CfError> {
    check_unit(x.lo())?;
    check_unit(x.hi())?;
    let (mut p_lo, mut q_lo) = (x.lo().numer().clone(), x.lo().denom().clone());
    let (mut p_hi, mut q_hi) = (x.hi().numer().clone(), x.hi().denom().clone());
    let mut quotients = Vec::new();
    while quotients.len() < max_terms {
        if p_lo.is_zero() || p_hi.is_zero() {
            break;
        }
        let (a_lo, r_lo) = q_lo.div_rem(&p_lo);
        let (a_hi, r_hi) = q_hi.div_rem(&p_hi);
        if a_lo != a_hi {
            break;
        }
        quotients.push(a_lo);
        q_lo = std::mem::replace(&mut p_lo, r_lo);
        q_hi = std::mem::replace(&mut p_hi, r_hi);
    }
    let certified = quotients.len();
    Ok(ContinuedFraction {
        quotients,
        certified,
    })
}

/// The value `p_k / q_k` of the full expansion.
pub fn evaluate(cf: &ContinuedFraction) -> BigRational {
    let (p, q) = last_convergent(cf.quotients());
    BigRational::new_raw(p, q)
}

fn last_convergent(quotients: &[BigInt]) -> (BigInt, BigInt) {
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for a in quotients {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    (p, q)
}

/// All convergents `p_n / q_n` for `n = 1..=len`.
pub fn convergents(cf: &ContinuedFraction) -> Vec<Convergent> {
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(cf.len());
    for (i, a) in cf.quotients().iter().enumerate() {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            p: p.clone(),
            q: q.clone(),
            index: i + 1,
        });
    }
    out
}

/// First 0-based offset of `pattern` inside the certified prefix.
pub fn contains_pattern(cf: &ContinuedFraction, pattern: &[BigInt]) -> Option<usize> {
    if pattern.is_empty() {
        return None;
    }
    cf.certified_quotients()
        .windows(pattern.len())
        .position(|w| w == pattern)
}

/// Largest `a_n` with `burn_in < n <= certified`.
pub fn tail_max(cf: &ContinuedFraction, burn_in: usize) -> Result<BigInt, CfError> {
    if cf.certified() <= burn_in {
        return Err(CfError::InsufficientPrecision {
            certified: cf.certified(),
            burn_in,
        });
    }
    Ok(cf.certified_quotients()[burn_in..]
        .iter()
        .max()
        .cloned()
        .unwrap_or_default())
}

/// `1/x - floor(1/x)` for `x` in `(0, 1)`.
pub fn gauss_map(x: &BigRational) -> Result<BigRational, CfError> {
    check_unit(x)?;
    if x.is_zero() {
        return Err(CfError::GaussAtZero);
    }
    let inv = x.recip();
    Ok(&inv - inv.floor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn cf(v: &[u64]) -> ContinuedFraction {
        ContinuedFraction::from_u64s(v).unwrap()
    }

    /// Nested evaluation from the innermost term outward.
    fn nested(v: &[i64]) -> BigRational {
        let mut acc = BigRational::zero();
        for &a in v.iter().rev() {
            acc = (BigRational::from_integer(a.into()) + acc).recip();
        }
        acc
    }

    /// Euclid written independently on machine integers.
    fn euclid_oracle(mut p: u64, mut q: u64) -> Vec<i64> {
        let mut out = vec![];
        while p != 0 {
            out.push((q / p) as i64);
            let r = q % p;
            q = p;
            p = r;
        }
        out
    }

    #[test]
    fn expand_rational_examples() {
        assert!(expand_rational(&q(0, 1)).unwrap().is_empty());
        assert_eq!(expand_rational(&q(2, 3)).unwrap().quotients(), ints(&[1, 2]));
        let five_sevenths = expand_rational(&q(5, 7)).unwrap();
        assert_eq!(five_sevenths.quotients().to_vec(), ints(&euclid_oracle(5, 7)));
        assert_eq!(five_sevenths.quotients(), ints(&[1, 2, 2]));
        assert_eq!(five_sevenths.certified(), 3);
        assert!(expand_rational(&q(1, 1)).is_err());
        assert!(expand_rational(&q(-1, 3)).is_err());
    }

    #[test]
    fn expand_interval_examples() {
        let deg = RationalInterval::point(q(2, 3));
        let e = expand_interval(&deg, 100).unwrap();
        assert_eq!(e.quotients(), ints(&[1, 2]));
        assert_eq!(e.certified(), 2);

        let iv = RationalInterval::new(q(61, 100), q(63, 100)).unwrap();
        let e = expand_interval(&iv, 100).unwrap();
        let a = expand_rational(&q(61, 100)).unwrap();
        let b = expand_rational(&q(63, 100)).unwrap();
        let agree = a
            .quotients()
            .iter()
            .zip(b.quotients())
            .take_while(|(x, y)| x == y)
            .count();
        assert_eq!(e.certified(), agree);
        assert_eq!(&e.quotients()[..2], &ints(&[1, 1])[..]);

        let wide = RationalInterval::new(q(0, 1), q(1, 2)).unwrap();
        assert_eq!(expand_interval(&wide, 100).unwrap().certified(), 0);
    }

    #[test]
    fn expand_interval_respects_max_terms() {
        let iv = RationalInterval::point(q(5, 8));
        assert_eq!(expand_interval(&iv, 2).unwrap().certified(), 2);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&cf(&[])), q(0, 1));
        assert_eq!(evaluate(&cf(&[2])), q(1, 2));
        assert_eq!(evaluate(&cf(&[1, 1, 1, 1, 1])), nested(&[1, 1, 1, 1, 1]));
        assert_eq!(evaluate(&cf(&[1, 1, 1, 1, 1])), q(5, 8));
    }

    #[test]
    fn convergent_examples() {
        let pairs = |c: &ContinuedFraction| -> Vec<(i64, i64)> {
            convergents(c)
                .iter()
                .map(|k| (k.p.clone().try_into().unwrap(), k.q.clone().try_into().unwrap()))
                .collect()
        };
        assert_eq!(pairs(&cf(&[1, 2])), vec![(1, 1), (2, 3)]);
        assert_eq!(pairs(&cf(&[1])), vec![(1, 1)]);
        assert_eq!(pairs(&cf(&[2, 2, 2])), vec![(1, 2), (2, 5), (5, 12)]);
        assert_eq!(convergents(&cf(&[2, 2, 2]))[2].index, 3);
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(contains_pattern(&cf(&[1, 2, 3, 1, 2]), &ints(&[2, 3])), Some(1));
        assert_eq!(contains_pattern(&cf(&[1, 1, 1]), &ints(&[2])), None);
        assert_eq!(contains_pattern(&cf(&[3, 1, 4, 1, 5]), &ints(&[1, 5])), Some(3));
    }

    #[test]
    fn pattern_search_ignores_uncertified_tail() {
        let iv = RationalInterval::new(q(61, 100), q(63, 100)).unwrap();
        let e = expand_interval(&iv, 100).unwrap();
        let beyond = expand_rational(&q(61, 100)).unwrap().quotients()[e.certified()].clone();
        let hit = contains_pattern(&e, std::slice::from_ref(&beyond));
        assert!(hit.is_none_or(|i| i < e.certified()));
    }

    #[test]
    fn tail_max_examples() {
        assert_eq!(tail_max(&cf(&[1, 1, 9, 1]), 1).unwrap(), BigInt::from(9));
        assert_eq!(tail_max(&cf(&[5, 1, 1, 1]), 1).unwrap(), BigInt::from(1));
        assert_eq!(tail_max(&cf(&[1; 100]), 10).unwrap(), BigInt::from(1));
        assert!(matches!(
            tail_max(&cf(&[1, 2]), 2),
            Err(CfError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn gauss_map_examples() {
        assert_eq!(gauss_map(&q(2, 3)).unwrap(), q(1, 2));
        assert_eq!(gauss_map(&q(1, 2)).unwrap(), q(0, 1));
        let g = gauss_map(&q(5, 7)).unwrap();
        assert_eq!(g, q(7, 5) - q(1, 1));
        assert_eq!(g, q(2, 5));
        assert_eq!(
            expand_rational(&g).unwrap().quotients(),
            &expand_rational(&q(5, 7)).unwrap().quotients()[1..]
        );
        assert_eq!(gauss_map(&q(0, 1)), Err(CfError::GaussAtZero));
    }

    #[test]
    fn serde_round_trip() {
        let c = cf(&[1, 2, 300]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"quotients":["1","2","300"],"certified":3}"#);
        assert_eq!(serde_json::from_str::<ContinuedFraction>(&s).unwrap(), c);
    }

    fn unit_rational() -> impl Strategy<Value = BigRational> {
        (2u64..=1_000_000).prop_flat_map(|d| (1..d).prop_map(move |n| q(n as i64, d as i64)))
    }

    proptest! {
        #[test]
        fn round_trip(x in unit_rational()) {
            let e = expand_rational(&x).unwrap();
            prop_assert_eq!(evaluate(&e), x);
            prop_assert!(e.quotients().last().unwrap() >= &BigInt::from(2));
        }

        #[test]
        fn recurrence_and_coprimality(x in unit_rational()) {
            let e = expand_rational(&x).unwrap();
            let c = convergents(&e);
            for n in 0..c.len() {
                prop_assert!(c[n].p.gcd(&c[n].q).is_one());
                if n >= 2 {
                    let a = &e.quotients()[n];
                    prop_assert_eq!(&c[n].p, &(a * &c[n - 1].p + &c[n - 2].p));
                    prop_assert_eq!(&c[n].q, &(a * &c[n - 1].q + &c[n - 2].q));
                }
                if n >= 1 {
                    prop_assert!(c[n].q > c[n - 1].q);
                    let det = &c[n].p * &c[n - 1].q - &c[n - 1].p * &c[n].q;
                    prop_assert_eq!(det.abs(), BigInt::one());
                }
            }
        }

        #[test]
        fn convergent_errors_alternate_and_are_bounded(x in unit_rational()) {
            let e = expand_rational(&x).unwrap();
            let c = convergents(&e);
            for n in 0..c.len().saturating_sub(1) {
                let err = &x - BigRational::new(c[n].p.clone(), c[n].q.clone());
                let sign = if n % 2 == 0 { -1 } else { 1 };
                prop_assert!(err.is_zero() || err.signum() == BigRational::from_integer(sign.into()));
                let bound = BigRational::new(BigInt::one(), &c[n].q * &c[n + 1].q);
                prop_assert!(err.abs() <= bound);
            }
        }

        #[test]
        fn shift_property(x in unit_rational()) {
            let g = gauss_map(&x).unwrap();
            let shifted = expand_rational(&g).unwrap();
            let full = expand_rational(&x).unwrap();
            prop_assert_eq!(shifted.quotients(), &full.quotients()[1..]);
        }

        #[test]
        fn interval_soundness(a in unit_rational(), b in unit_rational(), t in 0u32..=1000) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let r = &lo + (&hi - &lo) * q(t as i64, 1000);
            let iv = RationalInterval::new(lo, hi).unwrap();
            let e = expand_interval(&iv, 1000).unwrap();
            let full = expand_rational(&r).unwrap();
            prop_assert!(full.len() >= e.certified());
            prop_assert_eq!(&full.quotients()[..e.certified()], e.certified_quotients());
        }
    }
}
