//! Exact arithmetic in `Q(sqrt d)` for quadratic irrationals `(a + b sqrt d) / c`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cf::ContinuedFraction;
use crate::interval::RationalInterval;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurdError {
    #[error("radicand {0} must be a positive non-square")]
    BadRadicand(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("surds with different radicands {0} and {1}")]
    MixedRadicands(String, String),
}

/// `(a + b sqrt d) / c` with `d` a positive non-square and `c != 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, SurdError> {
        if c.is_zero() {
            return Err(SurdError::ZeroDenominator);
        }
        if !d.is_positive() || d.sqrt().pow(2) == d {
            return Err(SurdError::BadRadicand(d.to_string()));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, SurdError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// `(sqrt 5 - 1) / 2 = [1, 1, 1, ...]`.
    pub fn golden_conjugate() -> Self {
        Self::from_i64(-1, 1, 2, 5).expect("valid surd")
    }

    fn normalized(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// Whether the value is rational (`b = 0`).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of `A + B sqrt d`.
    fn sign_of(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
        let sa = a.sign();
        let sb = b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            (Plus, Minus) => (a * a).cmp(&(b * b * d)),
            (Minus, Plus) => (b * b * d).cmp(&(a * a)),
        }
    }

    pub fn signum(&self) -> Ordering {
        Self::sign_of(&self.a, &self.b, &self.d)
    }

    fn check_same(&self, other: &Self) -> Result<(), SurdError> {
        if self.d != other.d {
            return Err(SurdError::MixedRadicands(self.d.to_string(), other.d.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SurdError> {
        self.check_same(other)?;
        Ok(Self::normalized(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            self.d.clone(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SurdError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SurdError> {
        self.check_same(other)?;
        Ok(Self::normalized(
            &self.a * &other.a + &self.b * &other.b * &self.d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            self.d.clone(),
        ))
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` at zero.
    pub fn recip(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        if norm.is_zero() {
            return None;
        }
        Some(Self::normalized(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        ))
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        Self::normalized(
            &self.a * r.denom() + r.numer() * &self.c,
            &self.b * r.denom(),
            &self.c * r.denom(),
            self.d.clone(),
        )
    }

    pub fn sub_rational(&self, r: &BigRational) -> Self {
        self.add_rational(&-r)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::normalized(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.sub_rational(r).signum()
    }

    /// Exact comparison of `|self|` against `|other|`.
    pub fn cmp_abs(&self, other: &Self) -> Result<Ordering, SurdError> {
        Ok(self.abs().sub(&other.abs())?.signum())
    }

    /// `floor(self)`, exact.
    pub fn floor(&self) -> BigInt {
        // c > 0 after normalization
        let n = &self.b * &self.b * &self.d;
        let r = n.sqrt();
        let floor_b_sqrt = if self.b.is_negative() {
            if &r * &r == n {
                -r
            } else {
                -r - 1
            }
        } else {
            r
        };
        (&self.a + floor_b_sqrt).div_floor(&self.c)
    }

    /// Nearest integer, ties rounded up.
    pub fn round(&self) -> BigInt {
        self.add_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
            .floor()
    }

    /// `self - floor(self)`.
    pub fn fract(&self) -> Self {
        self.sub_rational(&BigRational::from_integer(self.floor()))
    }

    /// First `n` partial quotients of the fractional part.
    pub fn continued_fraction(&self, n: usize) -> ContinuedFraction {
        let mut x = self.fract();
        let mut quotients = Vec::with_capacity(n);
        while quotients.len() < n {
            let Some(inv) = x.recip() else { break };
            let a = inv.floor();
            x = inv.sub_rational(&BigRational::from_integer(a.clone()));
            quotients.push(a);
        }
        ContinuedFraction::new(quotients).expect("partial quotients of a fractional part are positive")
    }

    /// `[k, k + 1] / 2^bits` with `k = floor(self * 2^bits)`.
    pub fn enclose(&self, bits: u64) -> RationalInterval {
        let scale = BigInt::one() << bits as usize;
        let k = self.mul_int(&scale).floor();
        RationalInterval::new(
            BigRational::new(k.clone(), scale.clone()),
            BigRational::new(k + 1, scale),
        )
        .expect("ordered endpoints")
    }

    pub fn to_f64(&self) -> f64 {
        let enc = self.enclose(80);
        crate::rational::to_f64(&enc.midpoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rejects_square_radicand() {
        assert!(QuadraticSurd::from_i64(0, 1, 1, 4).is_err());
        assert!(QuadraticSurd::from_i64(0, 1, 0, 5).is_err());
    }

    #[test]
    fn signs_and_comparisons() {
        let s = QuadraticSurd::from_i64(0, 1, 1, 2).unwrap();
        assert_eq!(s.cmp_rational(&q(141, 100)), Ordering::Greater);
        assert_eq!(s.cmp_rational(&q(142, 100)), Ordering::Less);
        let t = QuadraticSurd::from_i64(3, -2, 1, 2).unwrap(); // 3 - 2 sqrt 2 > 0
        assert_eq!(t.signum(), Ordering::Greater);
        assert_eq!(t.neg().signum(), Ordering::Less);
    }

    #[test]
    fn floor_matches_float() {
        for (a, b, c, d) in [(1, 1, 2, 5), (-1, 1, 2, 5), (3, -2, 1, 2), (7, -3, -2, 11), (0, -1, 3, 7)] {
            let s = QuadraticSurd::from_i64(a, b, c, d).unwrap();
            let f = (a as f64 + b as f64 * (d as f64).sqrt()) / c as f64;
            assert_eq!(s.floor(), BigInt::from(f.floor() as i64), "{s:?}");
        }
    }

    #[test]
    fn known_expansions() {
        let golden = QuadraticSurd::golden_conjugate();
        assert!(golden.continued_fraction(30).quotients().iter().all(|a| a.is_one()));
        let sqrt2 = QuadraticSurd::from_i64(-1, 1, 1, 2).unwrap();
        assert!(sqrt2
            .continued_fraction(30)
            .quotients()
            .iter()
            .all(|a| *a == BigInt::from(2)));
        let sqrt3 = QuadraticSurd::from_i64(0, 1, 1, 3).unwrap();
        let v: Vec<i64> = sqrt3
            .continued_fraction(6)
            .quotients()
            .iter()
            .map(|a| a.try_into().unwrap())
            .collect();
        assert_eq!(v, vec![1, 2, 1, 2, 1, 2]);
    }

    #[test]
    fn enclosure_contains_value() {
        let s = QuadraticSurd::golden_conjugate();
        let iv = s.enclose(200);
        assert_eq!(s.cmp_rational(iv.lo()), Ordering::Greater);
        assert_eq!(s.cmp_rational(iv.hi()), Ordering::Less);
        assert!((s.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn recip_round_trip() {
        let s = QuadraticSurd::from_i64(2, 3, 5, 7).unwrap();
        let one = s.mul(&s.recip().unwrap()).unwrap();
        assert_eq!(one.cmp_rational(&q(1, 1)), Ordering::Equal);
    }
}
