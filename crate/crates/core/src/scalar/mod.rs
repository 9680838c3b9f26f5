//! Scalar abstraction shared by the lattice and modular-surface code.
//!
//! Three families implement [`Scalar`]:
//!
//! * [`Ball`]: certified multi-precision enclosures. Comparisons that cannot
//!   be decided from the enclosures return `None`.
//! * `f64` / `f32`: fast, uncertified. Comparisons always decide and the
//!   reported error bound is zero.
//! * [`BigRational`]: exact arithmetic, used where no transcendental
//!   functions are needed (e.g. endpoint identities under rational flows).

pub mod ball;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

pub use ball::{Ball, Dyadic, Mag};

/// Ring-with-division operations plus certified comparison.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Enclosure of `q` using `prec` significant bits where applicable.
    fn from_rational(q: &BigRational, prec: u32) -> Self;

    fn from_int(n: &BigInt, prec: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()), prec)
    }

    fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    /// Midpoint approximation.
    fn to_f64(&self) -> f64;

    /// Upper bound on `|value - to_f64-midpoint|`; zero for exact and float types.
    fn error_bound(&self) -> f64;

    /// Significand bits (`u32::MAX` for exact arithmetic).
    fn precision(&self) -> u32;

    fn abs(&self) -> Self;

    /// Enclosure of the maximum of the two values.
    fn max_of(&self, other: &Self) -> Self;

    /// Comparison that is only `Some` when it is certain.
    fn try_cmp(&self, other: &Self) -> Option<Ordering>;

    /// Integer nearest to the midpoint.
    fn round_to_int(&self) -> BigInt;

    fn try_sign(&self) -> Option<Ordering> {
        self.try_cmp(&Self::zero())
    }

    fn is_exact_type() -> bool {
        false
    }

    /// Upper bound of `|x|` as an `f64` (rounded outward).
    fn abs_upper_f64(&self) -> f64 {
        let v = self.to_f64().abs() + self.error_bound();
        v * (1.0 + 4.0 * f64::EPSILON) + f64::from_bits(1)
    }

    /// Lower bound of `|x|` as an `f64` (rounded inward, never negative).
    fn abs_lower_f64(&self) -> f64 {
        let v = self.to_f64().abs() - self.error_bound();
        (v * (1.0 - 4.0 * f64::EPSILON)).max(0.0)
    }
}

/// Scalars that also provide square roots and exponentials.
pub trait RealScalar: Scalar {
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;

    /// Exact conversion of an `f64` (flow times are given as binary floats).
    fn from_f64(x: f64, prec: u32) -> Self;
}

impl Scalar for Ball {
    fn from_rational(q: &BigRational, prec: u32) -> Self {
        Ball::from_rational(q, prec)
    }
    fn from_int(n: &BigInt, prec: u32) -> Self {
        Ball::from_int(n.clone(), prec)
    }
    fn to_f64(&self) -> f64 {
        Ball::to_f64(self)
    }
    fn error_bound(&self) -> f64 {
        self.radius_f64()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
    fn abs(&self) -> Self {
        Ball::abs(self)
    }
    fn max_of(&self, other: &Self) -> Self {
        self.max(other)
    }
    fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        Ball::try_cmp(self, other)
    }
    fn round_to_int(&self) -> BigInt {
        Ball::round_to_int(self)
    }
}

impl RealScalar for Ball {
    fn sqrt(&self) -> Self {
        Ball::sqrt(self)
    }
    fn exp(&self) -> Self {
        Ball::exp(self)
    }
    fn from_f64(x: f64, prec: u32) -> Self {
        Ball::from_f64(x, prec)
    }
}

macro_rules! float_scalar {
    ($t:ty, $bits:expr) => {
        impl Scalar for $t {
            fn from_rational(q: &BigRational, _prec: u32) -> Self {
                crate::rational::to_f64(q) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn error_bound(&self) -> f64 {
                0.0
            }
            fn precision(&self) -> u32 {
                $bits
            }
            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }
            fn max_of(&self, other: &Self) -> Self {
                <$t>::max(*self, *other)
            }
            fn try_cmp(&self, other: &Self) -> Option<Ordering> {
                self.partial_cmp(other)
            }
            fn round_to_int(&self) -> BigInt {
                BigInt::from_f64(self.round() as f64).unwrap_or_default()
            }
        }

        impl RealScalar for $t {
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            fn from_f64(x: f64, _prec: u32) -> Self {
                x as $t
            }
        }
    };
}

float_scalar!(f64, 53);
float_scalar!(f32, 24);

impl Scalar for BigRational {
    fn from_rational(q: &BigRational, _prec: u32) -> Self {
        q.clone()
    }
    fn to_f64(&self) -> f64 {
        crate::rational::to_f64(self)
    }
    fn error_bound(&self) -> f64 {
        0.0
    }
    fn precision(&self) -> u32 {
        u32::MAX
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn max_of(&self, other: &Self) -> Self {
        if crate::rational::cmp_rational(self, other) != Ordering::Less {
            self.clone()
        } else {
            other.clone()
        }
    }
    fn try_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(crate::rational::cmp_rational(self, other))
    }
    fn round_to_int(&self) -> BigInt {
        (self + BigRational::new(BigInt::one(), BigInt::from(2)))
            .floor()
            .to_integer()
    }
    fn is_exact_type() -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_poly<S: Scalar>(x: S) -> S {
        // x^2 - 2x + 1
        x.clone() * x.clone() - S::from_i64(2, 64) * x + S::one()
    }

    #[test]
    fn same_code_runs_on_every_scalar() {
        let q = BigRational::new(3.into(), 2.into());
        let exact = generic_poly(q.clone());
        assert_eq!(exact, BigRational::new(1.into(), 4.into()));
        let f = generic_poly(1.5f64);
        assert_eq!(f, 0.25);
        let g = generic_poly(1.5f32);
        assert_eq!(g, 0.25);
        let b = generic_poly(Ball::from_rational(&q, 64));
        assert_eq!(b.try_cmp(&Ball::from_rational(&exact, 64)), Some(Ordering::Equal));
    }

    #[test]
    fn exact_type_rounds_half_up() {
        let q = BigRational::new((-5).into(), 2.into());
        assert_eq!(Scalar::round_to_int(&q), BigInt::from(-2));
    }
}
