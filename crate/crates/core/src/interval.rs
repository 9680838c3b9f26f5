use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{cmp_rational, format_rational, parse_rational, reduce_by_primes};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Unordered { lo: String, hi: String },
    #[error("interval [{lo}, {hi}] straddles an integer, fractional part is not continuous")]
    StraddlesInteger { lo: String, hi: String },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntervalRepr", into = "IntervalRepr")]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl TryFrom<IntervalRepr> for RationalInterval {
    type Error = IntervalError;
    fn try_from(r: IntervalRepr) -> Result<Self, Self::Error> {
        let lo = parse_rational(&r.lo).ok_or(IntervalError::Parse(r.lo))?;
        let hi = parse_rational(&r.hi).ok_or(IntervalError::Parse(r.hi))?;
        RationalInterval::new(lo, hi)
    }
}

impl From<RationalInterval> for IntervalRepr {
    fn from(iv: RationalInterval) -> Self {
        IntervalRepr {
            lo: format_rational(&iv.lo),
            hi: format_rational(&iv.hi),
        }
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo.numer().bits() > 128 || self.lo.denom().bits() > 128 {
            write!(
                f,
                "[{:.17e}, width ~{:.3e}] ({} bit denominators)",
                crate::rational::to_f64(&self.lo),
                crate::rational::to_f64(&self.width()),
                self.hi.denom().bits().max(self.lo.denom().bits())
            )
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        if cmp_rational(&lo, &hi) == Ordering::Greater {
            return Err(IntervalError::Unordered {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(RationalInterval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: BigRational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[num / den, (num + 1) / den]` where every prime factor of `den` is in
    /// `den_primes`. Reduction only divides out those primes, which avoids a
    /// full gcd on the very long denominators digit samplers produce.
    pub fn cell(num: BigInt, den: BigInt, den_primes: &[u64]) -> Self {
        let lo = reduce_by_primes(num.clone(), den.clone(), den_primes);
        let hi = reduce_by_primes(num + 1, den, den_primes);
        RationalInterval { lo, hi }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        cmp_rational(&self.lo, x) != Ordering::Greater && cmp_rational(x, &self.hi) != Ordering::Greater
    }

    /// Whether the interval lies in `[0, 1)`.
    pub fn in_unit(&self) -> bool {
        !self.lo.is_negative() && self.hi < BigRational::one()
    }

    /// `k * [lo, hi]` for a positive integer `k`.
    pub fn scale(&self, k: &BigInt) -> Self {
        debug_assert!(k.is_positive());
        RationalInterval {
            lo: &self.lo * k,
            hi: &self.hi * k,
        }
    }

    /// Fractional part, provided no integer lies in `(lo, hi]`.
    pub fn frac(&self) -> Result<Self, IntervalError> {
        let f_lo = self.lo.floor();
        let f_hi = self.hi.floor();
        if f_lo != f_hi {
            return Err(IntervalError::StraddlesInteger {
                lo: format_rational(&self.lo),
                hi: format_rational(&self.hi),
            });
        }
        Ok(RationalInterval {
            lo: &self.lo - &f_lo,
            hi: &self.hi - &f_hi,
        })
    }

    /// Outward rounding of both endpoints to multiples of `2^-bits`.
    pub fn widen_to_bits(&self, bits: u64) -> Self {
        let scale = BigInt::one() << bits as usize;
        let lo_num = (self.lo.numer() * &scale).div_floor(self.lo.denom());
        let hi_num = {
            let n = self.hi.numer() * &scale;
            let (q, r) = n.div_mod_floor(self.hi.denom());
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        };
        RationalInterval {
            lo: BigRational::new(lo_num, scale.clone()),
            hi: BigRational::new(hi_num, scale),
        }
    }

    /// Natural log of the width (negative infinity for points).
    pub fn log_width(&self) -> f64 {
        crate::rational::ln_abs(&self.width())
    }
}
