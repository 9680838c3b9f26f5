use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::interval::RationalInterval;
use crate::rational::prime_factors;

/// A finite digit string in base `base` together with the seed that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSample {
    pub base: u32,
    pub digits: Vec<u8>,
    pub seed: u64,
}

impl DigitSample {
    /// The cell of reals whose first digits are `digits`.
    pub fn interval(&self) -> RationalInterval {
        digits_to_interval(self.base, &self.digits)
    }
}

/// `[N / base^D, (N + 1) / base^D]` with `N` the digit string read as an integer.
pub fn digits_to_interval(base: u32, digits: &[u8]) -> RationalInterval {
    let b = base as u64;
    // largest k with b^k < 2^64
    let mut k = 1usize;
    let mut chunk_base = b;
    while let Some(next) = chunk_base.checked_mul(b) {
        chunk_base = next;
        k += 1;
    }
    let mut num = BigInt::zero();
    for chunk in digits.chunks(k) {
        let mut v = 0u64;
        for &d in chunk {
            v = v * b + d as u64;
        }
        let scale = if chunk.len() == k {
            BigInt::from(chunk_base)
        } else {
            BigInt::from(b).pow(chunk.len() as u32)
        };
        num = num * scale + v;
    }
    let den = if digits.is_empty() {
        BigInt::one()
    } else {
        BigInt::from(b).pow(digits.len() as u32)
    };
    RationalInterval::cell(num, den, &prime_factors(b))
}
