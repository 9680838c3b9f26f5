//! Random points of fractal measures, emitted as certified digit cells.

mod digits;
mod parry;

use serde::{Deserialize, Serialize};

use crate::interval::RationalInterval;
use crate::rng::{derive_seed, SplitMix64};

pub use digits::{digits_to_interval, DigitSample};
pub use parry::{build_parry, ParryChain};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplerError {
    #[error("transition matrix must be square with 0/1 entries")]
    NotBinarySquare,
    #[error("transition matrix is reducible: state {from} cannot reach state {to}")]
    Reducible { from: usize, to: usize },
    #[error("transition matrix is empty")]
    Empty,
    #[error("power iteration did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("digit map must send {states} states injectively into 0..{base}")]
    BadDigitMap { states: usize, base: u32 },
    #[error("base must be at least 2, got {0}")]
    BadBase(u32),
}

/// Digits of the middle-third Cantor measure: i.i.d. fair choices in `{0, 2}`.
pub fn sample_cantor_digits(d: usize, seed: u64) -> DigitSample {
    let mut rng = SplitMix64::new(seed);
    let digits = (0..d).map(|_| 2 * rng.next_bit()).collect();
    DigitSample {
        base: 3,
        digits,
        seed,
    }
}

/// The ternary cell of `d` random Cantor digits.
pub fn sample_cantor(d: usize, seed: u64) -> RationalInterval {
    sample_cantor_digits(d, seed).interval()
}

/// Digits following the Parry chain, mapped through `digit_map` into base `base`.
pub fn sample_sft_digits(
    chain: &ParryChain,
    digit_map: &[u32],
    base: u32,
    d: usize,
    seed: u64,
) -> Result<DigitSample, SamplerError> {
    check_digit_map(chain.states(), digit_map, base)?;
    let mut rng = SplitMix64::new(seed);
    let mut digits = Vec::with_capacity(d);
    let mut state: Option<usize> = None;
    for _ in 0..d {
        let u = rng.next_f64();
        let next = match state {
            None => pick(chain.stationary(), u),
            Some(s) => pick(chain.transitions()[s].as_slice(), u),
        };
        digits.push(digit_map[next] as u8);
        state = Some(next);
    }
    Ok(DigitSample { base, digits, seed })
}

pub fn sample_sft(
    chain: &ParryChain,
    digit_map: &[u32],
    base: u32,
    d: usize,
    seed: u64,
) -> Result<RationalInterval, SamplerError> {
    Ok(sample_sft_digits(chain, digit_map, base, d, seed)?.interval())
}

fn check_digit_map(states: usize, digit_map: &[u32], base: u32) -> Result<(), SamplerError> {
    let bad = SamplerError::BadDigitMap { states, base };
    if base < 2 {
        return Err(SamplerError::BadBase(base));
    }
    if digit_map.len() != states || digit_map.iter().any(|&x| x >= base) {
        return Err(bad);
    }
    let mut seen = digit_map.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != states {
        return Err(bad);
    }
    Ok(())
}

/// Inverse-CDF pick; falls back to the last positive entry against rounding.
fn pick(probs: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// A serializable description of a one-dimensional sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplerSpec {
    /// Natural measure on the middle-third Cantor set.
    Cantor,
    /// Maximal-entropy measure of the shift defined by `matrix`.
    Sft {
        matrix: Vec<Vec<u8>>,
        base: u32,
        digit_map: Vec<u32>,
    },
}

/// A [`SamplerSpec`] with its Parry chain precomputed.
#[derive(Debug, Clone)]
pub enum Sampler {
    Cantor,
    Sft {
        chain: ParryChain,
        base: u32,
        digit_map: Vec<u32>,
    },
}

impl SamplerSpec {
    pub fn build(&self) -> Result<Sampler, SamplerError> {
        match self {
            SamplerSpec::Cantor => Ok(Sampler::Cantor),
            SamplerSpec::Sft {
                matrix,
                base,
                digit_map,
            } => {
                let chain = build_parry(matrix)?;
                check_digit_map(chain.states(), digit_map, *base)?;
                Ok(Sampler::Sft {
                    chain,
                    base: *base,
                    digit_map: digit_map.clone(),
                })
            }
        }
    }
}

impl Sampler {
    pub fn base(&self) -> u32 {
        match self {
            Sampler::Cantor => 3,
            Sampler::Sft { base, .. } => *base,
        }
    }

    pub fn sample_digits(&self, d: usize, seed: u64) -> DigitSample {
        match self {
            Sampler::Cantor => sample_cantor_digits(d, seed),
            Sampler::Sft {
                chain,
                base,
                digit_map,
            } => sample_sft_digits(chain, digit_map, *base, d, seed)
                .expect("digit map validated at build time"),
        }
    }

    pub fn sample(&self, d: usize, seed: u64) -> RationalInterval {
        self.sample_digits(d, seed).interval()
    }
}

/// Two independent samples drawn from split seeds.
pub fn sample_product(
    sx: &Sampler,
    sy: &Sampler,
    d: usize,
    seed: u64,
) -> (RationalInterval, RationalInterval) {
    (
        sx.sample(d, derive_seed(seed, 0)),
        sy.sample(d, derive_seed(seed, 1)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn forced_cantor_digits() {
        assert_eq!(
            digits_to_interval(3, &[0]),
            RationalInterval::new(q(0, 1), q(1, 3)).unwrap()
        );
        assert_eq!(
            digits_to_interval(3, &[2, 0]),
            RationalInterval::new(q(2, 3), q(2, 3) + q(1, 9)).unwrap()
        );
    }

    #[test]
    fn long_cantor_sample() {
        let s = sample_cantor_digits(30_000, 42);
        assert!(s.digits.iter().all(|&d| d == 0 || d == 2));
        let zeros = s.digits.iter().filter(|&&d| d == 0).count() as f64;
        let n = s.digits.len() as f64;
        let sigma = 0.5 / n.sqrt();
        assert!((zeros / n - 0.5).abs() < 3.0 * sigma);
        let iv = s.interval();
        let width = iv.width();
        assert_eq!(*width.numer(), 1.into());
        assert_eq!(*width.denom(), num_bigint::BigInt::from(3).pow(30_000));
    }

    #[test]
    fn sft_with_no_digits_is_unit_interval() {
        let chain = build_parry(&[vec![1, 1], vec![1, 0]]).unwrap();
        let iv = sample_sft(&chain, &[0, 1], 2, 0, 9).unwrap();
        assert_eq!(iv, RationalInterval::new(q(0, 1), q(1, 1)).unwrap());
    }

    #[test]
    fn golden_mean_shift_avoids_forbidden_block() {
        let chain = build_parry(&[vec![1, 1], vec![1, 0]]).unwrap();
        let s = sample_sft_digits(&chain, &[0, 1], 2, 20_000, 5).unwrap();
        assert!(!s.digits.windows(2).any(|w| w == [1, 1]));
        assert!(s.digits.contains(&1));
    }

    #[test]
    fn full_shift_on_two_symbols_is_the_cantor_sampler() {
        let chain = build_parry(&[vec![1, 1], vec![1, 1]]).unwrap();
        for seed in [0, 1, 99] {
            let a = sample_sft_digits(&chain, &[0, 2], 3, 500, seed).unwrap();
            assert_eq!(a.digits, sample_cantor_digits(500, seed).digits);
        }
    }

    #[test]
    fn bad_digit_maps_rejected() {
        let chain = build_parry(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(sample_sft(&chain, &[0, 0], 3, 5, 1).is_err());
        assert!(sample_sft(&chain, &[0, 3], 3, 5, 1).is_err());
        assert!(sample_sft(&chain, &[0], 3, 5, 1).is_err());
    }

    #[test]
    fn product_is_deterministic_with_split_streams() {
        let c = SamplerSpec::Cantor.build().unwrap();
        let a = sample_product(&c, &c, 64, 11);
        assert_eq!(a, sample_product(&c, &c, 64, 11));
        assert_ne!(a.0, a.1);
        let x = c.sample_digits(64, derive_seed(11, 0));
        let y = c.sample_digits(64, derive_seed(11, 1));
        assert_ne!(x.digits, y.digits);
        assert_eq!(a.0, x.interval());
    }

    #[test]
    fn spec_serde() {
        let s: SamplerSpec = serde_json::from_str(r#"{"kind":"cantor"}"#).unwrap();
        assert_eq!(s, SamplerSpec::Cantor);
        let t: SamplerSpec = serde_json::from_str(
            r#"{"kind":"sft","matrix":[[1,1],[1,0]],"base":2,"digit_map":[0,1]}"#,
        )
        .unwrap();
        assert_eq!(t.build().unwrap().base(), 2);
        let bad: SamplerSpec = serde_json::from_str(
            r#"{"kind":"sft","matrix":[[1,0],[0,1]],"base":2,"digit_map":[0,1]}"#,
        )
        .unwrap();
        assert!(matches!(bad.build(), Err(SamplerError::Reducible { .. })));
    }
}
