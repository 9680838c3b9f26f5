//! Small helpers for arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parse `"p/q"`, `"p"` or a finite decimal such as `"0.61"` or `"-1.5e-3"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / 10;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Order of two rationals by cross multiplication. The `Ord` impl of
/// `num_rational` recurses once per continued fraction step, which overflows
/// the stack on operands with tens of thousands of bits.
pub fn cmp_rational(a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `f64` approximation that stays accurate for very long numerators and denominators.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    if nb < 1000 && db < 1000 {
        return q.to_f64().unwrap_or(f64::NAN);
    }
    let (n, ne) = top_bits(q.numer());
    let (d, de) = top_bits(q.denom());
    crate::scalar::ball::ldexp(n / d, ne - de)
}

fn top_bits(x: &BigInt) -> (f64, i64) {
    let bits = x.bits() as i64;
    if bits <= 64 {
        (x.to_f64().unwrap_or(0.0), 0)
    } else {
        let s = bits - 64;
        ((x >> s as usize).to_f64().unwrap_or(0.0), s)
    }
}

/// Natural logarithm of `|x|`; negative infinity for zero.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_int(q.numer()) - ln_int(q.denom())
}

fn ln_int(x: &BigInt) -> f64 {
    let (m, e) = top_bits(&x.abs());
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// `num / den` reduced by dividing out the listed primes only.
pub fn reduce_by_primes(mut num: BigInt, mut den: BigInt, primes: &[u64]) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    for &p in primes {
        let p = BigInt::from(p);
        loop {
            let zero = BigInt::zero();
            if (&num % &p) != zero || (&den % &p) != zero {
                break;
            }
            num /= &p;
            den /= &p;
        }
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    BigRational::new_raw(num, den)
}

/// Distinct prime factors of a small positive integer.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Convert an `f64` to the exact rational it represents.
pub fn from_f64_exact(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("2/3"), Some(q(2, 3)));
        assert_eq!(parse_rational(" -4 "), Some(q(-4, 1)));
        assert_eq!(parse_rational("0.61"), Some(q(61, 100)));
        assert_eq!(parse_rational("1.5e-3"), Some(q(3, 2000)));
        assert_eq!(parse_rational("2e2"), Some(q(200, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn reduce_matches_gcd_reduction() {
        let r = reduce_by_primes(BigInt::from(18), BigInt::from(27), &[3]);
        assert_eq!(r, BigRational::new(2.into(), 3.into()));
        assert_eq!(*r.numer(), BigInt::from(2));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::one() << 5000usize;
        let q = BigRational::new(big.clone(), big * 3);
        assert!((to_f64(&q) - 1.0 / 3.0).abs() < 1e-15);
        assert!((ln_abs(&q) + 3f64.ln()).abs() < 1e-12);
    }
}
