//! Multi-precision midpoint-radius ("ball") arithmetic.
//!
//! A [`Ball`] encloses a real number in `[mid - rad, mid + rad]`. The midpoint
//! is a dyadic `man * 2^exp` with an arbitrary-precision mantissa that is kept
//! at `prec` significant bits; the radius is a small upper-bound magnitude
//! [`Mag`]. Every operation returns a ball that contains the exact result for
//! every choice of inputs inside the argument balls.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision used when neither operand carries one.
pub const DEFAULT_PREC: u32 = 128;

const MAG_BITS: u32 = 30;

/// Nonnegative upper bound `man * 2^exp` with a 30-bit mantissa.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

impl Mag {
    pub const ZERO: Mag = Mag { man: 0, exp: 0 };
    pub const INF: Mag = Mag {
        man: 1,
        exp: i64::MAX,
    };

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub fn is_inf(&self) -> bool {
        self.exp == i64::MAX
    }

    /// `2^exp`, exactly.
    pub fn pow2(exp: i64) -> Mag {
        Mag { man: 1, exp }
    }

    fn normalize(man: u128, exp: i64, up: bool) -> Mag {
        if man == 0 {
            return Mag::ZERO;
        }
        let bits = 128 - man.leading_zeros();
        let (mut m, mut e) = if bits <= MAG_BITS {
            (man as u64, exp)
        } else {
            let s = bits - MAG_BITS;
            let mut m = (man >> s) as u64;
            if up && (man & ((1u128 << s) - 1)) != 0 {
                m += 1;
            }
            (m, exp.saturating_add(s as i64))
        };
        if m >> MAG_BITS != 0 {
            m >>= 1;
            e = e.saturating_add(1);
        }
        if e > i64::MAX / 4 {
            return Mag::INF;
        }
        Mag { man: m, exp: e }
    }

    fn from_bigint(x: &BigInt, exp: i64, up: bool) -> Mag {
        let bits = x.bits();
        if bits == 0 {
            return Mag::ZERO;
        }
        if bits <= 64 {
            let m = x.magnitude().to_u64().unwrap_or(u64::MAX);
            return Mag::normalize(m as u128, exp, up);
        }
        let s = bits - 64;
        let top = (x.magnitude() >> s).to_u64().unwrap_or(u64::MAX);
        let inexact = x.magnitude().trailing_zeros().unwrap_or(0) < s;
        let m = if up && inexact { top as u128 + 1 } else { top as u128 };
        Mag::normalize(m, exp.saturating_add(s as i64), up)
    }

    /// Upper bound on `|d|`.
    pub fn of_dyadic_up(d: &Dyadic) -> Mag {
        Mag::from_bigint(&d.man, d.exp, true)
    }

    /// Lower bound on `|d|`.
    pub fn of_dyadic_down(d: &Dyadic) -> Mag {
        Mag::from_bigint(&d.man, d.exp, false)
    }

    pub fn add(self, other: Mag) -> Mag {
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = hi.exp - lo.exp;
        if shift >= MAG_BITS as i64 {
            // lo < 2^(lo.exp + 30) <= 2^hi.exp: one unit of hi covers it.
            Mag::normalize(hi.man as u128 + 1, hi.exp, true)
        } else {
            Mag::normalize(((hi.man as u128) << shift) + lo.man as u128, lo.exp, true)
        }
    }

    pub fn mul(self, other: Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::ZERO;
        }
        if self.is_inf() || other.is_inf() {
            return Mag::INF;
        }
        Mag::normalize(
            self.man as u128 * other.man as u128,
            self.exp.saturating_add(other.exp),
            true,
        )
    }

    /// Upper bound on `self / other`, where `other` is a lower bound of the divisor.
    pub fn div(self, other: Mag) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        if other.is_zero() || self.is_inf() {
            return Mag::INF;
        }
        let num = (self.man as u128) << 64;
        let den = other.man as u128;
        let q = num.div_ceil(den);
        Mag::normalize(q, self.exp - other.exp - 64, true)
    }

    pub fn mul_pow2(self, k: i64) -> Mag {
        if self.is_zero() || self.is_inf() {
            return self;
        }
        Mag {
            man: self.man,
            exp: self.exp.saturating_add(k),
        }
    }

    pub fn to_dyadic(self) -> Dyadic {
        Dyadic {
            man: BigInt::from(self.man),
            exp: self.exp,
        }
    }

    /// `self <= other`, exactly.
    pub fn le(self, other: Mag) -> bool {
        if self.is_zero() || other.is_inf() {
            return true;
        }
        if self.is_inf() || other.is_zero() {
            return false;
        }
        self.to_dyadic().cmp_value(&other.to_dyadic()) != Ordering::Greater
    }

    /// Upper bound as an `f64` (saturates to infinity).
    pub fn to_f64_up(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.is_inf() {
            return f64::INFINITY;
        }
        let v = ldexp(self.man as f64, self.exp);
        if v == 0.0 {
            f64::from_bits(1)
        } else {
            v
        }
    }
}

/// Scale `x` by `2^e` without intermediate overflow for moderate `e`.
pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut v = x;
    let mut e = e.clamp(-4000, 4000);
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// Exact dyadic rational `man * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic { man: n, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit plus one (`|x| < 2^top`).
    fn top(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    fn abs(&self) -> Dyadic {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    fn add_exact(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Dyadic { man: a + b, exp: e }
    }

    fn mul_exact(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let d = self.add_exact(&other.neg());
        match d.man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Truncate to `prec` significant bits, returning the truncation error bound.
    fn round(&mut self, prec: u32) -> Mag {
        let bits = self.bits();
        if bits <= prec as u64 {
            self.normalize_trailing();
            return Mag::ZERO;
        }
        let s = bits - prec as u64;
        let inexact = self.man.trailing_zeros().unwrap_or(0) < s;
        // Truncate the magnitude, i.e. round toward zero.
        let neg = self.man.is_negative();
        let mag = self.man.magnitude() >> s;
        self.man = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag);
        self.exp += s as i64;
        let unit = self.exp;
        self.normalize_trailing();
        if inexact {
            Mag::pow2(unit)
        } else {
            Mag::ZERO
        }
    }

    fn normalize_trailing(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz as usize;
                self.exp += tz as i64;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            (&self.man >> s as usize, self.exp + s as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest integer (ties toward +infinity).
    fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as usize
        } else {
            let sh = (-self.exp) as usize;
            let half = BigInt::one() << (sh - 1);
            // Arithmetic shift on BigInt floors toward -infinity.
            (&self.man + half) >> sh
        }
    }

    fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let mut d = Dyadic {
            man: BigInt::from(m) * sign,
            exp: e,
        };
        d.normalize_trailing();
        Some(d)
    }
}

/// A real number enclosed as `mid ± rad`.
#[derive(Clone)]
pub struct Ball {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Ball({:e} ± {:e}, {} bits)",
            self.mid.to_f64(),
            self.rad.to_f64_up(),
            self.prec
        )
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} ± {:e}", self.mid.to_f64(), self.rad.to_f64_up())
    }
}

fn eff(prec: u32) -> u32 {
    if prec == 0 {
        DEFAULT_PREC
    } else {
        prec
    }
}

impl Ball {
    /// An exact ball. `prec` is the precision used by subsequent operations.
    pub fn exact(mid: Dyadic, prec: u32) -> Ball {
        Ball {
            mid,
            rad: Mag::ZERO,
            prec,
        }
    }

    pub fn from_int<I: Into<BigInt>>(n: I, prec: u32) -> Ball {
        Ball::exact(Dyadic::from_int(n.into()), prec)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64, prec: u32) -> Ball {
        match Dyadic::from_f64(x) {
            Some(d) => Ball::exact(d, prec),
            None => Ball::infinite(prec),
        }
    }

    /// Enclosure of a rational rounded to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Ball {
        let num = Ball::from_int(q.numer().clone(), prec);
        if q.denom().is_one() {
            let mut b = num;
            b.round_mid();
            return b;
        }
        let den = q.denom();
        if den.trailing_zeros() == Some(den.bits() - 1) {
            // Power-of-two denominator: exact dyadic.
            let mut b = Ball::exact(
                Dyadic {
                    man: q.numer().clone(),
                    exp: -((den.bits() - 1) as i64),
                },
                prec,
            );
            b.round_mid();
            return b;
        }
        num / Ball::from_int(den.clone(), prec)
    }

    /// Ball with midpoint `mid` and radius bounded above by `rad`.
    pub fn with_radius(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        Ball { mid, rad, prec }
    }

    /// Ball covering the closed rational interval `[lo, hi]`.
    pub fn from_endpoints(lo: &BigRational, hi: &BigRational, prec: u32) -> Ball {
        let a = Ball::from_rational(lo, prec);
        let b = Ball::from_rational(hi, prec);
        a.hull(&b)
    }

    fn infinite(prec: u32) -> Ball {
        Ball {
            mid: Dyadic::zero(),
            rad: Mag::INF,
            prec,
        }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Ball {
        self.prec = prec;
        self.round_mid();
        self
    }

    pub fn is_finite(&self) -> bool {
        !self.rad.is_inf()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn round_mid(&mut self) {
        let err = self.mid.round(eff(self.prec));
        self.rad = self.rad.add(err);
    }

    fn lower(&self) -> Dyadic {
        self.mid.add_exact(&self.rad.to_dyadic().neg())
    }

    fn upper(&self) -> Dyadic {
        self.mid.add_exact(&self.rad.to_dyadic())
    }

    /// Certified sign, or `None` when the ball straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.rad.is_inf() {
            return None;
        }
        if self.mid.is_zero() {
            return if self.rad.is_zero() {
                Some(Ordering::Equal)
            } else {
                None
            };
        }
        let abs = self.mid.abs();
        if abs.cmp_value(&self.rad.to_dyadic()) == Ordering::Greater {
            Some(if self.mid.man.is_negative() {
                Ordering::Less
            } else {
                Ordering::Greater
            })
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.sign().is_none_or(|s| s == Ordering::Equal)
    }

    pub fn abs(&self) -> Ball {
        if self.mid.man.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Smallest ball containing both arguments.
    pub fn hull(&self, other: &Ball) -> Ball {
        if !self.is_finite() || !other.is_finite() {
            return Ball::infinite(self.prec.max(other.prec));
        }
        let lo = min_dy(self.lower(), other.lower());
        let hi = max_dy(self.upper(), other.upper());
        from_bounds(lo, hi, self.prec.max(other.prec))
    }

    /// Enclosure of `max(x, y)` over the two balls.
    pub fn max(&self, other: &Ball) -> Ball {
        if !self.is_finite() || !other.is_finite() {
            return Ball::infinite(self.prec.max(other.prec));
        }
        let lo = max_dy(self.lower(), other.lower());
        let hi = max_dy(self.upper(), other.upper());
        from_bounds(lo, hi, self.prec.max(other.prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.rad.to_f64_up()
    }

    pub fn round_to_int(&self) -> BigInt {
        self.mid.round_to_int()
    }

    /// Multiply by `2^k`, exactly.
    pub fn mul_pow2(&self, k: i64) -> Ball {
        let mut mid = self.mid.clone();
        if !mid.is_zero() {
            mid.exp += k;
        }
        Ball {
            mid,
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn sqr(&self) -> Ball {
        self.clone() * self.clone()
    }

    pub fn sqrt(&self) -> Ball {
        let p = eff(self.prec);
        if self.mid.is_zero() && self.rad.is_zero() {
            return self.clone();
        }
        let lo = self.lower();
        if !self.is_finite() || lo.man.sign() != Sign::Plus {
            return Ball::infinite(self.prec);
        }
        let (root, root_exp) = isqrt_dyadic(&self.mid, p + 2);
        let trunc = Mag::pow2(root_exp);
        let mut rad = trunc;
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= r / sqrt(lo)
            let (lo_root, lo_exp) = isqrt_dyadic(&lo, 32);
            let lo_mag = Mag::of_dyadic_down(&Dyadic {
                man: lo_root,
                exp: lo_exp,
            });
            rad = rad.add(self.rad.div(lo_mag));
        }
        let mut out = Ball {
            mid: Dyadic {
                man: root,
                exp: root_exp,
            },
            rad,
            prec: self.prec,
        };
        out.round_mid();
        out
    }

    pub fn exp(&self) -> Ball {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ball::from_int(1, self.prec);
        }
        if !self.is_finite() || self.mid.top() > 40 {
            return Ball::infinite(self.prec);
        }
        let p = eff(self.prec);
        let shift = (self.mid.top() + 12).max(0);
        let wp = p + shift as u32 + 30;
        let mut y = Ball::exact(self.mid.clone(), wp);
        y.mid.exp -= shift;
        if y.mid.is_zero() {
            y.mid.exp = 0;
        }
        let mut sum = Ball::from_int(1, wp);
        let mut term = Ball::from_int(1, wp);
        let stop = Mag::pow2(-(wp as i64) - 4);
        let mut k = 1u64;
        loop {
            term = term * y.clone() / Ball::from_int(k, wp);
            sum = sum + term.clone();
            let t = Mag::of_dyadic_up(&term.mid).add(term.rad);
            if t.le(stop) || k > 10_000 {
                // |y| < 2^-12: the remaining tail is below |term|.
                sum.rad = sum.rad.add(t);
                break;
            }
            k += 1;
        }
        for _ in 0..shift {
            sum = sum.sqr();
        }
        let mut out = sum.with_prec(self.prec);
        if !self.rad.is_zero() {
            if !self.rad.le(Mag::pow2(-1)) {
                return Ball::infinite(self.prec);
            }
            // exp(m + h) - exp(m) <= exp(m) (e^r - 1) <= exp(m) * 2r for r <= 1/2.
            let bound = Mag::of_dyadic_up(&out.mid)
                .add(out.rad)
                .mul(self.rad.mul_pow2(1));
            out.rad = out.rad.add(bound);
        }
        out
    }

    /// Certified comparison of the enclosed values.
    pub fn try_cmp(&self, other: &Ball) -> Option<Ordering> {
        (self.clone() - other.clone()).sign()
    }
}

fn min_dy(a: Dyadic, b: Dyadic) -> Dyadic {
    if a.cmp_value(&b) == Ordering::Greater {
        b
    } else {
        a
    }
}

fn max_dy(a: Dyadic, b: Dyadic) -> Dyadic {
    if a.cmp_value(&b) == Ordering::Less {
        b
    } else {
        a
    }
}

fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Ball {
    let sum = lo.add_exact(&hi);
    let mut mid = Dyadic {
        man: sum.man,
        exp: sum.exp - 1,
    };
    let half = hi.add_exact(&lo.neg());
    let mut rad = Mag::of_dyadic_up(&Dyadic {
        man: half.man,
        exp: half.exp - 1,
    });
    rad = rad.add(mid.round(eff(prec)));
    Ball { mid, rad, prec }
}

/// Floor square root of a positive dyadic with at least `bits` significant bits.
fn isqrt_dyadic(x: &Dyadic, bits: u32) -> (BigInt, i64) {
    let want = 2 * bits as i64 + 2;
    let mut s = (want - x.bits() as i64).max(0);
    if (x.exp - s).rem_euclid(2) != 0 {
        s += 1;
    }
    let scaled = &x.man << s as usize;
    (scaled.sqrt(), (x.exp - s) / 2)
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, other: Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let p = eff(prec) as i64;
        let rad = self.rad.add(other.rad);
        if rad.is_inf() {
            return Ball::infinite(prec);
        }
        if !self.mid.is_zero() && !other.mid.is_zero() {
            let gap = self.mid.top() - other.mid.top();
            if gap > p + 4 {
                let rad = rad.add(Mag::of_dyadic_up(&other.mid));
                let mut out = Ball {
                    mid: self.mid,
                    rad,
                    prec,
                };
                out.round_mid();
                return out;
            }
            if -gap > p + 4 {
                let rad = rad.add(Mag::of_dyadic_up(&self.mid));
                let mut out = Ball {
                    mid: other.mid,
                    rad,
                    prec,
                };
                out.round_mid();
                return out;
            }
        }
        let mut out = Ball {
            mid: self.mid.add_exact(&other.mid),
            rad,
            prec,
        };
        out.round_mid();
        out
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, other: Ball) -> Ball {
        self + (-other)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, other: Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        if self.rad.is_inf() || other.rad.is_inf() {
            return Ball::infinite(prec);
        }
        let am = Mag::of_dyadic_up(&self.mid);
        let bm = Mag::of_dyadic_up(&other.mid);
        let rad = am
            .mul(other.rad)
            .add(bm.mul(self.rad))
            .add(self.rad.mul(other.rad));
        let mut out = Ball {
            mid: self.mid.mul_exact(&other.mid),
            rad,
            prec,
        };
        out.round_mid();
        out
    }
}

impl Div for Ball {
    type Output = Ball;
    fn div(self, other: Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        if self.rad.is_inf() || other.rad.is_inf() || other.contains_zero() {
            return Ball::infinite(prec);
        }
        let p = eff(prec) as i64;
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ball::exact(Dyadic::zero(), prec);
        }
        let k = (p + 2 + other.mid.bits() as i64 - self.mid.bits() as i64).max(0);
        let q_man = (&self.mid.man << k as usize) / &other.mid.man;
        let q_exp = self.mid.exp - k - other.mid.exp;
        let exact_div = {
            let back = &q_man * &other.mid.man;
            back == (&self.mid.man << k as usize)
        };
        let mut rad = if exact_div {
            Mag::ZERO
        } else {
            Mag::pow2(q_exp)
        };
        let q = Dyadic {
            man: q_man,
            exp: q_exp,
        };
        if !self.rad.is_zero() || !other.rad.is_zero() {
            let b_low = Mag::of_dyadic_down(&other.mid.abs().add_exact(&other.rad.to_dyadic().neg()));
            let num = self.rad.add(Mag::of_dyadic_up(&q).mul(other.rad));
            rad = rad.add(num.div(b_low));
        }
        let mut out = Ball { mid: q, rad, prec };
        out.round_mid();
        out
    }
}

macro_rules! forward_ref_binop {
    ($imp:ident, $method:ident) => {
        impl<'a> $imp<&'a Ball> for &'a Ball {
            type Output = Ball;
            fn $method(self, other: &'a Ball) -> Ball {
                self.clone().$method(other.clone())
            }
        }
        impl<'a> $imp<&'a Ball> for Ball {
            type Output = Ball;
            fn $method(self, other: &'a Ball) -> Ball {
                self.$method(other.clone())
            }
        }
    };
}

forward_ref_binop!(Add, add);
forward_ref_binop!(Sub, sub);
forward_ref_binop!(Mul, mul);
forward_ref_binop!(Div, div);

impl Zero for Ball {
    fn zero() -> Ball {
        Ball::exact(Dyadic::zero(), 0)
    }
    fn is_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }
}

impl One for Ball {
    fn one() -> Ball {
        Ball::from_int(1, 0)
    }
}

impl PartialEq for Ball {
    /// Structural equality of midpoint and radius (not a value comparison).
    fn eq(&self, other: &Ball) -> bool {
        self.mid.cmp_value(&other.mid) == Ordering::Equal && self.rad == other.rad
    }
}
