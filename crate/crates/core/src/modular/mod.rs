//! `PSL_2(R)` as the unit tangent bundle of the hyperbolic plane, with the
//! right Möbius action, geodesic endpoints and the cross-section `C+ ∪ C-`
//! whose first-return map factors onto the Gauss map.

mod geodesic;

use std::cmp::Ordering;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::{RealScalar, Scalar};

pub use geodesic::{
    first_return, verify_gauss_factor, GaussCheck, GeodesicState, ReturnRecord, DEFAULT_E_PLUS,
};

/// Integer matrix `[a, b, c, d]` standing for `[[a, b], [c, d]]`.
pub type IntMatrix = [i64; 4];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModularError {
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("determinant differs from 1 by more than the tolerance")]
    Determinant,
    #[error("invalid endpoint pair: {0}")]
    Endpoints(String),
    #[error("backward endpoint is rational; returns stop after step {step}")]
    RationalEndpoint { step: usize },
    #[error("precision exhausted at step {step}")]
    Precision { step: usize },
    #[error("base point lies outside the unit strip of its backward endpoint")]
    NotInStrip,
    #[error("no return found within {0} Farey edges")]
    WalkLimit(usize),
    #[error("start must be an irrational number in (0, 1): {0}")]
    BadStart(String),
    #[error("certified expansion has {certified} terms, {needed} needed")]
    ShortExpansion { certified: usize, needed: usize },
}

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> HPoint<S> {
    pub fn new(re: S, im: S) -> Result<Self, ModularError> {
        if im.try_sign() != Some(Ordering::Greater) {
            return Err(ModularError::NotInUpperHalfPlane);
        }
        Ok(HPoint { re, im })
    }

    /// The point `i`.
    pub fn i(prec: u32) -> Self {
        HPoint {
            re: S::zero(),
            im: S::from_i64(1, prec),
        }
    }
}

/// A boundary point of the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub enum Endpoint<S> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Endpoint<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Endpoint::Finite(x) => Some(x),
            Endpoint::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Finite(x) => x.to_f64(),
            Endpoint::Infinity => f64::INFINITY,
        }
    }

    /// `num / den`, or `None` when `den` can be neither certified zero nor nonzero.
    fn ratio(num: S, den: &S) -> Option<Self> {
        match den.try_sign()? {
            Ordering::Equal => Some(Endpoint::Infinity),
            _ => Some(Endpoint::Finite(num / den.clone())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectionClass {
    #[serde(rename = "Cplus")]
    Plus,
    #[serde(rename = "Cminus")]
    Minus,
}

impl SectionClass {
    pub fn other(self) -> Self {
        match self {
            SectionClass::Plus => SectionClass::Minus,
            SectionClass::Minus => SectionClass::Plus,
        }
    }
}

/// Relative tolerance for "base point on the imaginary axis": `2^-(100 prec / 256)`,
/// and zero for exact scalars.
pub fn section_tolerance(prec: u32) -> f64 {
    if prec == u32::MAX {
        0.0
    } else {
        (2f64).powi(-((u64::from(prec) * 100 / 256) as i32))
    }
}

/// An element of `PSL_2(R)`, stored with the first nonzero of `(a, c)` positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Psl2Element<S> {
    a: S,
    b: S,
    c: S,
    d: S,
}

impl<S: Scalar> Psl2Element<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self, ModularError> {
        let tol = section_tolerance(a.precision());
        let det = a.clone() * d.clone() - b.clone() * c.clone() - S::one();
        if det.abs_lower_f64() > tol {
            return Err(ModularError::Determinant);
        }
        Ok(Self::canonical(a, b, c, d))
    }

    fn canonical(a: S, b: S, c: S, d: S) -> Self {
        let lead = if a.to_f64() != 0.0 { a.to_f64() } else { c.to_f64() };
        if lead < 0.0 {
            Psl2Element {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Psl2Element { a, b, c, d }
        }
    }

    pub fn from_integer(m: &IntMatrix, prec: u32) -> Result<Self, ModularError> {
        let [a, b, c, d] = m.map(|x| S::from_i64(x, prec));
        Self::new(a, b, c, d)
    }

    pub fn identity(prec: u32) -> Self {
        Self::canonical(S::from_i64(1, prec), S::zero(), S::zero(), S::from_i64(1, prec))
    }

    /// `u_s = [[1, -s], [0, 1]]`, whose backward endpoint is `s`.
    pub fn horocycle(s: &BigRational, prec: u32) -> Self {
        Self::canonical(
            S::from_i64(1, prec),
            -S::from_rational(s, prec),
            S::zero(),
            S::from_i64(1, prec),
        )
    }

    pub fn a(&self) -> &S {
        &self.a
    }
    pub fn b(&self) -> &S {
        &self.b
    }
    pub fn c(&self) -> &S {
        &self.c
    }
    pub fn d(&self) -> &S {
        &self.d
    }

    pub fn determinant(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |x: &S, y: &S, z: &S, w: &S| x.clone() * y.clone() + z.clone() * w.clone();
        Self::canonical(
            m(&self.a, &o.a, &self.b, &o.c),
            m(&self.a, &o.b, &self.b, &o.d),
            m(&self.c, &o.a, &self.d, &o.c),
            m(&self.c, &o.b, &self.d, &o.d),
        )
    }

    pub fn mul_int(&self, m: &IntMatrix) -> Self {
        let prec = self.a.precision();
        let [p, q, r, s] = m.map(|x| S::from_i64(x, prec));
        self.mul(&Psl2Element { a: p, b: q, c: r, d: s })
    }

    /// `diag(lambda, 1/lambda) * self`; endpoints are unchanged.
    pub fn scale_diag(&self, lambda: &S) -> Self {
        let inv = S::one() / lambda.clone();
        Self::canonical(
            self.a.clone() * lambda.clone(),
            self.b.clone() * lambda.clone(),
            self.c.clone() * inv.clone(),
            self.d.clone() * inv,
        )
    }

    /// Conjugate by `z -> -conj(z)`; swaps `C+` and `C-`.
    pub fn mirror(&self) -> Self {
        Self::canonical(
            self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.d.clone(),
        )
    }

    /// The base point `i . g`.
    pub fn base_point(&self) -> HPoint<S> {
        let n = self.a.clone() * self.a.clone() + self.c.clone() * self.c.clone();
        HPoint {
            re: -(self.a.clone() * self.b.clone() + self.c.clone() * self.d.clone()) / n.clone(),
            im: S::one() / n,
        }
    }

    /// `(e_-, e_+) = (-b/a, -d/c)`; `None` if a denominator straddles zero.
    pub fn try_endpoints(&self) -> Option<(Endpoint<S>, Endpoint<S>)> {
        Some((
            Endpoint::ratio(-self.b.clone(), &self.a)?,
            Endpoint::ratio(-self.d.clone(), &self.c)?,
        ))
    }

    /// Approximate equality in `PSL_2`, up to the global sign.
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let close = |s: f64| {
            [
                (&self.a, &o.a),
                (&self.b, &o.b),
                (&self.c, &o.c),
                (&self.d, &o.d),
            ]
            .iter()
            .all(|(x, y)| (x.to_f64() - s * y.to_f64()).abs() <= tol)
        };
        close(1.0) || close(-1.0)
    }

    pub fn to_f64s(&self) -> [f64; 4] {
        [self.a.to_f64(), self.b.to_f64(), self.c.to_f64(), self.d.to_f64()]
    }
}

impl<S: RealScalar> Psl2Element<S> {
    /// `a_t g = diag(e^t, e^-t) g`.
    pub fn flow(&self, t: f64) -> Self {
        let prec = self.a.precision();
        self.scale_diag(&S::from_f64(t, prec).exp())
    }

    /// The element with the given endpoints whose base point is on the
    /// imaginary axis. Needs `e_- e_+ < 0`.
    pub fn on_axis(e_minus: &S, e_plus: &S) -> Result<Self, ModularError> {
        let bad = |m: &str| ModularError::Endpoints(m.to_string());
        let prod = e_minus.clone() * e_plus.clone();
        if prod.try_sign() != Some(Ordering::Less) {
            return Err(bad("endpoints must have certified opposite signs"));
        }
        let gap = e_minus.clone() - e_plus.clone();
        let k = (-(e_plus.clone() / e_minus.clone())).sqrt();
        let abs_gap = gap.abs();
        let a = (k.clone() / abs_gap.clone()).sqrt();
        let mut c = (S::one() / (abs_gap * k)).sqrt();
        if gap.try_sign() == Some(Ordering::Less) {
            c = -c;
        }
        let b = -(e_minus.clone() * a.clone());
        let d = -(e_plus.clone() * c.clone());
        Ok(Self::canonical(a, b, c, d))
    }
}

/// The right action `z . g = (dz - b) / (-cz + a)`.
pub fn mobius_act<S: Scalar>(z: &HPoint<S>, g: &Psl2Element<S>) -> HPoint<S> {
    let (x, y) = (z.re.clone(), z.im.clone());
    let nr = g.d.clone() * x.clone() - g.b.clone();
    let dr = g.a.clone() - g.c.clone() * x;
    let cy = g.c.clone() * y.clone();
    let den = dr.clone() * dr.clone() + cy.clone() * cy.clone();
    let re = (nr.clone() * dr.clone() - g.d.clone() * y.clone() * cy.clone()) / den.clone();
    let im = (nr * cy + g.d.clone() * y * dr) / den;
    HPoint { re, im }
}

/// `(e_-, e_+)`; panics only when a denominator cannot be resolved at the
/// current precision, which for well-formed elements needs `a` or `c` tiny.
pub fn endpoints<S: Scalar>(g: &Psl2Element<S>) -> (Endpoint<S>, Endpoint<S>) {
    g.try_endpoints().unwrap_or_else(|| {
        let f = |num: &S, den: &S| {
            if den.to_f64() == 0.0 {
                Endpoint::Infinity
            } else {
                Endpoint::Finite(-(num.clone()) / den.clone())
            }
        };
        (f(&g.b, &g.a), f(&g.d, &g.c))
    })
}

/// Class of `g` in the cross-section, or `None` when it is not on it.
///
/// Closed conditions accept undecided comparisons; strict ones require a certified answer.
pub fn cross_section_class<S: Scalar>(g: &Psl2Element<S>) -> Option<SectionClass> {
    let tol = section_tolerance(g.a.precision());
    let re = g.a.clone() * g.b.clone() + g.c.clone() * g.d.clone();
    let n = g.a.clone() * g.a.clone() + g.c.clone() * g.c.clone();
    if re.abs_lower_f64() > tol * n.abs_upper_f64() {
        return None;
    }
    let (em, ep) = endpoints(g);
    let (em, ep) = (em.finite()?.clone(), ep.finite()?.clone());
    let one = S::one();
    let le = |x: &S, y: &S| x.try_cmp(y) != Some(Ordering::Greater);
    let lt = |x: &S, y: &S| x.try_cmp(y) == Some(Ordering::Less);
    if le(&S::zero(), &em) && le(&em, &one) && lt(&ep, &-one.clone()) {
        Some(SectionClass::Plus)
    } else if le(&-one.clone(), &em) && le(&em, &S::zero()) && lt(&one, &ep) {
        Some(SectionClass::Minus)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::scalar::Ball;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close(z: &HPoint<f64>, re: f64, im: f64) -> bool {
        (z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12
    }

    #[test]
    fn action_examples() {
        let z = HPoint::<f64>::i(53);
        assert!(close(&mobius_act(&z, &Psl2Element::identity(53)), 0.0, 1.0));
        let w = HPoint::new(0.3, 2.0).unwrap();
        let t = Psl2Element::<f64>::from_integer(&[1, 1, 0, 1], 53).unwrap();
        assert!(close(&mobius_act(&w, &t), -0.7, 2.0));
        let s = Psl2Element::<f64>::from_integer(&[0, -1, 1, 0], 53).unwrap();
        // -1/(0.3 + 2i) = (-0.3 + 2i) / 4.09
        assert!(close(&mobius_act(&w, &s), -0.3 / 4.09, 2.0 / 4.09));
        assert!(HPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn endpoint_examples() {
        let u = Psl2Element::<BigRational>::horocycle(&q(2, 5), 0);
        assert_eq!(
            endpoints(&u),
            (Endpoint::Finite(q(2, 5)), Endpoint::Infinity)
        );
        let id = Psl2Element::<BigRational>::identity(0);
        assert_eq!(endpoints(&id), (Endpoint::Finite(q(0, 1)), Endpoint::Infinity));
    }

    #[test]
    fn section_examples() {
        let g = Psl2Element::<Ball>::on_axis(&Ball::from_rational(&q(1, 2), 256), &Ball::from_int(-3, 256))
            .unwrap();
        assert_eq!(cross_section_class(&g), Some(SectionClass::Plus));
        let z = g.base_point();
        assert!(z.re.abs_upper_f64() < 1e-60);
        assert!((z.im.to_f64() - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(cross_section_class(&g.mirror()), Some(SectionClass::Minus));
        let u = Psl2Element::<Ball>::horocycle(&q(1, 2), 256);
        assert_eq!(cross_section_class(&u), None);
        // on the axis but with e_+ inside [-1, 1]
        let h = Psl2Element::<f64>::on_axis(&0.5, &-0.5).unwrap();
        assert_eq!(cross_section_class(&h), None);
    }

    #[test]
    fn on_axis_rejects_same_sign() {
        assert!(Psl2Element::<f64>::on_axis(&0.5, &2.0).is_err());
        assert!(Psl2Element::<f64>::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn sign_is_canonical() {
        let g = Psl2Element::<f64>::new(-2.0, -1.0, -3.0, -2.0).unwrap();
        assert_eq!(g.to_f64s(), [2.0, 1.0, 3.0, 2.0]);
        let h = Psl2Element::<f64>::new(0.0, 1.0, -1.0, 0.0).unwrap();
        assert_eq!(h.to_f64s(), [0.0, -1.0, 1.0, 0.0]);
    }

    fn random_element(rng: &mut SplitMix64) -> Psl2Element<f64> {
        let a = 0.2 + 2.0 * rng.next_f64();
        let b = 4.0 * rng.next_f64() - 2.0;
        let c = 4.0 * rng.next_f64() - 2.0;
        Psl2Element::new(a, b, c, (1.0 + b * c) / a).unwrap()
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..1000 {
            let g = random_element(&mut rng);
            let h = random_element(&mut rng);
            let z = HPoint::new(4.0 * rng.next_f64() - 2.0, 0.1 + 3.0 * rng.next_f64()).unwrap();
            let lhs = mobius_act(&z, &g.mul(&h));
            let rhs = mobius_act(&mobius_act(&z, &g), &h);
            assert!(lhs.im > 0.0 && rhs.im > 0.0);
            let scale = 1.0 + lhs.re.abs() + lhs.im;
            assert!((lhs.re - rhs.re).abs() < 1e-9 * scale);
            assert!((lhs.im - rhs.im).abs() < 1e-9 * scale);
            assert!((g.mul(&h).determinant() - 1.0).abs() < 1e-9);
        }
    }

    fn small() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..50).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn exact_endpoints_invariant_under_diagonal(
            a in small(), b in small(), c in small(), lam in (1i64..100, 1i64..100)
        ) {
            prop_assume!(a != q(0, 1));
            let d = (BigRational::from_integer(1.into()) + &b * &c) / &a;
            let g = Psl2Element::<BigRational>::new(a, b, c, d).unwrap();
            let lam = q(lam.0, lam.1);
            let h = g.scale_diag(&lam);
            prop_assert_eq!(h.determinant(), BigRational::from_integer(1.into()));
            prop_assert_eq!(endpoints(&h), endpoints(&g));
        }

        #[test]
        fn ball_determinant_survives_products(seed in 0u64..1000) {
            let mut rng = SplitMix64::new(seed);
            let mut g = Psl2Element::<Ball>::identity(256);
            for _ in 0..20 {
                let m = [[1, 1, 0, 1], [1, 0, 1, 1], [0, -1, 1, 0], [2, 1, 1, 1]][rng.next_below(4) as usize];
                g = g.mul_int(&m);
            }
            let em = Ball::from_rational(&q(1, 3), 256);
            let ep = Ball::from_int(-7, 256);
            let h = Psl2Element::on_axis(&em, &ep).unwrap().mul(&g);
            prop_assert!((h.determinant() - Ball::from_int(1, 256)).contains_zero());
        }
    }

    #[test]
    fn flow_moves_base_point_toward_backward_endpoint() {
        let g = Psl2Element::<f64>::on_axis(&0.4, &-3.0).unwrap();
        let far = g.flow(12.0);
        assert!((far.base_point().re - 0.4).abs() < 1e-9);
        let back = g.flow(-12.0);
        assert!((back.base_point().re + 3.0).abs() < 1e-9);
    }
}
