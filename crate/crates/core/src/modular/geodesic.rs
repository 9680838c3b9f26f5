//! Geodesic states on the cross-section and the first-return map.
//!
//! A return is found by walking the Farey tessellation toward the backward
//! endpoint. Every Farey edge is a `Gamma`-translate of the imaginary axis,
//! and the first crossed edge whose pulled-back endpoints satisfy the `C+`
//! or `C-` conditions is the next crossing of the section.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{
    cross_section_class, endpoints, section_tolerance, Endpoint, IntMatrix, ModularError,
    Psl2Element, SectionClass,
};
use crate::cf::{expand_interval, gauss_map};
use crate::interval::RationalInterval;
use crate::scalar::{Ball, RealScalar, Scalar};

const MAX_EDGES: usize = 1_000_000;

/// Forward endpoint used to put a start value on the section.
pub const DEFAULT_E_PLUS: i64 = -2;

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState<S> {
    element: Psl2Element<S>,
    e_minus: Endpoint<S>,
    e_plus: Endpoint<S>,
    word: Vec<IntMatrix>,
    class: Option<SectionClass>,
    step: usize,
    crossings: u64,
}

impl<S: Scalar> GeodesicState<S> {
    pub fn from_element(element: Psl2Element<S>) -> Self {
        let (e_minus, e_plus) = endpoints(&element);
        GeodesicState {
            class: cross_section_class(&element),
            element,
            e_minus,
            e_plus,
            word: Vec::new(),
            step: 0,
            crossings: 0,
        }
    }

    /// Start at `u_s`, base point `s + i`.
    pub fn horocycle(s: &BigRational, prec: u32) -> Self {
        Self::from_element(Psl2Element::horocycle(s, prec))
    }

    /// The start element times the tracked word.
    pub fn element(&self) -> &Psl2Element<S> {
        &self.element
    }
    pub fn e_minus(&self) -> &Endpoint<S> {
        &self.e_minus
    }
    pub fn e_plus(&self) -> &Endpoint<S> {
        &self.e_plus
    }
    pub fn word(&self) -> &[IntMatrix] {
        &self.word
    }
    pub fn class(&self) -> Option<SectionClass> {
        self.class
    }
    pub fn step(&self) -> usize {
        self.step
    }
    /// Farey edges crossed during the last return.
    pub fn crossings(&self) -> u64 {
        self.crossings
    }

    pub fn record(&self) -> ReturnRecord {
        let [a, b, c, d] = self.word.last().copied().unwrap_or([1, 0, 0, 1]);
        ReturnRecord {
            step: self.step,
            class: self.class,
            e_minus: self.e_minus.to_f64(),
            e_plus: self.e_plus.finite().map(|x| x.to_f64()),
            crossings: self.crossings,
            matrix: [[a, b], [c, d]],
        }
    }
}

impl<S: RealScalar> GeodesicState<S> {
    /// Start on the section at the element with the given endpoints.
    pub fn on_axis(e_minus: &S, e_plus: &S) -> Result<Self, ModularError> {
        Ok(Self::from_element(Psl2Element::on_axis(e_minus, e_plus)?))
    }

    /// The current crossing as an element with base point on the imaginary axis.
    pub fn at_section(&self) -> Result<Psl2Element<S>, ModularError> {
        match (&self.e_minus, &self.e_plus) {
            (Endpoint::Finite(m), Endpoint::Finite(p)) => Psl2Element::on_axis(m, p),
            _ => Err(ModularError::Endpoints("infinite endpoint".into())),
        }
    }
}

/// One line of a return-orbit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnRecord {
    pub step: usize,
    pub class: Option<SectionClass>,
    pub e_minus: f64,
    pub e_plus: Option<f64>,
    pub crossings: u64,
    /// Integer matrix applied at this step.
    pub matrix: [[i64; 2]; 2],
}

impl ReturnRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn all3(c: [Option<bool>; 3]) -> Option<bool> {
    if c.contains(&Some(false)) {
        Some(false)
    } else if c.iter().all(|x| *x == Some(true)) {
        Some(true)
    } else {
        None
    }
}

/// Certified class from endpoints; `Err(())` when undecided.
fn certified_class<S: Scalar>(
    em: &Endpoint<S>,
    ep: &Endpoint<S>,
) -> Result<Option<SectionClass>, ()> {
    let (Endpoint::Finite(em), Endpoint::Finite(ep)) = (em, ep) else {
        return Ok(None);
    };
    let one = S::one();
    let cmp = |x: &S, y: &S, ok: &[Ordering]| x.try_cmp(y).map(|o| ok.contains(&o));
    use Ordering::*;
    let plus = all3([
        cmp(em, &S::zero(), &[Greater, Equal]),
        cmp(em, &one, &[Less, Equal]),
        cmp(ep, &-one.clone(), &[Less]),
    ]);
    let minus = all3([
        cmp(em, &-one.clone(), &[Greater, Equal]),
        cmp(em, &S::zero(), &[Less, Equal]),
        cmp(ep, &one, &[Greater]),
    ]);
    match (plus, minus) {
        (Some(true), _) => Ok(Some(SectionClass::Plus)),
        (_, Some(true)) => Ok(Some(SectionClass::Minus)),
        (Some(false), Some(false)) => Ok(None),
        _ => Err(()),
    }
}

fn ratio<S: Scalar>(p: i64, q: i64, prec: u32) -> S {
    S::from_rational(&BigRational::new(p.into(), q.into()), prec)
}

/// The next crossing of the section along the `a_t` direction.
pub fn first_return<S: Scalar>(state: &GeodesicState<S>) -> Result<GeodesicState<S>, ModularError> {
    let step = state.step;
    let precision = || ModularError::Precision { step };
    let rational = || ModularError::RationalEndpoint { step };
    let prec = state.element.a().precision();
    let x = state
        .e_minus
        .finite()
        .ok_or_else(|| ModularError::Endpoints("backward endpoint at infinity".into()))?;

    let mut n = x.to_f64().floor() as i64;
    loop {
        match x.try_cmp(&S::from_i64(n, prec)).ok_or_else(precision)? {
            Ordering::Equal => return Err(rational()),
            Ordering::Less => n -= 1,
            Ordering::Greater => match x.try_cmp(&S::from_i64(n + 1, prec)).ok_or_else(precision)? {
                Ordering::Less => break,
                _ => n += 1,
            },
        }
    }

    let start = if state.class.is_some() {
        None
    } else {
        let z = state.element.base_point();
        let slack = section_tolerance(prec) * (1.0 + n.unsigned_abs() as f64);
        let re = z.re.to_f64();
        if re < n as f64 - slack || re > (n + 1) as f64 + slack {
            return Err(ModularError::NotInStrip);
        }
        Some(z)
    };

    let (mut l, mut r) = ((n, 1i64), (n + 1, 1i64));
    let mut crossings = 0u64;
    for _ in 0..MAX_EDGES {
        let ahead = match &start {
            None => true,
            Some(z) => {
                // (x - L)(x - R) + y^2 > 0 means z is outside the edge's semicircle
                let lv: S = ratio(l.0, l.1, prec);
                let rv: S = ratio(r.0, r.1, prec);
                let pow = (z.re.clone() - lv) * (z.re.clone() - rv) + z.im.clone() * z.im.clone();
                pow.try_sign().ok_or_else(precision)? == Ordering::Greater
            }
        };
        if ahead {
            crossings += 1;
            let gamma = [r.0, l.0, r.1, l.1];
            let gamma_s = [l.0, -r.0, l.1, -r.1];
            for m in [gamma, gamma_s] {
                let h = state.element.mul_int(&m);
                let (em, ep) = h.try_endpoints().ok_or_else(precision)?;
                if let Some(class) = certified_class(&em, &ep).map_err(|_| precision())? {
                    let mut word = state.word.clone();
                    word.push(m);
                    return Ok(GeodesicState {
                        element: h,
                        e_minus: em,
                        e_plus: ep,
                        word,
                        class: Some(class),
                        step: step + 1,
                        crossings,
                    });
                }
            }
        }
        let med = (
            l.0.checked_add(r.0).ok_or_else(precision)?,
            l.1.checked_add(r.1).ok_or_else(precision)?,
        );
        match x.try_cmp(&ratio(med.0, med.1, prec)).ok_or_else(precision)? {
            Ordering::Equal => return Err(rational()),
            Ordering::Less => r = med,
            Ordering::Greater => l = med,
        }
    }
    Err(ModularError::WalkLimit(MAX_EDGES))
}

/// Outcome of [`verify_gauss_factor`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussCheck {
    /// `| |e_-(x_j)| - G^j(mid) |` for `j = 1..=k`, as certified upper bounds.
    pub residuals: Vec<f64>,
    /// Whether every return changed class.
    pub alternates: bool,
    /// Farey edges crossed per return; these reproduce the partial quotients.
    pub crossings: Vec<u64>,
    pub trace: Vec<ReturnRecord>,
}

impl GaussCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Follows `k` returns from the section point with `e_- = s`, `e_+ = -2`
/// and compares `|e_-|` with the Gauss map iterates of the midpoint of `s`.
///
/// A degenerate (rational) `s` is followed exactly from `u_s` instead, which
/// ends with [`ModularError::RationalEndpoint`].
pub fn verify_gauss_factor(
    s: &RationalInterval,
    k: usize,
    prec: u32,
) -> Result<GaussCheck, ModularError> {
    let unit = s.lo() > &BigRational::zero() && s.hi() < &BigRational::from_integer(1.into());
    if !unit {
        return Err(ModularError::BadStart(format!("[{}, {}]", s.lo(), s.hi())));
    }
    if s.is_point() {
        let mut st = GeodesicState::<BigRational>::horocycle(s.lo(), 0);
        loop {
            st = first_return(&st)?;
        }
    }
    let cf = expand_interval(s, k + 1).map_err(|e| ModularError::BadStart(e.to_string()))?;
    if cf.certified() < k {
        return Err(ModularError::ShortExpansion {
            certified: cf.certified(),
            needed: k,
        });
    }
    let em = Ball::from_endpoints(s.lo(), s.hi(), prec);
    let mut state = GeodesicState::on_axis(&em, &Ball::from_int(DEFAULT_E_PLUS, prec))?;
    let mut g = s.midpoint();
    let mut out = GaussCheck {
        residuals: Vec::with_capacity(k),
        alternates: true,
        crossings: Vec::with_capacity(k),
        trace: Vec::with_capacity(k),
    };
    for _ in 0..k {
        let next = first_return(&state)?;
        if next.class.is_none() || next.class.map(SectionClass::other) != state.class {
            out.alternates = false;
        }
        state = next;
        g = gauss_map(&g).map_err(|e| ModularError::BadStart(e.to_string()))?;
        let em = state.e_minus.finite().expect("returns land on finite endpoints");
        let diff = em.abs() - Ball::from_rational(&g, prec);
        out.residuals.push(diff.abs_upper_f64());
        out.crossings.push(state.crossings);
        out.trace.push(state.record());
    }
    Ok(out)
}
