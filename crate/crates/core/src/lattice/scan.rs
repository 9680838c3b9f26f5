//! Exact scans over integer multiples of a rational torus point. Every point
//! is written over a common denominator `Q`, so `n v mod 1` becomes integer
//! residues updated by one modular addition per step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::LatticeError;
use crate::rational::format_rational;

/// Common denominator and the numerators reduced mod it.
fn common(points: &[&BigRational]) -> (BigInt, Vec<BigInt>) {
    let q = points
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = points
        .iter()
        .map(|x| (x.numer() * (&q / x.denom())).mod_floor(&q))
        .collect();
    (q, nums)
}

/// Distance to the nearest multiple of `q` for a residue in `[0, q)`.
fn dist(x: &BigInt, q: &BigInt) -> BigInt {
    let y = q - x;
    if &y < x {
        y
    } else {
        x.clone()
    }
}

fn add_mod(x: &mut BigInt, a: &BigInt, q: &BigInt) {
    *x += a;
    if &*x >= q {
        *x -= q;
    }
}

/// A solution `(n, m)` of `||n v - m||_inf < epsilon n^(-1/d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaSolution {
    pub n: u64,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub m: Vec<BigInt>,
    /// `||n v - m||_inf`.
    #[serde(with = "crate::serde_util::rational")]
    pub quality: BigRational,
}

/// All `1 <= n <= n_max` with `||n v - m||_inf < epsilon n^(-1/d)`, where `m`
/// is the nearest integer vector. The test `r^d n < epsilon^d` is exact.
pub fn wa_search(v: &[BigRational], epsilon: &BigRational, n_max: u64) -> Result<Vec<WaSolution>, LatticeError> {
    if !epsilon.is_positive() {
        return Err(LatticeError::Parameter("epsilon must be positive".into()));
    }
    let d = v.len();
    if d == 0 {
        return Err(LatticeError::Dimension(0));
    }
    let refs: Vec<&BigRational> = v.iter().collect();
    let (q, a) = common(&refs);
    // r = x / q, so r^d n < (e_num / e_den)^d  <=>  x^d n e_den^d < e_num^d q^d
    let rhs = (epsilon.numer() * &q).pow(d as u32);
    let e_den_d = epsilon.denom().pow(d as u32);
    let mut x = vec![BigInt::zero(); d];
    let mut out = Vec::new();
    for n in 1..=n_max {
        for i in 0..d {
            add_mod(&mut x[i], &a[i], &q);
        }
        let worst = x.iter().map(|xi| dist(xi, &q)).max().expect("d >= 1");
        if worst.pow(d as u32) * BigInt::from(n) * &e_den_d < rhs {
            let m = (0..d)
                .map(|i| {
                    let floor = (&v[i] * BigRational::from_integer(n.into())).floor().to_integer();
                    if x[i].clone() * 2 > q {
                        floor + 1
                    } else {
                        floor
                    }
                })
                .collect();
            out.push(WaSolution {
                n,
                m,
                quality: BigRational::new(worst, q.clone()),
            });
        }
    }
    Ok(out)
}

/// `nu(N) = N min_{1 <= n <= N^d} dist_inf(n v, Z^d)`.
pub fn dirichlet_min(v: &[BigRational], big_n: u64) -> Result<BigRational, LatticeError> {
    Ok(dirichlet_profile(v, &[big_n])?.remove(0).1)
}

/// `nu(N)` for every `N` in `ns` from a single scan.
pub fn dirichlet_profile(
    v: &[BigRational],
    ns: &[u64],
) -> Result<Vec<(u64, BigRational)>, LatticeError> {
    let d = v.len();
    if d == 0 || d > 2 {
        return Err(LatticeError::Dimension(d));
    }
    if ns.contains(&0) {
        return Err(LatticeError::Parameter("N must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..ns.len()).collect();
    order.sort_by_key(|&i| ns[i]);
    let refs: Vec<&BigRational> = v.iter().collect();
    let (q, a) = common(&refs);
    let mut x = vec![BigInt::zero(); d];
    let mut best: Option<BigInt> = None;
    let mut n = 0u64;
    let mut out = vec![(0u64, BigRational::zero()); ns.len()];
    for &i in &order {
        let limit = ns[i]
            .checked_pow(d as u32)
            .ok_or_else(|| LatticeError::Parameter(format!("N^d overflows for N = {}", ns[i])))?;
        while n < limit {
            n += 1;
            for k in 0..d {
                add_mod(&mut x[k], &a[k], &q);
            }
            let worst = x.iter().map(|xi| dist(xi, &q)).max().expect("d >= 1");
            if best.as_ref().is_none_or(|b| &worst < b) {
                best = Some(worst);
            }
        }
        let b = best.clone().expect("N >= 1 scans n = 1");
        out[i] = (ns[i], BigRational::new(b * BigInt::from(ns[i]), q.clone()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CKind {
    /// `prod |n_i| * dist(sum n_i v_i - gamma, Z)`.
    First,
    /// `|n| * prod dist(n v_i - gamma_i, Z)`.
    Second,
}

/// A new running minimum, found at `bound` (`prod |n_i|` or `|n|`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub bound: u64,
    #[serde(with = "crate::serde_util::rational")]
    pub value: BigRational,
    pub witness: Vec<i64>,
}

impl ScanRecord {
    pub fn value_f64(&self) -> f64 {
        crate::rational::to_f64(&self.value)
    }

    /// `{"bound": ..., "value": "p/q", "witness": [...]}`.
    pub fn to_json_line(&self) -> String {
        format!(
            "{{\"bound\":{},\"value\":\"{}\",\"witness\":{:?}}}",
            self.bound,
            format_rational(&self.value),
            self.witness
        )
    }
}

/// Running minima of the first- or second-type Cassels product up to `h`.
pub fn property_c_scan(
    v: &[BigRational],
    kind: CKind,
    gamma: &[BigRational],
    h: u64,
) -> Result<Vec<ScanRecord>, LatticeError> {
    let d = v.len();
    if d == 0 || d > 2 {
        return Err(LatticeError::Dimension(d));
    }
    if h == 0 {
        return Err(LatticeError::Parameter("H must be at least 1".into()));
    }
    match kind {
        CKind::Second => {
            if gamma.len() != d {
                return Err(LatticeError::Parameter(format!(
                    "second type needs {d} anchors, got {}",
                    gamma.len()
                )));
            }
            Ok(second_type(v, gamma, h))
        }
        CKind::First => {
            if gamma.len() != 1 {
                return Err(LatticeError::Parameter(format!(
                    "first type needs one anchor, got {}",
                    gamma.len()
                )));
            }
            Ok(first_type(v, &gamma[0], h))
        }
    }
}

fn second_type(v: &[BigRational], gamma: &[BigRational], h: u64) -> Vec<ScanRecord> {
    let d = v.len();
    let refs: Vec<&BigRational> = v.iter().chain(gamma).collect();
    let (q, nums) = common(&refs);
    let (a, g) = nums.split_at(d);
    let symmetric = g.iter().all(|x| x.is_zero());
    // minus[i] = n a_i - g_i, plus[i] = n a_i + g_i (the latter serves -n)
    let mut minus: Vec<BigInt> = g.iter().map(|gi| (-gi).mod_floor(&q)).collect();
    let mut plus: Vec<BigInt> = g.to_vec();
    let mut records = Vec::new();
    let mut best: Option<BigInt> = None;
    for n in 1..=h {
        for i in 0..d {
            add_mod(&mut minus[i], &a[i], &q);
            add_mod(&mut plus[i], &a[i], &q);
        }
        let prod = |xs: &[BigInt]| xs.iter().fold(BigInt::from(n), |acc, x| acc * dist(x, &q));
        let mut val = prod(&minus);
        let mut witness = n as i64;
        if !symmetric {
            let other = prod(&plus);
            if other < val {
                val = other;
                witness = -(n as i64);
            }
        }
        if best.as_ref().is_none_or(|b| &val < b) {
            records.push(ScanRecord {
                bound: n,
                value: BigRational::new(val.clone(), q.pow(d as u32)),
                witness: vec![witness],
            });
            best = Some(val);
        }
    }
    records
}

fn first_type(v: &[BigRational], gamma: &BigRational, h: u64) -> Vec<ScanRecord> {
    let d = v.len();
    let refs: Vec<&BigRational> = v.iter().chain(std::iter::once(gamma)).collect();
    let (q, nums) = common(&refs);
    let g = &nums[d];
    // best[P] = smallest dist over vectors with prod |n_i| = P
    let mut best: Vec<Option<(BigInt, Vec<i64>)>> = vec![None; h as usize + 1];
    let mut offer = |p: u64, residue: BigInt, witness: Vec<i64>| {
        let dd = dist(&residue, &q);
        let slot = &mut best[p as usize];
        if slot.as_ref().is_none_or(|(b, _)| &dd < b) {
            *slot = Some((dd, witness));
        }
    };
    let sub = |x: &BigInt| (x - g).mod_floor(&q);
    let neg = |x: &BigInt| (-x).mod_floor(&q);
    match d {
        1 => {
            let mut s = BigInt::zero();
            for n in 1..=h {
                add_mod(&mut s, &nums[0], &q);
                offer(n, sub(&s), vec![n as i64]);
                offer(n, sub(&neg(&s)), vec![-(n as i64)]);
            }
        }
        _ => {
            let mut s1 = BigInt::zero();
            for n1 in 1..=h {
                add_mod(&mut s1, &nums[0], &q);
                let mut s2 = BigInt::zero();
                for n2 in 1..=h / n1 {
                    add_mod(&mut s2, &nums[1], &q);
                    let p = n1 * n2;
                    let (i1, i2) = (n1 as i64, n2 as i64);
                    let pp = (&s1 + &s2).mod_floor(&q);
                    let pm = (&s1 - &s2).mod_floor(&q);
                    offer(p, sub(&pp), vec![i1, i2]);
                    offer(p, sub(&pm), vec![i1, -i2]);
                    offer(p, sub(&neg(&pm)), vec![-i1, i2]);
                    offer(p, sub(&neg(&pp)), vec![-i1, -i2]);
                }
            }
        }
    }
    let mut records = Vec::new();
    let mut running: Option<BigInt> = None;
    for (p, slot) in best.into_iter().enumerate().skip(1) {
        let Some((dd, witness)) = slot else { continue };
        let val = dd * BigInt::from(p as u64);
        if running.as_ref().is_none_or(|r| &val < r) {
            records.push(ScanRecord {
                bound: p as u64,
                value: BigRational::new(val.clone(), q.clone()),
                witness,
            });
            running = Some(val);
        }
    }
    records
}

/// Running minima of `n dist(n alpha) dist(n beta)` for `1 <= n <= n_max`.
pub fn littlewood_scan(alpha: &BigRational, beta: &BigRational, n_max: u64) -> Result<Vec<ScanRecord>, LatticeError> {
    property_c_scan(
        &[alpha.clone(), beta.clone()],
        CKind::Second,
        &[BigRational::zero(), BigRational::zero()],
        n_max,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn frac_dist(x: f64) -> f64 {
        let f = x - x.floor();
        f.min(1.0 - f)
    }

    #[test]
    fn wa_examples() {
        let s = wa_search(&[q(1, 2)], &q(1, 10), 10).unwrap();
        assert!(s.iter().any(|w| w.n == 2 && w.m == vec![BigInt::from(1)] && w.quality.is_zero()));

        let golden = wa_search(&[q(377, 610)], &q(3, 10), 300).unwrap();
        // scan oracle in floating point
        let expected: Vec<u64> = (1..=300u64)
            .filter(|&n| n as f64 * frac_dist(n as f64 * 377.0 / 610.0) < 0.3)
            .collect();
        assert_eq!(golden.iter().map(|w| w.n).collect::<Vec<_>>(), expected);
        assert!(golden.iter().all(|w| w.n < 5));
    }

    #[test]
    fn liouville_solutions_at_factorial_powers() {
        // sum_{k=1}^{4} 10^(-k!)
        let v = q(1, 10) + q(1, 100) + q(1, 1_000_000)
            + BigRational::new(1.into(), BigInt::from(10).pow(24));
        let coarse = wa_search(std::slice::from_ref(&v), &q(1, 10), 1_000_000).unwrap();
        let ns: Vec<u64> = coarse.iter().map(|w| w.n).collect();
        assert!(ns.contains(&100));
        assert!(ns.contains(&1_000_000));
        let fine = wa_search(std::slice::from_ref(&v), &q(1, 1000), 1_000_000).unwrap();
        let ns: Vec<u64> = fine.iter().map(|w| w.n).collect();
        assert_eq!(ns, vec![1_000_000]);
        let eps = q(1, 1000);
        for w in &fine {
            assert!(&w.quality * BigRational::from_integer(w.n.into()) < eps);
            assert_eq!(w.m, vec![BigInt::from(110_001)]);
        }
    }

    #[test]
    fn two_dimensional_wa_uses_square_root_scale() {
        let v = [q(1, 3), q(2, 3)];
        let s = wa_search(&v, &q(1, 100), 10).unwrap();
        assert_eq!(s.iter().map(|w| w.n).collect::<Vec<_>>(), vec![3, 6, 9]);
    }

    #[test]
    fn dirichlet_examples() {
        assert!(dirichlet_min(&[q(1, 2)], 3).unwrap().is_zero());
        assert!(dirichlet_min(&[q(1, 3), q(1, 3)], 3).unwrap().is_zero());
        let grid: Vec<u64> = (0..=8).map(|k| 1u64 << k).collect();
        for (n, nu) in dirichlet_profile(&[q(377, 610)], &grid).unwrap() {
            assert!(nu < BigRational::one(), "N = {n}");
        }
        let one = dirichlet_min(&[q(2, 7)], 1).unwrap();
        assert_eq!(one, q(2, 7));
    }

    #[test]
    fn dirichlet_profile_matches_direct_minimum() {
        let v = [q(13, 97), q(71, 101)];
        for big_n in [1u64, 2, 5, 9] {
            let direct = (1..=big_n * big_n)
                .map(|n| {
                    v.iter()
                        .map(|x| {
                            let y = x * BigRational::from_integer(n.into());
                            let f = &y - y.floor();
                            let g = BigRational::one() - &f;
                            if f < g { f } else { g }
                        })
                        .max()
                        .unwrap()
                })
                .min()
                .unwrap()
                * BigRational::from_integer(big_n.into());
            assert_eq!(dirichlet_min(&v, big_n).unwrap(), direct);
        }
    }

    #[test]
    fn second_type_examples() {
        let r = property_c_scan(&[q(1, 2), q(1, 2)], CKind::Second, &[q(0, 1), q(0, 1)], 10).unwrap();
        let last = r.last().unwrap();
        assert!(last.value.is_zero());
        assert_eq!(last.bound, 2);
        assert!(r.windows(2).all(|w| w[1].value < w[0].value && w[1].bound > w[0].bound));
    }

    #[test]
    fn first_type_single_vector() {
        let v = q(3, 7);
        let r = property_c_scan(std::slice::from_ref(&v), CKind::First, &[q(0, 1)], 1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].value, q(3, 7));
        let r = property_c_scan(&[q(1, 5), q(2, 5)], CKind::First, &[q(1, 10)], 1).unwrap();
        // (n1, n2) = (+-1, +-1): dist(+-1/5 +- 2/5 - 1/10) minimal at -1/5 + 2/5 - 1/10 = 1/10
        assert_eq!(r[0].value, q(1, 10));
        assert_eq!(r[0].witness, vec![-1, 1]);
    }

    #[test]
    fn first_type_matches_brute_force() {
        let v = [q(17, 89), q(40, 97)];
        let g = q(1, 3);
        let h = 30u64;
        let recs = property_c_scan(&v, CKind::First, std::slice::from_ref(&g), h).unwrap();
        let mut running: Option<BigRational> = None;
        let mut expected = vec![];
        for p in 1..=h as i64 {
            let mut best: Option<BigRational> = None;
            for n1 in -p..=p {
                for n2 in -p..=p {
                    if n1 == 0 || n2 == 0 || (n1 * n2).abs() != p {
                        continue;
                    }
                    let x = &v[0] * BigRational::from_integer(n1.into())
                        + &v[1] * BigRational::from_integer(n2.into())
                        - &g;
                    let f = &x - x.floor();
                    let dd = std::cmp::min(f.clone(), BigRational::one() - f);
                    let val = dd * BigRational::from_integer(p.into());
                    if best.as_ref().is_none_or(|b| &val < b) {
                        best = Some(val);
                    }
                }
            }
            if let Some(b) = best {
                if running.as_ref().is_none_or(|r| &b < r) {
                    expected.push((p as u64, b.clone()));
                    running = Some(b);
                }
            }
        }
        let got: Vec<(u64, BigRational)> = recs.iter().map(|r| (r.bound, r.value.clone())).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn littlewood_examples() {
        let r = littlewood_scan(&q(1, 2), &q(1, 2), 10).unwrap();
        assert!(r.last().unwrap().value.is_zero());
        assert_eq!(r.last().unwrap().bound, 2);

        let r = littlewood_scan(&q(377, 610), &q(239, 169), 10_000).unwrap();
        let positive: Vec<&ScanRecord> = r.iter().filter(|x| x.value.is_positive()).collect();
        assert!(positive.len() >= 3);
        assert!(positive.windows(2).all(|w| w[1].value < w[0].value));
        // independent float oracle for the first records
        let mut best = f64::INFINITY;
        let mut bounds = vec![];
        for n in 1..=10_000u64 {
            let val = n as f64 * frac_dist(n as f64 * 377.0 / 610.0) * frac_dist(n as f64 * 239.0 / 169.0);
            if val < best * (1.0 - 1e-9) {
                best = val;
                bounds.push(n);
            }
        }
        let got: Vec<u64> = r.iter().map(|x| x.bound).collect();
        assert_eq!(got[..5], bounds[..5]);
        let r = littlewood_scan(&q(1, 7), &q(3, 11), 100).unwrap();
        assert_eq!(r.last().unwrap().bound, 7);
        assert!(r.last().unwrap().value.is_zero());
    }

    #[test]
    fn json_line_format() {
        let rec = ScanRecord {
            bound: 2,
            value: q(1, 4),
            witness: vec![2],
        };
        assert_eq!(rec.to_json_line(), r#"{"bound":2,"value":"1/4","witness":[2]}"#);
    }
}
