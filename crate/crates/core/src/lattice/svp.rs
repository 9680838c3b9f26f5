use std::cmp::Ordering;

use num_traits::ToPrimitive;

use super::{det, LatticeBasis, LatticeError, NormKind};
use crate::scalar::{RealScalar, Scalar};

const MAX_BOX: f64 = 1e7;
const MAX_PASSES: usize = 200;

/// A shortest nonzero lattice vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortVector<S> {
    /// Coefficients on the basis columns, first nonzero entry positive.
    pub coeffs: Vec<i64>,
    pub vector: Vec<S>,
    pub length: S,
    pub norm: NormKind,
    /// Set when several vectors could not be told apart and the length is
    /// an enclosure of their common minimum.
    pub tie: bool,
}

struct Candidate<S> {
    coeffs: Vec<i64>,
    vector: Vec<S>,
    /// Sup norm, or the squared Euclidean norm.
    key: S,
}

fn norm_key<S: Scalar>(x: &[S], norm: NormKind) -> S {
    match norm {
        NormKind::Sup => x
            .iter()
            .map(|c| c.abs())
            .reduce(|a, b| a.max_of(&b))
            .unwrap_or_else(S::zero),
        NormKind::Euclidean => x
            .iter()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone()),
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn canonical_sign(c: &mut [i64], v: &mut [impl Scalar]) {
    if c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        c.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
}

/// Pairwise Lagrange steps until no column shortens. Only the integer
/// transform matters for correctness, so decisions use midpoints.
fn reduce<S: Scalar>(cols: &mut [Vec<S>], coeffs: &mut [Vec<i64>]) -> Result<(), LatticeError> {
    let n = cols.len();
    let prec = cols[0][0].precision();
    for _ in 0..MAX_PASSES {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let bii = dot(&cols[i], &cols[i]);
                if bii.to_f64() <= 0.0 {
                    return Err(LatticeError::Singular);
                }
                let mu = (dot(&cols[j], &cols[i]) / bii).round_to_int();
                let mu = mu.to_i64().ok_or(LatticeError::Overflow)?;
                if mu == 0 {
                    continue;
                }
                let before = dot(&cols[j], &cols[j]).to_f64();
                let m = S::from_i64(mu, prec);
                let new: Vec<S> = cols[j]
                    .iter()
                    .zip(&cols[i])
                    .map(|(x, y)| x.clone() - m.clone() * y.clone())
                    .collect();
                if dot(&new, &new).to_f64() >= before {
                    continue;
                }
                cols[j] = new;
                for k in 0..n {
                    coeffs[j][k] = coeffs[j][k]
                        .checked_sub(mu.checked_mul(coeffs[i][k]).ok_or(LatticeError::Overflow)?)
                        .ok_or(LatticeError::Overflow)?;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(())
}

/// All nonzero lattice vectors (up to sign) that could be the shortest.
fn candidates<S: RealScalar>(
    b: &LatticeBasis<S>,
    norm: NormKind,
) -> Result<Vec<Candidate<S>>, LatticeError> {
    let n = b.dim();
    let mut cols: Vec<Vec<S>> = (0..n).map(|j| b.column(j)).collect();
    let mut coeffs: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|k| i64::from(j == k)).collect())
        .collect();
    reduce(&mut cols, &mut coeffs)?;

    // Radius: the shortest reduced column bounds the minimum from above.
    let keys: Vec<S> = cols.iter().map(|c| norm_key(c, norm)).collect();
    let r_key = keys
        .iter()
        .map(|k| k.abs_upper_f64())
        .fold(f64::INFINITY, f64::min);
    let radius = match norm {
        NormKind::Sup => r_key,
        NormKind::Euclidean => r_key.sqrt() * (1.0 + 1e-15),
    };

    // |c_i| <= ||row_i(M^-1)||_1 ||x||_inf  or  ||row_i(M^-1)||_2 ||x||_2
    let m: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect();
    let dm = det(&m);
    if dm.try_sign().is_none_or(|s| s == Ordering::Equal) {
        return Err(LatticeError::Singular);
    }
    let inv = inverse(&m, &dm);
    let mut bounds = Vec::with_capacity(n);
    let mut volume = 1.0f64;
    for row in &inv {
        let w = match norm {
            NormKind::Sup => row.iter().map(|x| x.abs_upper_f64()).sum::<f64>(),
            NormKind::Euclidean => row
                .iter()
                .map(|x| x.abs_upper_f64().powi(2))
                .sum::<f64>()
                .sqrt(),
        };
        let k = (w * radius * (1.0 + 1e-12)).floor();
        if !k.is_finite() {
            return Err(LatticeError::Singular);
        }
        volume *= 2.0 * k + 1.0;
        bounds.push(k as i64);
    }
    if volume > MAX_BOX {
        return Err(LatticeError::BoxTooLarge(volume));
    }

    let r_upper = keys
        .iter()
        .cloned()
        .reduce(|a, c| if c.to_f64() < a.to_f64() { c } else { a })
        .expect("nonempty basis");
    let prec = b.precision();
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    enumerate_box(&bounds, 0, &mut c, &mut |c| {
        if c.iter().all(|&x| x == 0) || c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            return;
        }
        let vector: Vec<S> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| c[j] != 0)
                    .fold(S::zero(), |acc, j| {
                        acc + cols[j][i].clone() * S::from_i64(c[j], prec)
                    })
            })
            .collect();
        let key = norm_key(&vector, norm);
        if key.try_cmp(&r_upper) == Some(Ordering::Greater) {
            return;
        }
        let mut orig: Vec<i64> = (0..n)
            .map(|k| (0..n).map(|j| c[j] * coeffs[j][k]).sum())
            .collect();
        let mut vector = vector;
        canonical_sign(&mut orig, &mut vector);
        out.push(Candidate {
            coeffs: orig,
            vector,
            key,
        });
    });
    Ok(out)
}

fn enumerate_box(bounds: &[i64], i: usize, c: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if i == bounds.len() {
        f(c);
        return;
    }
    for x in -bounds[i]..=bounds[i] {
        c[i] = x;
        enumerate_box(bounds, i + 1, c, f);
    }
}

fn inverse<S: Scalar>(m: &[Vec<S>], dm: &S) -> Vec<Vec<S>> {
    let n = m.len();
    let e = |i: usize, j: usize| m[i][j].clone();
    let adj: Vec<Vec<S>> = match n {
        2 => vec![vec![e(1, 1), -e(0, 1)], vec![-e(1, 0), e(0, 0)]],
        _ => {
            let cof = |r: usize, c: usize| {
                let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
                let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
                let minor = e(rows[0], cols[0]) * e(rows[1], cols[1])
                    - e(rows[0], cols[1]) * e(rows[1], cols[0]);
                if (r + c).is_multiple_of(2) {
                    minor
                } else {
                    -minor
                }
            };
            (0..3).map(|i| (0..3).map(|j| cof(j, i)).collect()).collect()
        }
    };
    adj.into_iter()
        .map(|row| row.into_iter().map(|x| x / dm.clone()).collect())
        .collect()
}

/// Index of the certified minimum (ties to the lexicographically smallest
/// coefficients) and whether some other candidate could not be separated.
fn select<S: Scalar>(cands: &[Candidate<S>]) -> (usize, Option<usize>) {
    let mut best = 0;
    loop {
        let mut changed = false;
        for (i, c) in cands.iter().enumerate() {
            if i == best {
                continue;
            }
            match c.key.try_cmp(&cands[best].key) {
                Some(Ordering::Less) => {
                    best = i;
                    changed = true;
                }
                Some(Ordering::Equal) if c.coeffs < cands[best].coeffs => {
                    best = i;
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let unresolved = cands
        .iter()
        .enumerate()
        .find(|(i, c)| *i != best && c.key.try_cmp(&cands[best].key).is_none())
        .map(|(i, _)| i);
    (best, unresolved)
}

fn key_to_length<S: RealScalar>(key: S, norm: NormKind) -> S {
    match norm {
        NormKind::Sup => key,
        NormKind::Euclidean => key.sqrt(),
    }
}

/// Certified shortest vector for bases of size 2 or 3. Fails with
/// [`LatticeError::Ambiguous`] when two candidates cannot be separated.
pub fn shortest_vector<S: RealScalar>(
    b: &LatticeBasis<S>,
    norm: NormKind,
) -> Result<ShortVector<S>, LatticeError> {
    let cands = candidates(b, norm)?;
    let (best, unresolved) = select(&cands);
    if let Some(other) = unresolved {
        return Err(LatticeError::Ambiguous(
            format!("{:?}", cands[best].key),
            format!("{:?}", cands[other].key),
        ));
    }
    let c = cands.into_iter().nth(best).expect("at least one candidate");
    Ok(ShortVector {
        coeffs: c.coeffs,
        vector: c.vector,
        length: key_to_length(c.key, norm),
        norm,
        tie: false,
    })
}

/// Like [`shortest_vector`], but unseparated candidates are reported as a
/// tie: the length encloses the minimum over all of them and the
/// coefficients are the lexicographically smallest.
pub fn shortest_vector_or_tie<S: RealScalar>(
    b: &LatticeBasis<S>,
    norm: NormKind,
) -> Result<ShortVector<S>, LatticeError> {
    let cands = candidates(b, norm)?;
    let (best, unresolved) = select(&cands);
    if unresolved.is_none() {
        let c = cands.into_iter().nth(best).expect("at least one candidate");
        return Ok(ShortVector {
            coeffs: c.coeffs,
            vector: c.vector,
            length: key_to_length(c.key, norm),
            norm,
            tie: false,
        });
    }
    let tied: Vec<&Candidate<S>> = cands
        .iter()
        .filter(|c| c.key.try_cmp(&cands[best].key) != Some(Ordering::Greater))
        .collect();
    let key = min_enclosure(tied.iter().map(|c| c.key.clone()));
    let first = tied
        .iter()
        .min_by(|a, b| a.coeffs.cmp(&b.coeffs))
        .expect("best is tied with itself");
    Ok(ShortVector {
        coeffs: first.coeffs.clone(),
        vector: first.vector.clone(),
        length: key_to_length(key, norm),
        norm,
        tie: true,
    })
}

fn min_enclosure<S: Scalar>(mut it: impl Iterator<Item = S>) -> S {
    let first = it.next().expect("nonempty");
    it.fold(first, |acc, x| -((-acc).max_of(&-x)))
}

/// Enclosure of the length of the shortest nonzero vector.
pub fn systole<S: RealScalar>(b: &LatticeBasis<S>, norm: NormKind) -> Result<S, LatticeError> {
    let cands = candidates(b, norm)?;
    let key = min_enclosure(cands.into_iter().map(|c| c.key));
    Ok(key_to_length(key, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{flow_basis, FlowPoint};
    use crate::rng::SplitMix64;
    use crate::scalar::Ball;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_lattice() {
        let b = LatticeBasis::<f64>::from_integer_rows(&[vec![1, 0], vec![0, 1]], 53).unwrap();
        let s = shortest_vector(&b, NormKind::Euclidean).unwrap();
        assert_eq!(s.length, 1.0);
        assert_eq!(s.coeffs, vec![0, 1]);
        let bb = LatticeBasis::<Ball>::from_integer_rows(&[vec![1, 0], vec![0, 1]], 64).unwrap();
        let s = shortest_vector(&bb, NormKind::Euclidean).unwrap();
        assert_eq!(s.length.to_f64(), 1.0);
        assert_eq!(s.coeffs, vec![0, 1]);
    }

    #[test]
    fn diagonal_flow() {
        let p = FlowPoint::new(vec![q(0, 1)], 1.0).unwrap();
        let b = flow_basis::<Ball>(&p, 128).unwrap();
        let s = shortest_vector(&b, NormKind::Euclidean).unwrap();
        assert_eq!(s.coeffs, vec![0, 1]);
        assert!((s.length.to_f64() - (-1f64).exp()).abs() < 1e-15);
        assert!(s.length.radius_f64() < 1e-30);
    }

    #[test]
    fn symmetric_candidates_report_a_tie() {
        // (0,1) and (1,1) have the same length under v = 1/2
        let p = FlowPoint::new(vec![q(1, 2)], 0.1).unwrap();
        let b = flow_basis::<Ball>(&p, 128).unwrap();
        let e = shortest_vector(&b, NormKind::Euclidean);
        assert!(matches!(e, Err(LatticeError::Ambiguous(..))));
        let s = shortest_vector_or_tie(&b, NormKind::Euclidean).unwrap();
        assert!(s.tie);
        assert_eq!(s.coeffs, vec![0, 1]);
        let expected = ((0.1f64).exp().powi(2) / 4.0 + (-0.2f64).exp()).sqrt();
        assert!((s.length.to_f64() - expected).abs() < 1e-12);
        let sys = systole(&b, NormKind::Euclidean).unwrap();
        assert!((sys.to_f64() - expected).abs() < 1e-12);
    }

    fn brute<S: Scalar>(b: &LatticeBasis<S>, norm: NormKind) -> (Vec<i64>, f64) {
        let n = b.dim();
        let mut best: Option<(Vec<i64>, f64)> = None;
        let mut c = vec![0; n];
        enumerate_box(&vec![10; n], 0, &mut c, &mut |c| {
            if c.iter().all(|&x| x == 0) || c.iter().find(|&&x| x != 0).unwrap() < &0 {
                return;
            }
            let v = b.combine(c);
            let len = norm_key(&v, norm).to_f64();
            let better = match &best {
                None => true,
                Some((bc, bl)) => len < *bl || (len == *bl && c < bc.as_slice()),
            };
            if better {
                best = Some((c.to_vec(), len));
            }
        });
        best.unwrap()
    }

    /// Inverse of an integer matrix with determinant +-1.
    fn integer_inverse(rows: &[Vec<i64>]) -> Vec<Vec<f64>> {
        let m: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        let d = det(&m);
        inverse(&m, &d)
    }

    /// The [-10, 10] box provably holds the minimum when every coefficient
    /// of a vector no longer than the best box vector is at most 10.
    fn box_is_exhaustive(rows: &[Vec<i64>], norm: NormKind, best: f64) -> bool {
        let len = match norm {
            NormKind::Sup => best,
            NormKind::Euclidean => best.sqrt(),
        };
        integer_inverse(rows).iter().all(|row| {
            let w = match norm {
                NormKind::Sup => row.iter().map(|x| x.abs()).sum::<f64>(),
                NormKind::Euclidean => row.iter().map(|x| x * x).sum::<f64>().sqrt(),
            };
            w * len <= 10.0
        })
    }

    #[test]
    fn agrees_with_box_enumeration_on_integer_bases() {
        let mut rng = SplitMix64::new(3);
        let mut checked = 0;
        for n in [2usize, 3] {
            for _ in 0..60 {
                let mut rows: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                    .collect();
                for _ in 0..5 {
                    let i = rng.next_below(n as u64) as usize;
                    let j = (i + 1 + rng.next_below(n as u64 - 1) as usize) % n;
                    let k = rng.next_below(5) as i64 - 2;
                    for r in rows.iter_mut() {
                        r[j] += k * r[i];
                    }
                }
                let b = LatticeBasis::<f64>::from_integer_rows(&rows, 53).unwrap();
                for norm in [NormKind::Sup, NormKind::Euclidean] {
                    let (c, len) = brute(&b, norm);
                    if !box_is_exhaustive(&rows, norm, len) {
                        continue;
                    }
                    checked += 1;
                    let s = shortest_vector(&b, norm).unwrap();
                    assert_eq!(s.coeffs, c, "{rows:?} {norm:?}");
                    assert_eq!(Scalar::to_f64(&norm_key(&s.vector, norm)), len);
                }
            }
        }
        assert!(checked > 100, "only {checked} usable bases");
    }
}
