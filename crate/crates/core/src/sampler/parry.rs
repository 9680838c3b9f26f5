use super::SamplerError;

const REL_TOL: f64 = 1e-14;
const MAX_ITER: usize = 100_000;

/// Maximal-entropy Markov chain of an irreducible 0/1 transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ParryChain {
    matrix: Vec<Vec<u8>>,
    lambda: f64,
    right: Vec<f64>,
    stationary: Vec<f64>,
    transitions: Vec<Vec<f64>>,
}

impl ParryChain {
    pub fn states(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// Perron eigenvalue.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn right_eigenvector(&self) -> &[f64] {
        &self.right
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn transitions(&self) -> &[Vec<f64>] {
        &self.transitions
    }

    /// `-sum_i pi_i sum_j P_ij ln P_ij`.
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for (pi, row) in self.stationary.iter().zip(&self.transitions) {
            for &p in row {
                if p > 0.0 {
                    h -= pi * p * p.ln();
                }
            }
        }
        h
    }
}

fn check_irreducible(a: &[Vec<u8>]) -> Result<(), SamplerError> {
    let m = a.len();
    // reach[i][j]: j reachable from i in one or more steps
    let mut reach: Vec<Vec<bool>> = a
        .iter()
        .map(|row| row.iter().map(|&x| x == 1).collect())
        .collect();
    for k in 0..m {
        for i in 0..m {
            if reach[i][k] {
                for j in 0..m {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    for (i, row) in reach.iter().enumerate() {
        if let Some(j) = row.iter().position(|&r| !r) {
            return Err(SamplerError::Reducible { from: i, to: j });
        }
    }
    Ok(())
}

/// Perron vector of `a` (or of its transpose) by power iteration on `A + I`,
/// which is primitive whenever `A` is irreducible.
fn perron(a: &[Vec<u8>], transpose: bool) -> Result<Vec<f64>, SamplerError> {
    let m = a.len();
    let entry = |i: usize, j: usize| -> f64 {
        let x = if transpose { a[j][i] } else { a[i][j] };
        x as f64 + if i == j { 1.0 } else { 0.0 }
    };
    let mut v = vec![1.0 / m as f64; m];
    for _ in 0..MAX_ITER {
        let mut w: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| entry(i, j) * v[j]).sum())
            .collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let done = w
            .iter()
            .zip(&v)
            .all(|(x, y)| (x - y).abs() <= REL_TOL * x.abs());
        v = w;
        if done {
            return Ok(v);
        }
    }
    Err(SamplerError::NoConvergence(MAX_ITER))
}

/// Build the Parry chain: `P_ij = A_ij r_j / (lambda r_i)` and `pi_i` proportional to `l_i r_i`.
pub fn build_parry(a: &[Vec<u8>]) -> Result<ParryChain, SamplerError> {
    let m = a.len();
    if m == 0 {
        return Err(SamplerError::Empty);
    }
    if a.iter().any(|row| row.len() != m || row.iter().any(|&x| x > 1)) {
        return Err(SamplerError::NotBinarySquare);
    }
    check_irreducible(a)?;
    let r = perron(a, false)?;
    let l = perron(a, true)?;
    let ar: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|j| a[i][j] as f64 * r[j]).sum())
        .collect();
    let lambda = ar.iter().sum::<f64>() / r.iter().sum::<f64>();
    let transitions: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| a[i][j] as f64 * r[j] / (lambda * r[i]))
                .collect()
        })
        .collect();
    let z: f64 = l.iter().zip(&r).map(|(x, y)| x * y).sum();
    let stationary = l.iter().zip(&r).map(|(x, y)| x * y / z).collect();
    Ok(ParryChain {
        matrix: a.to_vec(),
        lambda,
        right: r,
        stationary,
        transitions,
    })
}
