use crate::error::{invalid, DgError, Result};

/// Row-compressed sparse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Square matrix of order `n` from `(row, col, value)` triplets; duplicates
    /// are summed and explicit zeros dropped.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return invalid(format!("triplet ({i}, {j}) outside order {n}"));
            }
            if !v.is_finite() {
                return invalid(format!("non-finite entry at ({i}, {j})"));
            }
            sorted.push((i, j, v));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        // drop zeros left after summation
        let mut m = Self { n, indptr, indices, values };
        if m.values.contains(&0.0) {
            let trip: Vec<_> = m.entries().filter(|e| e.2 != 0.0).collect();
            m = Self::from_triplets(n, &trip)?;
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (self.indptr[i]..self.indptr[i + 1]).map(move |k| (i, self.indices[k], self.values[k])))
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |k| (self.indices[k], self.values[k]))
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }
}

/// Tridiagonal operator stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    /// `lower[i] = A[i+1][i]`
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    /// `upper[i] = A[i][i+1]`
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return invalid("tridiagonal operator needs diag of length n >= 1 and off-diagonals of length n - 1");
        }
        Ok(Self { lower, diag, upper })
    }

    /// Constant-coefficient `(a, b, c)` stencil: `A[i][i-1] = a`, `A[i][i] = b`,
    /// `A[i][i+1] = c`.
    pub fn constant(n: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a; n.saturating_sub(1)], vec![b; n], vec![c; n.saturating_sub(1)])
    }
}

/// The linear operator `A` of `u' + A u = f`, in one of three storage forms.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearOperator {
    Scalar(f64),
    Tridiagonal(Tridiagonal),
    Sparse(CsrMatrix),
}

impl LinearOperator {
    pub fn dim(&self) -> usize {
        match self {
            Self::Scalar(_) => 1,
            Self::Tridiagonal(t) => t.diag.len(),
            Self::Sparse(m) => m.order(),
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n {
            return Err(DgError::DimensionMismatch { expected: n, actual: x.len() });
        }
        if y.len() != n {
            return Err(DgError::DimensionMismatch { expected: n, actual: y.len() });
        }
        match self {
            Self::Scalar(lambda) => y[0] = lambda * x[0],
            Self::Tridiagonal(t) => {
                for i in 0..n {
                    let mut s = t.diag[i] * x[i];
                    if i > 0 {
                        s += t.lower[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        s += t.upper[i] * x[i + 1];
                    }
                    y[i] = s;
                }
            }
            Self::Sparse(m) => m.mul_vec(x, y),
        }
        Ok(())
    }

    pub fn apply_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y)?;
        Ok(y)
    }

    /// Nonzero pattern as `(row, col, value)`.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        match self {
            Self::Scalar(lambda) => vec![(0, 0, *lambda)],
            Self::Tridiagonal(t) => {
                let n = t.diag.len();
                let mut out = Vec::with_capacity(3 * n);
                for i in 0..n {
                    if i > 0 {
                        out.push((i, i - 1, t.lower[i - 1]));
                    }
                    out.push((i, i, t.diag[i]));
                    if i + 1 < n {
                        out.push((i, i + 1, t.upper[i]));
                    }
                }
                out
            }
            Self::Sparse(m) => m.entries().collect(),
        }
    }

    /// `(lower, upper)` bandwidths of the nonzero pattern.
    pub fn bandwidths(&self) -> (usize, usize) {
        match self {
            Self::Scalar(_) => (0, 0),
            Self::Tridiagonal(t) => {
                let b = usize::from(t.diag.len() > 1);
                (b, b)
            }
            Self::Sparse(m) => m.entries().fold((0, 0), |(l, u), (i, j, _)| (l.max(i.saturating_sub(j)), u.max(j.saturating_sub(i)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn operators() -> Vec<LinearOperator> {
        let tri = Tridiagonal::constant(6, -1.0, 2.5, -1.0).unwrap();
        let csr = CsrMatrix::from_triplets(
            4,
            &[(0, 0, 3.0), (0, 3, -1.0), (3, 0, -1.0), (1, 1, 2.0), (2, 2, 4.0), (3, 3, 3.0), (1, 2, 0.5), (2, 1, 0.5)],
        )
        .unwrap();
        vec![LinearOperator::Scalar(0.5), LinearOperator::Tridiagonal(tri), LinearOperator::Sparse(csr)]
    }

    #[test]
    fn linearity_and_positivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for op in operators() {
            let n = op.dim();
            for _ in 0..10 {
                let u = random_vec(&mut rng, n);
                let v = random_vec(&mut rng, n);
                let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
                let comb: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
                let lhs = op.apply_vec(&comb).unwrap();
                let au = op.apply_vec(&u).unwrap();
                let av = op.apply_vec(&v).unwrap();
                let norm = |w: &[f64]| w.iter().map(|x| x * x).sum::<f64>().sqrt();
                let diff: Vec<f64> = (0..n).map(|i| lhs[i] - a * au[i] - b * av[i]).collect();
                assert!(norm(&diff) <= 1e-12 * (norm(&u) + norm(&v)));
                let quad: f64 = au.iter().zip(&u).map(|(x, y)| x * y).sum();
                assert!(quad > 0.0);
            }
        }
    }

    #[test]
    fn csr_sums_duplicates_and_drops_zeros() {
        let m = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (1, 0, 1.0), (1, 0, -1.0), (1, 1, 5.0)]).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.entries().collect::<Vec<_>>(), vec![(0, 0, 3.0), (1, 1, 5.0)]);
        assert!(CsrMatrix::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn bandwidths_and_dims() {
        let ops = operators();
        assert_eq!(ops[0].bandwidths(), (0, 0));
        assert_eq!(ops[1].bandwidths(), (1, 1));
        assert_eq!(ops[2].bandwidths(), (3, 3));
        assert!(ops[1].apply_vec(&[1.0]).is_err());
        assert!(Tridiagonal::new(vec![1.0], vec![1.0], vec![]).is_err());
    }
}
