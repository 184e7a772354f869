//! Banded LU with partial pivoting, generic over real and complex scalars.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{DgError, Result};

/// Field operations needed by the factorization.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    fn zero() -> Self;
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// LU factors of an `n x n` matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + kl + ku`; the extra `kl`
/// super-diagonals hold fill-in from row interchanges.
#[derive(Debug, Clone)]
pub struct BandedLu<T: Scalar> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    ab: Vec<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> BandedLu<T> {
    /// Assembles from `(row, col, value)` entries (duplicates are summed) and
    /// factorizes.
    pub fn from_entries<I>(n: usize, kl: usize, ku: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let width = 2 * kl + ku + 1;
        let mut ab = vec![T::zero(); n * width];
        for (i, j, v) in entries {
            if i >= n || j >= n || j + kl < i || j > i + ku {
                return Err(DgError::InvalidArgument(format!("entry ({i}, {j}) outside band kl={kl} ku={ku} of order {n}")));
            }
            ab[i * width + (j + kl - i)] += v;
        }
        let mut lu = Self { n, kl, ku, width, ab, pivots: vec![0; n] };
        lu.factorize()?;
        Ok(lu)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn factorize(&mut self) -> Result<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for c in 0..n {
            let last_row = (c + kl).min(n - 1);
            let last_col = (c + kl + ku).min(n - 1);
            let mut p = c;
            let mut best = self.ab[self.idx(c, c)].modulus();
            for i in c + 1..=last_row {
                let m = self.ab[self.idx(i, c)].modulus();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(DgError::SingularMatrix { column: c });
            }
            self.pivots[c] = p;
            if p != c {
                for j in c..=last_col {
                    let (a, b) = (self.idx(c, j), self.idx(p, j));
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[self.idx(c, c)];
            for i in c + 1..=last_row {
                let ic = self.idx(i, c);
                let l = self.ab[ic] / pivot;
                self.ab[ic] = l;
                if l == T::zero() {
                    continue;
                }
                for j in c + 1..=last_col {
                    let u = self.ab[self.idx(c, j)];
                    let ij = self.idx(i, j);
                    self.ab[ij] -= l * u;
                }
            }
        }
        Ok(())
    }

    /// Solves `A x = b` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, b: &mut [T]) -> Result<()> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        if b.len() != n {
            return Err(DgError::DimensionMismatch { expected: n, actual: b.len() });
        }
        for c in 0..n {
            let p = self.pivots[c];
            if p != c {
                b.swap(c, p);
            }
            let bc = b[c];
            for i in c + 1..=(c + kl).min(n.saturating_sub(1)) {
                let l = self.ab[self.idx(i, c)];
                b[i] -= l * bc;
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + kl + ku).min(n - 1) {
                s -= self.ab[self.idx(i, j)] * b[j];
            }
            b[i] = s / self.ab[self.idx(i, i)];
        }
        Ok(())
    }
}
