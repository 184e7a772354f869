//! The operator `A` and the per-step block system
//! `sum_j (G_ij I + k H_ij A) U_j = b_i`, `i = 0..r`.
//!
//! Right-hand sides and solutions use block-row-major layout: entry `p` of
//! block `i` sits at `i * M + p`. Internally the matrix is assembled with the
//! block index fastest (`p * r + i`), which keeps the bandwidth at
//! `r * bandwidth(A) + r - 1` and allows a banded LU.

mod banded;
mod operator;

pub use banded::{BandedLu, Scalar};
pub use operator::{CsrMatrix, LinearOperator, Tridiagonal};

use crate::basis::LegendreWorkspace;
use crate::error::{invalid, DgError, Result};

/// LU factors of the `rM x rM` step matrix for one `(A, k)` pair.
#[derive(Debug, Clone)]
pub struct BlockSystemFactorization {
    r: usize,
    m: usize,
    step: f64,
    lu: BandedLu<f64>,
}

/// Factorizes the step matrix with blocks `G_ij I + k H_ij A`.
pub fn factorize_step_matrix(op: &LinearOperator, ws: &LegendreWorkspace, step: f64) -> Result<BlockSystemFactorization> {
    if !(step > 0.0) || !step.is_finite() {
        return invalid(format!("step size must be positive, got {step}"));
    }
    let r = ws.r();
    let m = op.dim();
    let (al, au) = op.bandwidths();
    let kl = (al * r).max(r - 1);
    let ku = (au * r).max(r - 1);
    let g = ws.g();
    let h = ws.h();
    let a_entries = op.entries();
    let mut entries = Vec::with_capacity(m * r * r + a_entries.len() * r);
    for p in 0..m {
        for (i, gi) in g.iter().enumerate() {
            for (j, &gij) in gi.iter().enumerate() {
                entries.push((p * r + i, p * r + j, gij));
            }
        }
    }
    for &(p, q, a) in &a_entries {
        for (i, &hi) in h.iter().enumerate() {
            entries.push((p * r + i, q * r + i, step * hi * a));
        }
    }
    let lu = BandedLu::from_entries(r * m, kl, ku, entries)?;
    Ok(BlockSystemFactorization { r, m, step, lu })
}

impl BlockSystemFactorization {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn state_dim(&self) -> usize {
        self.m
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Solves for the stacked coefficients; `rhs` and the result are
    /// block-row-major of length `r * M`.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; rhs.len()];
        self.solve_into(rhs, &mut out)?;
        Ok(out)
    }

    pub fn solve_into(&self, rhs: &[f64], out: &mut [f64]) -> Result<()> {
        let (r, m) = (self.r, self.m);
        let n = r * m;
        if rhs.len() != n {
            return Err(DgError::DimensionMismatch { expected: n, actual: rhs.len() });
        }
        if out.len() != n {
            return Err(DgError::DimensionMismatch { expected: n, actual: out.len() });
        }
        let mut work = vec![0.0; n];
        for i in 0..r {
            for p in 0..m {
                work[p * r + i] = rhs[i * m + p];
            }
        }
        self.lu.solve_in_place(&mut work)?;
        for i in 0..r {
            for p in 0..m {
                out[i * m + p] = work[p * r + i];
            }
        }
        Ok(())
    }
}

/// Solves one step: alias of [`BlockSystemFactorization::solve`].
pub fn solve_step(fac: &BlockSystemFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
    fac.solve(rhs)
}

/// Applies the block matrix through `A.apply`, independent of the assembly
/// used by the factorization: `b_i = sum_j G_ij x_j + k H_ii A x_i`.
pub fn block_apply(op: &LinearOperator, ws: &LegendreWorkspace, step: f64, x: &[f64]) -> Result<Vec<f64>> {
    let r = ws.r();
    let m = op.dim();
    if x.len() != r * m {
        return Err(DgError::DimensionMismatch { expected: r * m, actual: x.len() });
    }
    let mut b = vec![0.0; r * m];
    let mut ax = vec![0.0; m];
    for i in 0..r {
        let bi = &mut b[i * m..(i + 1) * m];
        for j in 0..r {
            let gij = ws.g()[i][j];
            bi.iter_mut().zip(&x[j * m..(j + 1) * m]).for_each(|(s, &v)| *s += gij * v);
        }
        op.apply(&x[i * m..(i + 1) * m], &mut ax)?;
        let c = step * ws.h()[i];
        bi.iter_mut().zip(&ax).for_each(|(s, &v)| *s += c * v);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    #[test]
    fn scalar_examples() {
        let ws1 = LegendreWorkspace::new(1).unwrap();
        let fac = factorize_step_matrix(&LinearOperator::Scalar(0.0), &ws1, 0.3).unwrap();
        assert_eq!(fac.solve(&[1.7]).unwrap(), vec![1.7]);
        let fac = factorize_step_matrix(&LinearOperator::Scalar(2.0), &ws1, 0.5).unwrap();
        assert_abs_diff_eq!(fac.solve(&[1.0]).unwrap()[0], 0.5, epsilon = 1e-15);

        // [[1 + 1, 1], [-1, 1 + 1/3]] x = b via the explicit 2x2 inverse
        let ws2 = LegendreWorkspace::new(2).unwrap();
        let fac = factorize_step_matrix(&LinearOperator::Scalar(1.0), &ws2, 1.0).unwrap();
        let (a, b, c, d) = (2.0, 1.0, -1.0, 4.0 / 3.0);
        let det = a * d - b * c;
        let rhs = [0.3, -1.1];
        let oracle = [(d * rhs[0] - b * rhs[1]) / det, (-c * rhs[0] + a * rhs[1]) / det];
        let x = fac.solve(&rhs).unwrap();
        assert_abs_diff_eq!(x[0], oracle[0], epsilon = 1e-13);
        assert_abs_diff_eq!(x[1], oracle[1], epsilon = 1e-13);
    }

    #[test]
    fn zero_rhs_and_bad_dims() {
        let ws = LegendreWorkspace::new(3).unwrap();
        let op = LinearOperator::Tridiagonal(Tridiagonal::constant(5, -1.0, 2.0, -1.0).unwrap());
        let fac = factorize_step_matrix(&op, &ws, 0.1).unwrap();
        assert!(fac.solve(&[0.0; 15]).unwrap().iter().all(|&v| v == 0.0));
        assert!(fac.solve(&[0.0; 14]).is_err());
        assert!(factorize_step_matrix(&op, &ws, 0.0).is_err());
    }

    #[test]
    fn round_trip_and_reuse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let csr = {
            // 2D Laplacian-like on a 4x3 grid
            let (nx, ny) = (4, 3);
            let mut t = Vec::new();
            for q in 0..ny {
                for p in 0..nx {
                    let i = p + q * nx;
                    t.push((i, i, 4.0));
                    if p > 0 {
                        t.push((i, i - 1, -1.0));
                    }
                    if p + 1 < nx {
                        t.push((i, i + 1, -1.0));
                    }
                    if q > 0 {
                        t.push((i, i - nx, -1.0));
                    }
                    if q + 1 < ny {
                        t.push((i, i + nx, -1.0));
                    }
                }
            }
            CsrMatrix::from_triplets(nx * ny, &t).unwrap()
        };
        let ops = vec![
            LinearOperator::Scalar(0.5),
            LinearOperator::Tridiagonal(Tridiagonal::constant(7, -3.0, 6.0, -3.0).unwrap()),
            LinearOperator::Sparse(csr),
        ];
        for r in 1..=4 {
            let ws = LegendreWorkspace::new(r).unwrap();
            for op in &ops {
                let k = 0.37;
                let fac = factorize_step_matrix(op, &ws, k).unwrap();
                let x: Vec<f64> = (0..r * op.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let b = block_apply(op, &ws, k, &x).unwrap();
                let y = fac.solve(&b).unwrap();
                let err: Vec<f64> = y.iter().zip(&x).map(|(a, c)| a - c).collect();
                assert!(norm(&err) <= 1e-11 * norm(&x));
                let res: Vec<f64> = block_apply(op, &ws, k, &y).unwrap().iter().zip(&b).map(|(a, c)| a - c).collect();
                assert!(norm(&res) <= 1e-10 * (1.0 + norm(&b)));
                let y2 = fac.solve(&b).unwrap();
                assert_eq!(y, y2);
            }
        }
    }
}
