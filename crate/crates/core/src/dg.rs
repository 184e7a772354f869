//! DG time stepping with piecewise polynomials of degree at most `r - 1`.
//!
//! On interval `I_n` the solution is `U(t) = sum_j U^{nj} p_nj(t)`. Each step
//! solves the block system with right-hand side
//! `b_i = (-1)^i U^{n-1}_- + int_{I_n} f p_ni dt`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::basis::{legendre_values, LegendreWorkspace};
use crate::error::{invalid, DgError, Result};
use crate::mesh::TimeMesh;
use crate::system::{block_apply, factorize_step_matrix, BlockSystemFactorization, LinearOperator};

/// `f(t)` written into a state buffer.
pub type ForcingFn = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;

/// Source term of the problem.
#[derive(Clone, Default)]
pub enum Forcing {
    #[default]
    Zero,
    Function(ForcingFn),
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("Forcing::Zero"),
            Self::Function(_) => f.write_str("Forcing::Function(..)"),
        }
    }
}

impl Forcing {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64, &mut [f64]) + Send + Sync + 'static,
    {
        Self::Function(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    /// Writes `f(t)`; non-finite output is reported as a forcing failure.
    pub fn eval(&self, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Zero => out.fill(0.0),
            Self::Function(f) => {
                f(t, out);
                if out.iter().any(|v| !v.is_finite()) {
                    return Err(DgError::Forcing { t });
                }
            }
        }
        Ok(())
    }
}

/// Norm used for states: plain Euclidean, or `sqrt(w * sum v_p^2)` for a
/// grid function with cell weight `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateNorm {
    Euclidean,
    Weighted(f64),
}

impl StateNorm {
    pub fn norm(&self, v: &[f64]) -> f64 {
        let s: f64 = v.iter().map(|x| x * x).sum();
        match self {
            Self::Euclidean => s.sqrt(),
            Self::Weighted(w) => (w * s).sqrt(),
        }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        match self {
            Self::Euclidean => s.sqrt(),
            Self::Weighted(w) => (w * s).sqrt(),
        }
    }
}

/// `u' + A u = f` on `(0, T]` with `u(0) = u0`.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub operator: LinearOperator,
    pub forcing: Forcing,
    pub u0: Vec<f64>,
    pub final_time: f64,
    pub norm: StateNorm,
}

impl LinearProblem {
    pub fn new(operator: LinearOperator, forcing: Forcing, u0: Vec<f64>, final_time: f64) -> Result<Self> {
        if u0.len() != operator.dim() {
            return Err(DgError::DimensionMismatch { expected: operator.dim(), actual: u0.len() });
        }
        if !(final_time > 0.0) {
            return invalid(format!("final time must be positive, got {final_time}"));
        }
        Ok(Self { operator, forcing, u0, final_time, norm: StateNorm::Euclidean })
    }

    pub fn with_norm(mut self, norm: StateNorm) -> Self {
        self.norm = norm;
        self
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }
}

/// Piecewise-polynomial DG solution: `N x r` Legendre coefficient states.
#[derive(Debug, Clone, PartialEq)]
pub struct DgSolution {
    mesh: TimeMesh,
    r: usize,
    dim: usize,
    /// `coeffs[((n - 1) * r + j) * dim + p]`
    coeffs: Vec<f64>,
    u0: Vec<f64>,
}

impl DgSolution {
    pub fn from_parts(mesh: TimeMesh, r: usize, dim: usize, coeffs: Vec<f64>, u0: Vec<f64>) -> Result<Self> {
        let expected = mesh.len() * r * dim;
        if coeffs.len() != expected {
            return Err(DgError::DimensionMismatch { expected, actual: coeffs.len() });
        }
        if u0.len() != dim {
            return Err(DgError::DimensionMismatch { expected: dim, actual: u0.len() });
        }
        if r == 0 {
            return invalid("r must be >= 1");
        }
        Ok(Self { mesh, r, dim, coeffs, u0 })
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u0(&self) -> &[f64] {
        &self.u0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// All `r` coefficient states of interval `n`, block-row-major.
    pub fn interval_coeffs(&self, n: usize) -> &[f64] {
        let len = self.r * self.dim;
        &self.coeffs[(n - 1) * len..n * len]
    }

    /// `U^{nj}` for `1 <= n <= N`, `0 <= j < r`.
    pub fn coeff(&self, n: usize, j: usize) -> &[f64] {
        let start = ((n - 1) * self.r + j) * self.dim;
        &self.coeffs[start..start + self.dim]
    }

    /// `U(beta_n(tau))` with `tau` in `[-1, 1]`, taken from interval `n`
    /// (so `tau = -1` gives the right limit at `t_{n-1}`).
    pub fn eval_reference(&self, n: usize, tau: f64, out: &mut [f64]) -> Result<()> {
        self.check_interval(n)?;
        let mut pj = vec![0.0; self.r];
        legendre_values(tau, &mut pj);
        out.fill(0.0);
        for (j, &pv) in pj.iter().enumerate() {
            out.iter_mut().zip(self.coeff(n, j)).for_each(|(o, &c)| *o += pv * c);
        }
        Ok(())
    }

    /// `U(t)` for `t in (t_0, t_N]`; nodes take the left limit.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out)?;
        Ok(out)
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        let n = self.mesh.locate(t)?;
        let tau = self.mesh.to_reference(n, t)?.clamp(-1.0, 1.0);
        self.eval_reference(n, tau, out)
    }

    /// `U^n_-` for `0 <= n <= N`, with `U^0_- = u0`.
    pub fn left_limit(&self, n: usize) -> Result<Vec<f64>> {
        if n > self.mesh.len() {
            return Err(DgError::IndexOutOfRange { index: n, max: self.mesh.len() });
        }
        if n == 0 {
            return Ok(self.u0.clone());
        }
        let mut out = vec![0.0; self.dim];
        for j in 0..self.r {
            out.iter_mut().zip(self.coeff(n, j)).for_each(|(o, &c)| *o += c);
        }
        Ok(out)
    }

    /// `U^{n-1}_+ = sum_j (-1)^j U^{nj}` for `1 <= n <= N`.
    pub fn right_limit_from(&self, n: usize) -> Result<Vec<f64>> {
        self.check_interval(n)?;
        let mut out = vec![0.0; self.dim];
        for j in 0..self.r {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            out.iter_mut().zip(self.coeff(n, j)).for_each(|(o, &c)| *o += s * c);
        }
        Ok(out)
    }

    /// Jump `[U]^{n-1} = U^{n-1}_+ - U^{n-1}_-` for `1 <= n <= N`.
    pub fn jump(&self, n: usize) -> Result<Vec<f64>> {
        let plus = self.right_limit_from(n)?;
        let minus = self.left_limit(n - 1)?;
        Ok(plus.iter().zip(&minus).map(|(a, b)| a - b).collect())
    }

    fn check_interval(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.mesh.len() {
            return Err(DgError::IndexOutOfRange { index: n, max: self.mesh.len() });
        }
        Ok(())
    }
}

/// `int_{I_n} f p_ni dt` for `i < r`, block-row-major.
fn forcing_moments(forcing: &Forcing, (a, b): (f64, f64), ws: &LegendreWorkspace, dim: usize, out: &mut [f64]) -> Result<()> {
    out.fill(0.0);
    if forcing.is_zero() {
        return Ok(());
    }
    let r = ws.r();
    let half = 0.5 * (b - a);
    let mut fval = vec![0.0; dim];
    for (q, (&x, &w)) in ws.quad().nodes.iter().zip(&ws.quad().weights).enumerate() {
        let t = 0.5 * ((1.0 - x) * a + (1.0 + x) * b);
        forcing.eval(t, &mut fval)?;
        let pq = ws.quad_legendre(q);
        for i in 0..r {
            let c = half * w * pq[i];
            out[i * dim..(i + 1) * dim].iter_mut().zip(&fval).for_each(|(o, &f)| *o += c * f);
        }
    }
    Ok(())
}

/// Runs the DG scheme over `mesh`. The step matrix is factorized once per
/// distinct step length.
pub fn dg_solve(problem: &LinearProblem, mesh: &TimeMesh, r: usize, ws: &LegendreWorkspace) -> Result<DgSolution> {
    if r == 0 || ws.r() != r {
        return invalid(format!("workspace degree {} does not match r = {r}", ws.r()));
    }
    let dim = problem.dim();
    let nsteps = mesh.len();
    let mut coeffs = vec![0.0; nsteps * r * dim];
    let mut factors: HashMap<u64, BlockSystemFactorization> = HashMap::new();
    let mut rhs = vec![0.0; r * dim];
    let mut prev = problem.u0.clone();
    for n in 1..=nsteps {
        let interval = mesh.interval(n)?;
        let k = interval.1 - interval.0;
        let fac = match factors.entry(k.to_bits()) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(factorize_step_matrix(&problem.operator, ws, k)?),
        };
        forcing_moments(&problem.forcing, interval, ws, dim, &mut rhs)?;
        for i in 0..r {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            rhs[i * dim..(i + 1) * dim].iter_mut().zip(&prev).for_each(|(b, &u)| *b += s * u);
        }
        let block = &mut coeffs[(n - 1) * r * dim..n * r * dim];
        fac.solve_into(&rhs, block)?;
        prev.fill(0.0);
        for j in 0..r {
            prev.iter_mut().zip(&block[j * dim..(j + 1) * dim]).for_each(|(u, &c)| *u += c);
        }
    }
    DgSolution::from_parts(mesh.clone(), r, dim, coeffs, problem.u0.clone())
}

/// Largest relative residual `|block * U^n - b| / (1 + |b|)` of the per-step
/// equations over all intervals.
pub fn galerkin_residual(sol: &DgSolution, problem: &LinearProblem, ws: &LegendreWorkspace) -> Result<f64> {
    let (r, dim) = (sol.r(), sol.dim());
    let mut rhs = vec![0.0; r * dim];
    let mut worst: f64 = 0.0;
    for n in 1..=sol.mesh().len() {
        let interval = sol.mesh().interval(n)?;
        forcing_moments(&problem.forcing, interval, ws, dim, &mut rhs)?;
        let prev = sol.left_limit(n - 1)?;
        for i in 0..r {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            rhs[i * dim..(i + 1) * dim].iter_mut().zip(&prev).for_each(|(b, &u)| *b += s * u);
        }
        let lhs = block_apply(&problem.operator, ws, interval.1 - interval.0, sol.interval_coeffs(n))?;
        let res: f64 = lhs.iter().zip(&rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let bn: f64 = rhs.iter().map(|b| b * b).sum::<f64>().sqrt();
        worst = worst.max(res / (1.0 + bn));
    }
    Ok(worst)
}
