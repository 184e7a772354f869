//! Post-processing of a DG solution: the continuous reconstruction `U*`, the
//! jump error indicator, the projector that interpolates at right nodes, and
//! the error-profile diagnostic.

use crate::basis::{legendre_coeff_vec, legendre_values, LegendreWorkspace};
use crate::dg::{DgSolution, StateNorm};
use crate::error::{invalid, Result};
use crate::mesh::TimeMesh;

/// Continuous piecewise polynomial of degree `r` with Legendre coefficients
/// `U*^{nj}`, `j = 0..=r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    r: usize,
    poly: DgSolution,
}

impl Reconstruction {
    /// Trial degree count of the underlying DG solution (the reconstruction
    /// has degree `r`).
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mesh(&self) -> &TimeMesh {
        self.poly.mesh()
    }

    pub fn coeff(&self, n: usize, j: usize) -> &[f64] {
        self.poly.coeff(n, j)
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        self.poly.eval(t)
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        self.poly.eval_into(t, out)
    }

    pub fn eval_reference(&self, n: usize, tau: f64, out: &mut [f64]) -> Result<()> {
        self.poly.eval_reference(n, tau, out)
    }

    /// The coefficients as a piecewise polynomial with `r + 1` terms.
    pub fn as_piecewise(&self) -> &DgSolution {
        &self.poly
    }
}

/// `U* = U - (-1)^r/2 [U]^{n-1} (p_nr - p_{n,r-1})` on each interval.
pub fn reconstruct(sol: &DgSolution) -> Result<Reconstruction> {
    let (r, dim) = (sol.r(), sol.dim());
    let nsteps = sol.mesh().len();
    let rs = r + 1;
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; nsteps * rs * dim];
    for n in 1..=nsteps {
        let jump = sol.jump(n)?;
        let base = (n - 1) * rs * dim;
        coeffs[base..base + r * dim].copy_from_slice(sol.interval_coeffs(n));
        let last = base + (r - 1) * dim;
        let top = base + r * dim;
        for p in 0..dim {
            let half_jump = 0.5 * sign * jump[p];
            coeffs[last + p] += half_jump;
            coeffs[top + p] = -half_jump;
        }
    }
    let poly = DgSolution::from_parts(sol.mesh().clone(), rs, dim, coeffs, sol.u0().to_vec())?;
    Ok(Reconstruction { r, poly })
}

/// `||[U]^{n-1}||` in the given norm, for `1 <= n <= N`.
pub fn jump_indicator(sol: &DgSolution, n: usize, norm: StateNorm) -> Result<f64> {
    Ok(norm.norm(&sol.jump(n)?))
}

/// Projection onto piecewise polynomials of degree `r - 1` that keeps the
/// Legendre coefficients of degree `<= r - 2` and matches `v(t_n)` at each
/// right endpoint.
pub fn pi_tilde_project<F>(mut v: F, dim: usize, mesh: &TimeMesh, r: usize, ws: &LegendreWorkspace) -> Result<DgSolution>
where
    F: FnMut(f64, &mut [f64]),
{
    if r == 0 {
        return invalid("r must be >= 1");
    }
    let nsteps = mesh.len();
    let mut coeffs = vec![0.0; nsteps * r * dim];
    let mut end = vec![0.0; dim];
    for n in 1..=nsteps {
        let interval = mesh.interval(n)?;
        let base = (n - 1) * r * dim;
        v(interval.1, &mut end);
        let mut tilde = end.clone();
        for j in 0..r - 1 {
            let a = legendre_coeff_vec(&mut v, dim, interval, j, ws.quad());
            tilde.iter_mut().zip(&a).for_each(|(t, &c)| *t -= c);
            coeffs[base + j * dim..base + (j + 1) * dim].copy_from_slice(&a);
        }
        coeffs[base + (r - 1) * dim..base + r * dim].copy_from_slice(&tilde);
    }
    let mut u0 = vec![0.0; dim];
    v(mesh.node(0), &mut u0);
    DgSolution::from_parts(mesh.clone(), r, dim, coeffs, u0)
}

/// Dominant-term diagnostic on interval `n`: returns `a_nr(u)` and
/// `max ||U - u + a_nr (p_nr - p_{n,r-1})||` over `samples` equispaced points
/// of the closed interval (the left end taken as the right limit).
pub fn error_profile_deviation<F>(
    sol: &DgSolution,
    mut reference: F,
    n: usize,
    ws: &LegendreWorkspace,
    norm: StateNorm,
    samples: usize,
) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(f64, &mut [f64]),
{
    let (r, dim) = (sol.r(), sol.dim());
    if ws.r() != r {
        return invalid("workspace degree does not match the solution");
    }
    if samples < 2 {
        return invalid("need at least two samples");
    }
    let interval = sol.mesh().interval(n)?;
    let a_nr = legendre_coeff_vec(&mut reference, dim, interval, r, ws.quad());
    let mut u = vec![0.0; dim];
    let mut uh = vec![0.0; dim];
    let mut pj = vec![0.0; r + 1];
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let tau = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
        let t = 0.5 * ((1.0 - tau) * interval.0 + (1.0 + tau) * interval.1);
        sol.eval_reference(n, tau, &mut uh)?;
        reference(t, &mut u);
        legendre_values(tau, &mut pj);
        let radau = pj[r] - pj[r - 1];
        let dev: Vec<f64> = (0..dim).map(|p| uh[p] - u[p] + a_nr[p] * radau).collect();
        worst = worst.max(norm.norm(&dev));
    }
    Ok((a_nr, worst))
}
