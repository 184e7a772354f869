//! Reference solutions: the closed-form ODE solution, Laplace inversion for the
//! continuous 1D and semidiscrete 2D heat problems, and spatial Richardson
//! extrapolation.

mod contour;
mod heat1d;

pub use crate::models::fhat;
pub use contour::{bromwich_invert, ContourRule, DEFAULT_HALF_NODES};
pub use heat1d::{omega, sinh_ratio, uhat_1d, uhat_1d_grid};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dg::{DgSolution, LinearProblem};
use crate::error::{invalid, DgError, Result};
use crate::models::{Heat1dConfig, Source, ODE_LAMBDA};
use crate::system::BandedLu;

/// Exact solution of `u' + u/2 = cos(pi t)`, `u(0) = 1`.
pub fn ode_exact(t: f64) -> f64 {
    let l = ODE_LAMBDA;
    let d = l * l + PI * PI;
    (1.0 - l / d) * (-l * t).exp() + (l * (PI * t).cos() + PI * (PI * t).sin()) / d
}

/// `(zI + A) u^ = u0 + f^(z) 1` for the semidiscrete system, solved with a
/// complex banded LU.
pub fn resolvent_2d(z: Complex64, problem: &LinearProblem, source: Source) -> Result<Vec<Complex64>> {
    let m = problem.dim();
    let (kl, ku) = problem.operator.bandwidths();
    let entries = problem.operator.entries().into_iter().map(|(i, j, a)| (i, j, Complex64::new(a, 0.0))).chain((0..m).map(|i| (i, i, z)));
    let lu = BandedLu::from_entries(m, kl, ku, entries)?;
    let fh = source.laplace(z)?;
    let mut rhs: Vec<Complex64> = problem.u0.iter().map(|&u| Complex64::new(u, 0.0) + fh).collect();
    lu.solve_in_place(&mut rhs)?;
    Ok(rhs)
}

/// Transform values cached at every contour node, reused for all `t` in the
/// rule's window.
#[derive(Debug, Clone)]
pub struct LaplaceReference {
    rule: ContourRule,
    values: Vec<Vec<Complex64>>,
    initial: Vec<f64>,
}

impl LaplaceReference {
    /// Evaluates `uhat` at each node (in parallel). `initial` is returned at
    /// `t = 0`.
    pub fn build<F>(rule: ContourRule, initial: Vec<f64>, uhat: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Vec<Complex64>> + Sync,
    {
        let values = rule.nodes().par_iter().map(|&z| uhat(z)).collect::<Result<Vec<_>>>()?;
        if let Some(v) = values.iter().find(|v| v.len() != initial.len()) {
            return Err(DgError::DimensionMismatch { expected: initial.len(), actual: v.len() });
        }
        Ok(Self { rule, values, initial })
    }

    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    pub fn rule(&self) -> &ContourRule {
        &self.rule
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        if out.len() != self.dim() {
            return Err(DgError::DimensionMismatch { expected: self.dim(), actual: out.len() });
        }
        if t == 0.0 {
            out.copy_from_slice(&self.initial);
            return Ok(());
        }
        self.rule.invert_vector(&self.values, t, out)
    }

    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(t, &mut out)?;
        Ok(out)
    }
}

/// Continuous solution at the interior grid points of `cfg`.
pub fn heat1d_reference(cfg: &Heat1dConfig, rule: ContourRule) -> Result<LaplaceReference> {
    cfg.validate()?;
    let xs = cfg.interior_points();
    let initial = xs.iter().map(|&x| cfg.initial.eval(x)).collect();
    LaplaceReference::build(rule, initial, |z| uhat_1d_grid(&xs, z, cfg))
}

/// Semidiscrete solution `u_h(t)` of `problem`, whose forcing must be
/// `source(t)` in every component.
pub fn heat2d_reference(problem: &LinearProblem, source: Source, rule: ContourRule) -> Result<LaplaceReference> {
    LaplaceReference::build(rule, problem.u0.clone(), |z| resolvent_2d(z, problem, source))
}

/// Largest relative change `max_t |u_K(t) - u_{K+8}(t)|_inf / |u_{K+8}(t)|_inf`
/// over `times` between rules with `K` and `K + 8` half nodes.
pub fn contour_self_check<F>(build: F, t_min: f64, t_max: f64, half_nodes: usize, times: &[f64]) -> Result<f64>
where
    F: Fn(ContourRule) -> Result<LaplaceReference>,
{
    let coarse = build(ContourRule::new(t_min, t_max, half_nodes)?)?;
    let fine = build(ContourRule::new(t_min, t_max, half_nodes + 8)?)?;
    let worst = times
        .par_chunks(256)
        .map(|chunk| {
            let (mut a, mut b) = (vec![0.0; coarse.dim()], vec![0.0; fine.dim()]);
            let mut worst: f64 = 0.0;
            for &t in chunk {
                coarse.eval_into(t, &mut a)?;
                fine.eval_into(t, &mut b)?;
                let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}

/// `U^R_p = U^fine_{2p} + (U^fine_{2p} - U_p)/3` on interior grid vectors:
/// `coarse` has `P - 1` entries and `fine` has `2P - 1`.
pub fn richardson(coarse: &[f64], fine: &[f64]) -> Result<Vec<f64>> {
    if fine.len() != 2 * coarse.len() + 1 {
        return invalid(format!("fine grid of {} interior points is not a 2x refinement of {}", fine.len(), coarse.len()));
    }
    Ok(coarse
        .iter()
        .enumerate()
        .map(|(c, &u)| {
            let f = fine[2 * c + 1];
            f + (f - u) / 3.0
        })
        .collect())
}

/// Richardson extrapolation applied to every DG coefficient; the scheme is
/// linear, so this equals extrapolating `U(t)` pointwise.
pub fn richardson_solution(coarse: &DgSolution, fine: &DgSolution) -> Result<DgSolution> {
    if coarse.mesh() != fine.mesh() || coarse.r() != fine.r() {
        return invalid("Richardson pair must share the time mesh and degree");
    }
    let (dc, df) = (coarse.dim(), fine.dim());
    if df != 2 * dc + 1 {
        return invalid(format!("fine dimension {df} is not a 2x refinement of {dc}"));
    }
    let blocks = coarse.coeffs().len() / dc.max(1);
    let mut coeffs = Vec::with_capacity(coarse.coeffs().len());
    for b in 0..blocks {
        coeffs.extend(richardson(&coarse.coeffs()[b * dc..(b + 1) * dc], &fine.coeffs()[b * df..(b + 1) * df])?);
    }
    let u0 = richardson(coarse.u0(), fine.u0())?;
    DgSolution::from_parts(coarse.mesh().clone(), coarse.r(), dc, coeffs, u0)
}
