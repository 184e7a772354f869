//! Numerical Laplace inversion on a hyperbolic contour with the trapezoid
//! rule.
//!
//! The contour is `z(u) = mu (1 + sin(i u - alpha))`, `u` real, which opens
//! to the left around the negative real axis. With `u_k = k h`, `k = -K..K`,
//! conjugate symmetry folds the sum to `k = 0..K`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{invalid, DgError, Result};

/// Default `K`; the rule uses `2K + 1` nodes.
pub const DEFAULT_HALF_NODES: usize = 32;

/// Angle kept between the strip edges and both the imaginary axis and the
/// vertical line.
const ANGLE_MARGIN: f64 = 0.1;

/// Modelled error that [`ContourRule::for_window`] aims for.
const MODEL_TARGET: f64 = 1e-14;

const MAX_HALF_NODES: usize = 256;

/// Target for the rounding floor in the parameter model.
const ROUNDING: f64 = 1e-15;

/// Contour parameters and folded quadrature for a time window `[t_min, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourRule {
    mu: f64,
    alpha: f64,
    h: f64,
    t_min: f64,
    t_max: f64,
    nodes: Vec<Complex64>,
    weights: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    log_err: f64,
    mu: f64,
    alpha: f64,
    h: f64,
}

/// Modelled log error of the `K`-term rule for given `(alpha, d, h)` with `mu`
/// chosen to balance discretisation against truncation.
fn model(alpha: f64, d: f64, h: f64, k: usize, t0: f64, t1: f64) -> Option<Candidate> {
    let reach = alpha.sin() * (k as f64 * h).cosh() - 1.0;
    if reach <= 0.0 {
        return None;
    }
    let growth = 1.0 - (alpha - d).sin();
    let mu = 2.0 * PI * d / h / (t1 * growth + t0 * reach);
    let log_trunc = -mu * t0 * reach;
    let log_round = ROUNDING.ln() + mu * t1 * (1.0 - alpha.sin());
    let log_err = log_trunc.max(log_round);
    Some(Candidate { log_err, mu, alpha, h })
}

fn optimise(t_min: f64, t_max: f64, half_nodes: usize) -> Result<Candidate> {
    if !(t_min > 0.0) || !(t_max >= t_min) || !t_max.is_finite() {
        return invalid(format!("contour window must satisfy 0 < t_min <= t_max, got [{t_min}, {t_max}]"));
    }
    if half_nodes < 2 {
        return invalid("contour needs K >= 2");
    }
    let top = FRAC_PI_2 - ANGLE_MARGIN;
    let mut best: Option<Candidate> = None;
    let steps = 48;
    for ia in 1..steps {
        let alpha = top * ia as f64 / steps as f64;
        for id in 1..steps {
            let d = top * id as f64 / steps as f64;
            if alpha - d < ANGLE_MARGIN || alpha + d > top {
                continue;
            }
            for ih in 0..120 {
                let h = 10f64.powf(-2.5 + 2.5 * ih as f64 / 119.0);
                if let Some(c) = model(alpha, d, h, half_nodes, t_min, t_max) {
                    if best.is_none_or(|b| c.log_err < b.log_err) {
                        best = Some(c);
                    }
                }
            }
        }
    }
    best.ok_or_else(|| DgError::InvalidArgument("no admissible contour parameters".into()))
}

impl ContourRule {
    /// Chooses `(mu, alpha, h)` for the window and `K` by minimising a model
    /// of discretisation, truncation and rounding error.
    pub fn new(t_min: f64, t_max: f64, half_nodes: usize) -> Result<Self> {
        let c = optimise(t_min, t_max, half_nodes)?;
        Ok(Self::with_parameters(c.mu, c.alpha, c.h, half_nodes, t_min, t_max))
    }

    /// Smallest `K >= DEFAULT_HALF_NODES` (in steps of 8) whose modelled error
    /// is below `MODEL_TARGET` on the window.
    pub fn for_window(t_min: f64, t_max: f64) -> Result<Self> {
        let mut k = DEFAULT_HALF_NODES;
        loop {
            let c = optimise(t_min, t_max, k)?;
            if c.log_err <= MODEL_TARGET.ln() || k >= MAX_HALF_NODES {
                return Ok(Self::with_parameters(c.mu, c.alpha, c.h, k, t_min, t_max));
            }
            k += 8;
        }
    }

    /// Rule with explicit parameters.
    pub fn with_parameters(mu: f64, alpha: f64, h: f64, half_nodes: usize, t_min: f64, t_max: f64) -> Self {
        let mut nodes = Vec::with_capacity(half_nodes + 1);
        let mut weights = Vec::with_capacity(half_nodes + 1);
        for k in 0..=half_nodes {
            let w = Complex64::new(-alpha, k as f64 * h);
            let z = mu * (1.0 + w.sin());
            let dz = Complex64::i() * mu * w.cos();
            let scale = if k == 0 { 0.5 } else { 1.0 } * h / PI;
            nodes.push(z);
            weights.push(dz * scale);
        }
        Self { mu, alpha, h, t_min, t_max, nodes, weights }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn half_nodes(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    /// `z_k`, `k = 0..=K`.
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        // small slack so that endpoints computed in floating point are accepted
        let slack = 1e-12 * self.t_max;
        if t < self.t_min - slack || t > self.t_max + slack {
            return Err(DgError::TimeOutOfRange { t, lo: self.t_min, hi: self.t_max });
        }
        Ok(())
    }

    /// Combines transform values at the nodes into `u(t)`.
    pub fn invert_scalar(&self, values: &[Complex64], t: f64) -> Result<f64> {
        self.check_time(t)?;
        if values.len() != self.nodes.len() {
            return Err(DgError::DimensionMismatch { expected: self.nodes.len(), actual: values.len() });
        }
        Ok(self.nodes.iter().zip(&self.weights).zip(values).map(|((z, w), v)| (w * (z * t).exp() * v).im).sum())
    }

    /// Vector version: `values[k]` is the transform at `z_k`.
    pub fn invert_vector(&self, values: &[Vec<Complex64>], t: f64, out: &mut [f64]) -> Result<()> {
        self.check_time(t)?;
        if values.len() != self.nodes.len() {
            return Err(DgError::DimensionMismatch { expected: self.nodes.len(), actual: values.len() });
        }
        out.fill(0.0);
        for ((z, w), v) in self.nodes.iter().zip(&self.weights).zip(values) {
            if v.len() != out.len() {
                return Err(DgError::DimensionMismatch { expected: out.len(), actual: v.len() });
            }
            let c = w * (z * t).exp();
            for (o, x) in out.iter_mut().zip(v) {
                *o += (c * x).im;
            }
        }
        Ok(())
    }
}

/// `u(t)` from its transform `uhat` for `t` in the rule's window.
pub fn bromwich_invert<F>(mut uhat: F, t: f64, rule: &ContourRule) -> Result<f64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let values = rule.nodes().iter().map(|&z| uhat(z)).collect::<Result<Vec<_>>>()?;
    rule.invert_scalar(&values, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check<F: Fn(Complex64) -> Complex64, G: Fn(f64) -> f64>(uhat: F, exact: G, t0: f64, t1: f64, tol: f64) {
        let rule = ContourRule::for_window(t0, t1).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..=40 {
            let t = t0 * (t1 / t0).powf(i as f64 / 40.0);
            let v = bromwich_invert(|z| Ok(uhat(z)), t, &rule).unwrap();
            worst = worst.max((v - exact(t)).abs() / exact(t).abs().max(1e-3));
        }
        assert!(worst <= tol, "worst {worst:e} on [{t0}, {t1}]");
    }

    #[test]
    fn exponential_decay() {
        for a in [0.5, 1.0, 10.0, 1e3] {
            check(|z| 1.0 / (z + a), |t| (-a * t).exp(), 0.05, 2.0, 1e-11);
        }
    }

    #[test]
    fn ramp_and_oscillation() {
        check(|z| 1.0 / (z * z), |t| t, 0.01, 2.0, 1e-11);
        check(|z| 1.0 / ((z + 1.0) * (z + 1.0)), |t| t * (-t).exp(), 0.05, 2.0, 1e-11);
        check(|z| 1.0 / (z + 1.0) + 1.0 / ((z + 1.0) * (z + 1.0)), |t| (1.0 + t) * (-t).exp(), 2.0 / 1024.0, 2.0, 1e-11);
    }

    #[test]
    fn wider_windows_need_more_nodes() {
        let narrow = ContourRule::for_window(0.05, 2.0).unwrap();
        let wide = ContourRule::for_window(2.0 / 6400.0, 2.0).unwrap();
        assert!(narrow.half_nodes() >= DEFAULT_HALF_NODES);
        assert!(wide.half_nodes() > narrow.half_nodes());
        check(|z| 1.0 / (z + 1.0), |t| (-t).exp(), 2.0 / 6400.0, 2.0, 1e-13);
    }

    #[test]
    fn window_is_enforced() {
        let rule = ContourRule::new(0.5, 2.0, 16).unwrap();
        assert!(rule.check_time(0.1).is_err());
        assert!(rule.check_time(3.0).is_err());
        assert!(rule.check_time(2.0).is_ok());
        assert!(ContourRule::new(0.0, 1.0, 16).is_err());
        assert!(ContourRule::new(2.0, 1.0, 16).is_err());
    }

    #[test]
    fn nodes_are_symmetric_about_real_axis() {
        let rule = ContourRule::new(0.1, 2.0, 8).unwrap();
        assert_eq!(rule.nodes()[0].im, 0.0);
        assert!(rule.nodes()[0].re > 0.0);
        assert_eq!(rule.half_nodes(), 8);
        // large |u| heads into the left half plane
        assert!(rule.nodes()[8].re < 0.0);
    }
}
