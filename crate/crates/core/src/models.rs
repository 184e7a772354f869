//! Model problems: a scalar ODE, the 1D heat equation by the method of lines
//! and the 2D heat equation with the 5-point Laplacian.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dg::{Forcing, LinearProblem, StateNorm};
use crate::error::{invalid, DgError, Result};
use crate::system::{CsrMatrix, LinearOperator, Tridiagonal};

/// Decay rate of the scalar ODE `u' + lambda u = cos(pi t)`.
pub const ODE_LAMBDA: f64 = 0.5;
pub const ODE_FINAL_TIME: f64 = 2.0;

/// `u' + u/2 = cos(pi t)`, `u(0) = 1`, on `(0, 2]`.
pub fn ode_problem() -> LinearProblem {
    LinearProblem {
        operator: LinearOperator::Scalar(ODE_LAMBDA),
        forcing: Forcing::from_fn(|t, out| out[0] = (PI * t).cos()),
        u0: vec![1.0],
        final_time: ODE_FINAL_TIME,
        norm: StateNorm::Euclidean,
    }
}

/// Spatially constant source term with a known Laplace transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Zero,
    /// `(1 + t) e^{-t}`
    RampDecay,
}

impl Source {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::RampDecay => (1.0 + t) * (-t).exp(),
        }
    }

    /// Laplace transform at `z`; the pole at `z = -1` is rejected.
    pub fn laplace(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Self::Zero => Ok(Complex64::new(0.0, 0.0)),
            Self::RampDecay => fhat(z),
        }
    }

    fn forcing(self) -> Forcing {
        match self {
            Self::Zero => Forcing::Zero,
            Self::RampDecay => Forcing::from_fn(move |t, out| out.fill(self.eval(t))),
        }
    }
}

/// Transform of `(1 + t) e^{-t}`: `1/(z+1) + 1/(z+1)^2`.
pub fn fhat(z: Complex64) -> Result<Complex64> {
    let w = z + 1.0;
    if w.norm() == 0.0 {
        return Err(DgError::InvalidArgument("Laplace transform of the source has a pole at z = -1".into()));
    }
    let inv = w.inv();
    Ok(inv + inv * inv)
}

/// Quadratic profile `c0 + c1 x + c2 x^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic(pub [f64; 3]);

impl Quadratic {
    /// `x (L - x)`
    pub fn bump(length: f64) -> Self {
        Self([0.0, length, -1.0])
    }

    pub fn zero() -> Self {
        Self([0.0; 3])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let [a, b, c] = self.0;
        a + x * (b + x * c)
    }

    pub fn second_derivative(&self) -> f64 {
        2.0 * self.0[2]
    }
}

/// `u_t - kappa u_xx = f` on `(0, L)` with homogeneous Dirichlet conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Heat1dConfig {
    pub length: f64,
    pub kappa: f64,
    /// Number of spatial intervals `P`.
    pub intervals: usize,
    pub final_time: f64,
    pub initial: Quadratic,
    pub source: Source,
}

impl Heat1dConfig {
    /// `L = 2`, `T = 2`, `kappa = (L/pi)^2`, `u0 = x(L - x)`, `f = (1+t)e^{-t}`.
    pub fn standard(intervals: usize) -> Self {
        let length = 2.0;
        Self {
            length,
            kappa: (length / PI).powi(2),
            intervals,
            final_time: 2.0,
            initial: Quadratic::bump(length),
            source: Source::RampDecay,
        }
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn with_intervals(mut self, intervals: usize) -> Self {
        self.intervals = intervals;
        self
    }

    pub fn h(&self) -> f64 {
        self.length / self.intervals as f64
    }

    /// `x_p = p h` for `p = 1..P-1`.
    pub fn interior_points(&self) -> Vec<f64> {
        let h = self.h();
        (1..self.intervals).map(|p| p as f64 * h).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.intervals < 2 {
            return invalid("need P >= 2 spatial intervals");
        }
        if !(self.kappa > 0.0) || !(self.length > 0.0) || !(self.final_time > 0.0) {
            return invalid("length, kappa and final time must be positive");
        }
        Ok(())
    }
}

/// Method-of-lines system: tridiagonal `A` of order `P - 1` with stencil
/// `kappa/h^2 (-1, 2, -1)`, norm weighted by `h`.
pub fn heat1d_problem(cfg: &Heat1dConfig) -> Result<LinearProblem> {
    cfg.validate()?;
    let h = cfg.h();
    let c = cfg.kappa / (h * h);
    let m = cfg.intervals - 1;
    let op = LinearOperator::Tridiagonal(Tridiagonal::constant(m, -c, 2.0 * c, -c)?);
    let u0 = cfg.interior_points().iter().map(|&x| cfg.initial.eval(x)).collect();
    Ok(LinearProblem { operator: op, forcing: cfg.source.forcing(), u0, final_time: cfg.final_time, norm: StateNorm::Weighted(h) })
}

/// `u_t - kappa (u_xx + u_yy) = f` on `(0, Lx) x (0, Ly)` with initial data
/// `qx(x) qy(y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heat2dConfig {
    pub lx: f64,
    pub ly: f64,
    pub px: usize,
    pub py: usize,
    pub kappa: f64,
    pub final_time: f64,
    pub initial_x: Quadratic,
    pub initial_y: Quadratic,
    pub source: Source,
}

impl Heat2dConfig {
    /// `Lx = Ly = 2`, `T = 2`, `kappa = 2/pi^2`, `u0 = x(2-x) y(2-y)`,
    /// `f = (1+t)e^{-t}`.
    pub fn standard(px: usize, py: usize) -> Self {
        Self {
            lx: 2.0,
            ly: 2.0,
            px,
            py,
            kappa: 2.0 / (PI * PI),
            final_time: 2.0,
            initial_x: Quadratic::bump(2.0),
            initial_y: Quadratic::bump(2.0),
            source: Source::RampDecay,
        }
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.px as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / self.py as f64
    }

    /// `M = (Px - 1)(Py - 1)`.
    pub fn dim(&self) -> usize {
        (self.px - 1) * (self.py - 1)
    }

    /// Column-major position of interior node `(p, q)`, `1 <= p < Px`,
    /// `1 <= q < Py`.
    pub fn index(&self, p: usize, q: usize) -> usize {
        (p - 1) + (q - 1) * (self.px - 1)
    }

    /// Inverse of [`Heat2dConfig::index`].
    pub fn grid_position(&self, idx: usize) -> (usize, usize) {
        (idx % (self.px - 1) + 1, idx / (self.px - 1) + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.px < 2 || self.py < 2 {
            return invalid("need Px, Py >= 2");
        }
        if !(self.kappa > 0.0) || !(self.lx > 0.0) || !(self.ly > 0.0) || !(self.final_time > 0.0) {
            return invalid("lengths, kappa and final time must be positive");
        }
        Ok(())
    }
}

/// Semidiscrete 5-point system, column-major unknowns, norm weighted by
/// `hx hy`.
pub fn heat2d_problem(cfg: &Heat2dConfig) -> Result<LinearProblem> {
    cfg.validate()?;
    let (hx, hy) = (cfg.hx(), cfg.hy());
    let (cx, cy) = (cfg.kappa / (hx * hx), cfg.kappa / (hy * hy));
    let m = cfg.dim();
    let mut triplets = Vec::with_capacity(5 * m);
    let mut u0 = Vec::with_capacity(m);
    for q in 1..cfg.py {
        for p in 1..cfg.px {
            let i = cfg.index(p, q);
            triplets.push((i, i, 2.0 * (cx + cy)));
            if p > 1 {
                triplets.push((i, cfg.index(p - 1, q), -cx));
            }
            if p + 1 < cfg.px {
                triplets.push((i, cfg.index(p + 1, q), -cx));
            }
            if q > 1 {
                triplets.push((i, cfg.index(p, q - 1), -cy));
            }
            if q + 1 < cfg.py {
                triplets.push((i, cfg.index(p, q + 1), -cy));
            }
            u0.push(cfg.initial_x.eval(p as f64 * hx) * cfg.initial_y.eval(q as f64 * hy));
        }
    }
    let op = LinearOperator::Sparse(CsrMatrix::from_triplets(m, &triplets)?);
    Ok(LinearProblem { operator: op, forcing: cfg.source.forcing(), u0, final_time: cfg.final_time, norm: StateNorm::Weighted(hx * hy) })
}

/// Smallest eigenvalue of the `P - 1` point Dirichlet stencil `kappa/h^2 (-1, 2, -1)`.
pub fn heat1d_min_eigenvalue(kappa: f64, length: f64, intervals: usize) -> f64 {
    let h = length / intervals as f64;
    4.0 * kappa / (h * h) * (PI * h / (2.0 * length)).sin().powi(2)
}
