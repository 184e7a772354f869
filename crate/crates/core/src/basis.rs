//! Legendre polynomials on the reference interval [-1, 1], the coupling
//! matrices of the local Legendre formulation, Gauss–Legendre rules,
//! right-hand Gauss–Radau abscissas and local Fourier–Legendre coefficients.
//!
//! The local polynomial `p_nj` on an interval `(a, b)` is `P_j` composed with
//! the inverse of the affine map `tau -> ((1 - tau) a + (1 + tau) b) / 2`, so
//! `p_nj(b) = 1` and `p_nj(a) = (-1)^j`.

use crate::error::{invalid, DgError, Result};

/// Largest Gauss rule accepted by [`gauss_rule`].
pub const MAX_GAUSS_POINTS: usize = 64;

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Value of the Legendre polynomial `P_j(tau)`, normalised by `P_j(1) = 1`.
pub fn legendre_eval(j: usize, tau: f64) -> f64 {
    match j {
        0 => 1.0,
        1 => tau,
        _ => {
            let (mut p0, mut p1) = (1.0, tau);
            for n in 1..j {
                let nf = n as f64;
                let p2 = ((2.0 * nf + 1.0) * tau * p1 - nf * p0) / (nf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// Fills `out[j] = P_j(tau)` for `j = 0..out.len()`.
pub fn legendre_values(tau: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = tau;
    }
    for n in 1..out.len().saturating_sub(1) {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0) * tau * out[n] - nf * out[n - 1]) / (nf + 1.0);
    }
}

/// `(P_j(tau), P_j'(tau))`. The derivative uses `P'_{n+1} = P'_{n-1} + (2n+1) P_n`,
/// which stays finite at the endpoints.
pub fn legendre_with_derivative(j: usize, tau: f64) -> (f64, f64) {
    if j == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, tau);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for n in 1..j {
        let nf = n as f64;
        let p_next = ((2.0 * nf + 1.0) * tau * p - nf * p_prev) / (nf + 1.0);
        let d_next = d_prev + (2.0 * nf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// The `r x r` matrix `G_ij = P_j(-1) P_i(-1) + int P_j' P_i`, in closed form.
pub fn g_matrix(r: usize) -> Vec<Vec<f64>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i >= j {
                        if (i + j) % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        1.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Diagonal of `H_ij = int P_j P_i = delta_ij / (2j + 1)`.
pub fn h_diag(r: usize) -> Vec<f64> {
    (0..r).map(|j| 1.0 / (2 * j + 1) as f64).collect()
}

/// A quadrature rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over `(a, b)` through the affine map.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

/// `m`-point Gauss–Legendre rule, exact for polynomials of degree `2m - 1`.
pub fn gauss_rule(m: usize) -> Result<GaussRule> {
    if m == 0 || m > MAX_GAUSS_POINTS {
        return invalid(format!("Gauss rule size must be in 1..={MAX_GAUSS_POINTS}, got {m}"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(m, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(DgError::RootFinding { degree: m });
        }
        let (_, d) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * d * d);
        nodes[m - 1 - i] = x;
        nodes[i] = -x;
        weights[m - 1 - i] = w;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(GaussRule { nodes, weights })
}

fn radau_poly(r: usize, x: f64) -> (f64, f64) {
    let (pr, dr) = legendre_with_derivative(r, x);
    let (pm, dm) = legendre_with_derivative(r - 1, x);
    (pr - pm, dr - dm)
}

fn bisect(r: usize, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = radau_poly(r, lo).0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = radau_poly(r, mid).0;
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `r` zeros of `P_r - P_{r-1}` in increasing order, ending with exactly 1.
///
/// Newton with deflation from cosine-spaced guesses, then a bisection
/// safeguard on a small bracket around each root.
pub fn radau_abscissas(r: usize) -> Result<Vec<f64>> {
    if r == 0 {
        return invalid("Radau abscissas need r >= 1");
    }
    let mut roots: Vec<f64> = Vec::with_capacity(r);
    let denom = (2 * r - 1) as f64;
    for j in 1..r {
        let mut x = (2.0 * std::f64::consts::PI * j as f64 / denom).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = radau_poly(r, x);
            let deflate: f64 = 1.0 / (x - 1.0) + roots.iter().map(|&y| 1.0 / (x - y)).sum::<f64>();
            let dx = p / (d - p * deflate);
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged || !x.is_finite() || x <= -1.0 || x >= 1.0 {
            return Err(DgError::RootFinding { degree: r });
        }
        let delta = 1e-9 * (1.0 + x.abs());
        let (lo, hi) = (x - delta, x + delta);
        let (flo, fhi) = (radau_poly(r, lo).0, radau_poly(r, hi).0);
        if (flo < 0.0) != (fhi < 0.0) {
            x = bisect(r, lo, hi);
        } else if radau_poly(r, x).0.abs() > 1e-12 {
            return Err(DgError::RootFinding { degree: r });
        }
        roots.push(x);
    }
    roots.push(1.0);
    roots.sort_by(f64::total_cmp);
    if roots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DgError::RootFinding { degree: r });
    }
    Ok(roots)
}

/// Maps the reference node `tau` into `(a, b)`.
#[inline]
pub fn affine(a: f64, b: f64, tau: f64) -> f64 {
    0.5 * ((1.0 - tau) * a + (1.0 + tau) * b)
}

/// Inverse of [`affine`].
#[inline]
pub fn reference_coord(a: f64, b: f64, t: f64) -> f64 {
    (2.0 * t - a - b) / (b - a)
}

/// Local Fourier–Legendre coefficient `a_j(v) = (2j+1)/(b-a) int_a^b v p_j`
/// of a scalar function.
pub fn legendre_coeff<F: FnMut(f64) -> f64>(mut v: F, (a, b): (f64, f64), j: usize, rule: &GaussRule) -> f64 {
    let scale = (2 * j + 1) as f64 / (b - a);
    scale * rule.integrate(a, b, |t| v(t) * legendre_eval(j, reference_coord(a, b, t)))
}

/// Vector-valued variant of [`legendre_coeff`]: `v(t, out)` writes a state of
/// length `dim`.
pub fn legendre_coeff_vec<F: FnMut(f64, &mut [f64])>(mut v: F, dim: usize, (a, b): (f64, f64), j: usize, rule: &GaussRule) -> Vec<f64> {
    let half = 0.5 * (b - a);
    let scale = (2 * j + 1) as f64 / (b - a) * half;
    let mut acc = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        v(affine(a, b, x), &mut buf);
        let c = w * legendre_eval(j, x) * scale;
        acc.iter_mut().zip(&buf).for_each(|(s, &y)| *s += c * y);
    }
    acc
}

/// Precomputed tables for a fixed trial degree `r` (polynomials of degree
/// at most `r - 1` per interval).
#[derive(Debug, Clone)]
pub struct LegendreWorkspace {
    r: usize,
    g: Vec<Vec<f64>>,
    h: Vec<f64>,
    radau: Vec<f64>,
    quad: GaussRule,
    /// `quad_legendre[q][j] = P_j(node_q)` for `j = 0..=r`.
    quad_legendre: Vec<Vec<f64>>,
}

impl LegendreWorkspace {
    /// Workspace with the default quadrature size `r + 3`.
    pub fn new(r: usize) -> Result<Self> {
        Self::with_quadrature(r, r + 3)
    }

    pub fn with_quadrature(r: usize, m: usize) -> Result<Self> {
        if r == 0 {
            return invalid("degree count r must be >= 1");
        }
        let quad = gauss_rule(m)?;
        let quad_legendre = quad
            .nodes
            .iter()
            .map(|&x| {
                let mut vals = vec![0.0; r + 1];
                legendre_values(x, &mut vals);
                vals
            })
            .collect();
        Ok(Self { r, g: g_matrix(r), h: h_diag(r), radau: radau_abscissas(r)?, quad, quad_legendre })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn g(&self) -> &[Vec<f64>] {
        &self.g
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn radau(&self) -> &[f64] {
        &self.radau
    }

    pub fn quad(&self) -> &GaussRule {
        &self.quad
    }

    /// `P_j(node_q)` for `j <= r`.
    pub fn quad_legendre(&self, q: usize) -> &[f64] {
        &self.quad_legendre[q]
    }
}
