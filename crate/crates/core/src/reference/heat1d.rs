//! Laplace transform of the continuous 1D heat solution.
//!
//! `z u^ - kappa u^'' = u0 + f^(z)` with `u^(0) = u^(L) = 0`. For quadratic
//! `u0` the right side `kappa g` is quadratic in `x`, so
//! `u^_p = g/w^2 + g''/w^4` (`w^2 = z/kappa`) is a particular solution and the
//! boundary values are removed with `sinh(w y)/sinh(w L)`.

use num_complex::Complex64;

use crate::error::Result;
use crate::models::Heat1dConfig;

/// `sinh(w y) / sinh(w L)` for `0 <= y <= L`, `Re w > 0`, without forming
/// either sinh.
pub fn sinh_ratio(w: Complex64, y: f64, length: f64) -> Complex64 {
    let num = 1.0 - (-2.0 * w * y).exp();
    let den = 1.0 - (-2.0 * w * length).exp();
    (w * (y - length)).exp() * num / den
}

/// Principal square root of `z / kappa`, which has `Re w > 0` off the
/// negative real axis.
pub fn omega(z: Complex64, kappa: f64) -> Complex64 {
    (z / kappa).sqrt()
}

/// `u^(x, z)` for the configuration's quadratic initial profile and
/// spatially constant source.
pub fn uhat_1d(x: f64, z: Complex64, cfg: &Heat1dConfig) -> Result<Complex64> {
    let fh = cfg.source.laplace(z)?;
    let w = omega(z, cfg.kappa);
    let w2 = w * w;
    let g2 = cfg.initial.second_derivative() / cfg.kappa;
    let particular = |y: f64| (cfg.initial.eval(y) + fh) / cfg.kappa / w2 + g2 / (w2 * w2);
    let l = cfg.length;
    Ok(particular(x) - particular(0.0) * sinh_ratio(w, l - x, l) - particular(l) * sinh_ratio(w, x, l))
}

/// `u^` at each point of `xs` for one `z`.
pub fn uhat_1d_grid(xs: &[f64], z: Complex64, cfg: &Heat1dConfig) -> Result<Vec<Complex64>> {
    xs.iter().map(|&x| uhat_1d(x, z, cfg)).collect()
}
