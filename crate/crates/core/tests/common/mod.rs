//! Property checks shared by the proptest suite and the acceptance run.
//! Each returns `Err` with a description on the first violation.

#![allow(dead_code, clippy::needless_range_loop, clippy::type_complexity)]

use dgtime::basis::{g_matrix, gauss_rule, h_diag, legendre_eval, legendre_values, radau_abscissas, LegendreWorkspace};
use dgtime::models::ode_problem;
use dgtime::postprocess::{error_profile_deviation, pi_tilde_project};
use dgtime::reference::ode_exact;
use dgtime::reference::{bromwich_invert, ContourRule};
use dgtime::system::{LinearOperator, Tridiagonal};
use dgtime::{dg_solve, jump_indicator, reconstruct, DgSolution, Forcing, LinearProblem, StateNorm, TimeMesh};
use num_complex::Complex64;

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `int_a^b p_i p_j = k delta_ij / (2j+1)`.
pub fn orthogonality(r: usize, a: f64, k: f64) -> Check {
    let rule = gauss_rule(r + 2).map_err(|e| e.to_string())?;
    let b = a + k;
    for i in 0..r {
        for j in 0..r {
            let tau = |t: f64| (2.0 * t - a - b) / k;
            let v = rule.integrate(a, b, |t| legendre_eval(i, tau(t)) * legendre_eval(j, tau(t)));
            let want = if i == j { k / (2 * j + 1) as f64 } else { 0.0 };
            ensure((v - want).abs() <= 1e-12 * k, || format!("r={r} ({i},{j}): {v} vs {want}"))?;
        }
        ensure((legendre_eval(i, 1.0) - 1.0).abs() < 1e-15, || format!("P_{i}(1)"))?;
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        ensure((legendre_eval(i, -1.0) - s).abs() < 1e-15, || format!("P_{i}(-1)"))?;
    }
    Ok(())
}

/// `G_ij = int P_j' P_i + P_j(-1) P_i(-1)` and `H_j = 1/(2j+1)` against
/// quadrature of the definitions.
pub fn g_h_closed_forms(r: usize) -> Check {
    let g = g_matrix(r);
    let h = h_diag(r);
    let rule = gauss_rule(r + 2).map_err(|e| e.to_string())?;
    let deriv = |j: usize, x: f64| dgtime::basis::legendre_with_derivative(j, x).1;
    for i in 0..r {
        for j in 0..r {
            let integral: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * deriv(j, x) * legendre_eval(i, x)).sum();
            let def = integral + legendre_eval(j, -1.0) * legendre_eval(i, -1.0);
            ensure((g[i][j] - def).abs() <= 1e-12, || format!("G[{i}][{j}] = {} vs {def}", g[i][j]))?;
            let mass: f64 = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * legendre_eval(i, x) * legendre_eval(j, x)).sum();
            let want = if i == j { h[j] } else { 0.0 };
            ensure((0.5 * mass - want).abs() <= 1e-12, || format!("H[{i}][{j}]"))?;
        }
    }
    Ok(())
}

pub fn radau_residuals(r: usize) -> Check {
    let pts = radau_abscissas(r).map_err(|e| e.to_string())?;
    ensure(pts.len() == r && pts[r - 1] == 1.0, || format!("r={r}: {pts:?}"))?;
    for &x in &pts {
        let res = legendre_eval(r, x) - legendre_eval(r - 1, x);
        ensure(res.abs() <= 1e-12, || format!("r={r}: residual {res:e} at {x}"))?;
    }
    ensure(pts.windows(2).all(|w| w[0] < w[1]) && pts[0] > -1.0, || format!("r={r}: not increasing in (-1, 1]"))
}

fn poly(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * t + x)
}

fn dpoly(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, &x)| acc * t + i as f64 * x)
}

/// With `A = 0` and `f = u'` for a polynomial `u` of degree `<= r - 1`, the DG
/// solution is `u`.
pub fn degree_exactness(r: usize, coeffs: &[f64], n: usize) -> Check {
    let c: Vec<f64> = coeffs[..r].to_vec();
    let cf = c.clone();
    let problem = LinearProblem::new(LinearOperator::Scalar(0.0), Forcing::from_fn(move |t, out| out[0] = dpoly(&cf, t)), vec![c[0]], 1.5)
        .map_err(|e| e.to_string())?;
    let ws = LegendreWorkspace::new(r).map_err(|e| e.to_string())?;
    let sol = dg_solve(&problem, &TimeMesh::uniform(1.5, n).unwrap(), r, &ws).map_err(|e| e.to_string())?;
    let scale = 1.0 + c.iter().map(|x| x.abs()).sum::<f64>() * 2.0f64.powi(r as i32);
    let mut out = [0.0];
    for m in 1..=n {
        let (a, b) = sol.mesh().interval(m).unwrap();
        for s in 0..50 {
            let tau = -1.0 + 2.0 * s as f64 / 49.0;
            sol.eval_reference(m, tau, &mut out).unwrap();
            let t = 0.5 * ((1.0 - tau) * a + (1.0 + tau) * b);
            let want = poly(&c, t);
            ensure((out[0] - want).abs() <= 1e-11 * scale, || format!("r={r} t={t}: {} vs {want}", out[0]))?;
        }
    }
    Ok(())
}

/// For `r = 1`, `(I + k A) U^n = U^{n-1} + int_{I_n} f`.
pub fn implicit_euler(diag: &[f64], off: &[f64], u0: &[f64], n: usize) -> Check {
    let m = diag.len();
    // diagonal dominance keeps the random operator SPD
    let d: Vec<f64> = (0..m).map(|i| diag[i] + off.get(i).map_or(0.0, |x| x.abs()) + if i > 0 { off[i - 1].abs() } else { 0.0 }).collect();
    let op = LinearOperator::Tridiagonal(Tridiagonal::new(off.to_vec(), d.clone(), off.to_vec()).unwrap());
    let problem = LinearProblem::new(op.clone(), Forcing::from_fn(|t, out| out.fill(1.0 + t * t * t)), u0.to_vec(), 1.0).unwrap();
    let ws = LegendreWorkspace::new(1).unwrap();
    let mesh = TimeMesh::uniform(1.0, n).unwrap();
    let sol = dg_solve(&problem, &mesh, 1, &ws).map_err(|e| e.to_string())?;
    let k = 1.0 / n as f64;
    let mut u = u0.to_vec();
    for step in 1..=n {
        let (a, b) = mesh.interval(step).unwrap();
        // cubic forcing, integrated exactly by the default quadrature
        let int_f = (b - a) + (b.powi(4) - a.powi(4)) / 4.0;
        // solve (I + kA) x = u + int_f by Thomas on the tridiagonal
        let rhs: Vec<f64> = u.iter().map(|x| x + int_f).collect();
        let lower: Vec<f64> = off.iter().map(|x| k * x).collect();
        let mut dd: Vec<f64> = d.iter().map(|x| 1.0 + k * x).collect();
        let mut rr = rhs;
        for i in 1..m {
            let w = lower[i - 1] / dd[i - 1];
            dd[i] -= w * lower[i - 1];
            rr[i] -= w * rr[i - 1];
        }
        let mut x = vec![0.0; m];
        x[m - 1] = rr[m - 1] / dd[m - 1];
        for i in (0..m - 1).rev() {
            x[i] = (rr[i] - lower[i] * x[i + 1]) / dd[i];
        }
        u = x;
        let got = sol.left_limit(step).unwrap();
        let scale = 1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max);
        for (p, q) in got.iter().zip(&u) {
            ensure((p - q).abs() <= 1e-12 * scale, || format!("step {step}: {p} vs {q}"))?;
        }
    }
    Ok(())
}

/// Random scalar problem solved with dG(r-1).
pub fn scalar_solution(r: usize, lambda: f64, omega: f64, n: usize) -> DgSolution {
    let problem =
        LinearProblem::new(LinearOperator::Scalar(lambda), Forcing::from_fn(move |t, out| out[0] = (omega * t).cos()), vec![1.0], 2.0)
            .unwrap();
    let ws = LegendreWorkspace::new(r).unwrap();
    dg_solve(&problem, &TimeMesh::uniform(2.0, n).unwrap(), r, &ws).unwrap()
}

/// `U*` is continuous, matches `U^n_-` at nodes and `u0` at 0, and
/// `U - U* = (-1)^r/2 [U]^{n-1} (p_nr - p_{n,r-1})`.
pub fn reconstruction_identity(sol: &DgSolution) -> Check {
    let rec = reconstruct(sol).map_err(|e| e.to_string())?;
    let (r, nsteps) = (sol.r(), sol.mesh().len());
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let mut pj = vec![0.0; r + 1];
    let (mut u, mut us, mut left) = ([0.0], [0.0], [0.0]);
    rec.eval_reference(1, -1.0, &mut us).unwrap();
    ensure((us[0] - sol.u0()[0]).abs() <= 1e-12, || "U*(0) != u0".into())?;
    for n in 1..=nsteps {
        let jump = sol.jump(n).unwrap()[0];
        rec.eval_reference(n, 1.0, &mut left).unwrap();
        let ln = sol.left_limit(n).unwrap()[0];
        ensure((left[0] - ln).abs() <= 1e-12 * (1.0 + ln.abs()), || format!("U*(t_{n}) != U^{n}_-"))?;
        if n < nsteps {
            rec.eval_reference(n + 1, -1.0, &mut us).unwrap();
            ensure((us[0] - left[0]).abs() <= 1e-11 * (1.0 + left[0].abs()), || format!("U* jumps at t_{n}"))?;
        }
        for s in 0..50 {
            let tau = -1.0 + 2.0 * s as f64 / 49.0;
            sol.eval_reference(n, tau, &mut u).unwrap();
            rec.eval_reference(n, tau, &mut us).unwrap();
            legendre_values(tau, &mut pj);
            let want = 0.5 * sign * jump * (pj[r] - pj[r - 1]);
            ensure((u[0] - us[0] - want).abs() <= 1e-11 * (1.0 + u[0].abs()), || format!("identity fails on I_{n} at tau={tau}"))?;
        }
    }
    Ok(())
}

/// `Pi~ v` interpolates `v` at right nodes and reproduces polynomials of
/// degree `<= r - 1`.
pub fn projector(r: usize, coeffs: &[f64], n: usize) -> Check {
    let ws = LegendreWorkspace::new(r).unwrap();
    let mesh = TimeMesh::uniform(1.0, n).unwrap();
    let smooth = |t: f64, out: &mut [f64]| out[0] = (2.0 * t).exp() * (5.0 * t).sin();
    let p = pi_tilde_project(smooth, 1, &mesh, r, &ws).map_err(|e| e.to_string())?;
    for m in 1..=n {
        let want = {
            let mut o = [0.0];
            smooth(mesh.node(m), &mut o);
            o[0]
        };
        let got = p.left_limit(m).unwrap()[0];
        ensure((got - want).abs() <= 1e-12 * (1.0 + want.abs()), || format!("Pi~ v(t_{m}) = {got} vs {want}"))?;
    }
    let c: Vec<f64> = coeffs[..r].to_vec();
    let cp = c.clone();
    let q = pi_tilde_project(move |t, out: &mut [f64]| out[0] = poly(&cp, t), 1, &mesh, r, &ws).map_err(|e| e.to_string())?;
    let scale = 1.0 + c.iter().map(|x| x.abs()).sum::<f64>();
    let mut out = [0.0];
    for m in 1..=n {
        let (a, b) = mesh.interval(m).unwrap();
        for s in 0..20 {
            let tau = -1.0 + 2.0 * s as f64 / 19.0;
            q.eval_reference(m, tau, &mut out).unwrap();
            let want = poly(&c, 0.5 * ((1.0 - tau) * a + (1.0 + tau) * b));
            ensure((out[0] - want).abs() <= 1e-12 * scale, || format!("polynomial not reproduced on I_{m}"))?;
        }
    }
    Ok(())
}

fn ode_solution(r: usize, n: usize) -> DgSolution {
    let ws = LegendreWorkspace::new(r).unwrap();
    dg_solve(&ode_problem(), &TimeMesh::uniform(2.0, n).unwrap(), r, &ws).unwrap()
}

fn interval_max_error(sol: &DgSolution, n: usize) -> f64 {
    let (a, b) = sol.mesh().interval(n).unwrap();
    let mut out = [0.0];
    (0..50)
        .map(|s| {
            let tau = -1.0 + 2.0 * s as f64 / 49.0;
            sol.eval_reference(n, tau, &mut out).unwrap();
            (out[0] - ode_exact(0.5 * ((1.0 - tau) * a + (1.0 + tau) * b))).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest `|indicator_n - max_{I_n} |U - u||` relative to the global error,
/// for the ODE with `r = 2`, `N = 64`.
pub fn indicator_agreement() -> Result<f64, String> {
    let sol = ode_solution(2, 64);
    let errs: Vec<f64> = (1..=64).map(|n| interval_max_error(&sol, n)).collect();
    let global = errs.iter().copied().fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for n in 1..=64 {
        let ind = jump_indicator(&sol, n, StateNorm::Euclidean).map_err(|e| e.to_string())?;
        worst = worst.max((ind - errs[n - 1]).abs() / global);
    }
    Ok(worst)
}

/// Observed rates of the ODE error sampled only at the Radau points.
pub fn radau_rates(r: usize, ns: &[usize]) -> Vec<f64> {
    let pts = radau_abscissas(r).unwrap();
    let errs: Vec<f64> = ns
        .iter()
        .map(|&n| {
            let sol = ode_solution(r, n);
            let mut out = [0.0];
            let mut worst: f64 = 0.0;
            for m in 1..=n {
                let (a, b) = sol.mesh().interval(m).unwrap();
                for &tau in &pts {
                    sol.eval_reference(m, tau, &mut out).unwrap();
                    worst = worst.max((out[0] - ode_exact(0.5 * ((1.0 - tau) * a + (1.0 + tau) * b))).abs());
                }
            }
            worst
        })
        .collect();
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Largest ratio `deviation / max error on I_n` over all intervals of the
/// ODE with `r = 4`, `N = 32`.
pub fn profile_dominance() -> Result<f64, String> {
    let (r, n) = (4, 32);
    let sol = ode_solution(r, n);
    let ws = LegendreWorkspace::new(r).unwrap();
    let mut worst: f64 = 0.0;
    for m in 1..=n {
        let (_, dev) = error_profile_deviation(&sol, |t, out: &mut [f64]| out[0] = ode_exact(t), m, &ws, StateNorm::Euclidean, 50)
            .map_err(|e| e.to_string())?;
        worst = worst.max(dev / interval_max_error(&sol, m));
    }
    Ok(worst)
}

/// Worst error of the contour rule on `1/(z+a)`, `1/(z+a)^2` and `1/z^2`
/// over `[t0, 2]`, relative to `max(|u|, 1e-3)`.
pub fn bromwich_oracles(a: f64, t0: f64) -> Result<f64, String> {
    let rule = ContourRule::for_window(t0, 2.0).map_err(|e| e.to_string())?;
    let cases: [(Box<dyn Fn(Complex64) -> Complex64>, Box<dyn Fn(f64) -> f64>); 3] = [
        (Box::new(move |z| 1.0 / (z + a)), Box::new(move |t| (-a * t).exp())),
        (Box::new(move |z| 1.0 / ((z + a) * (z + a))), Box::new(move |t| t * (-a * t).exp())),
        (Box::new(|z| 1.0 / (z * z)), Box::new(|t| t)),
    ];
    let mut worst: f64 = 0.0;
    for (uhat, exact) in &cases {
        for i in 0..=20 {
            let t = t0 * (2.0 / t0).powf(i as f64 / 20.0);
            let v = bromwich_invert(|z| Ok(uhat(z)), t, &rule).map_err(|e| e.to_string())?;
            let e = exact(t);
            worst = worst.max((v - e).abs() / e.abs().max(1e-3));
        }
    }
    Ok(worst)
}
