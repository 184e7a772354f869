//! Convergence experiments: sampled maximum errors (optionally weighted or
//! restricted to a window), observed rates and table output.

mod table;

pub use table::{observed_rates, ConvergenceTable, TableRow, CSV_HEADER};

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::LegendreWorkspace;
use crate::dg::{dg_solve, DgSolution, LinearProblem, StateNorm};
use crate::error::{invalid, DgError, Result};
use crate::mesh::TimeMesh;
use crate::models::{heat1d_problem, heat2d_problem, ode_problem, Heat1dConfig, Heat2dConfig, Source};
use crate::postprocess::reconstruct;
use crate::reference::{
    contour_self_check, heat1d_reference, heat2d_reference, ode_exact, richardson_solution, ContourRule, LaplaceReference,
};

pub const DEFAULT_SAMPLES: usize = 50;

/// Sampling options for [`max_error_sampled`] and [`max_error_nodal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOptions {
    pub samples: usize,
    /// Exponent `alpha` of the weight `min(t^alpha, 1)`.
    pub weight: Option<f64>,
    /// Whole closed intervals meeting `[a, b]` are sampled; nodes must lie in
    /// it.
    pub window: Option<(f64, f64)>,
    /// Leave out the first interval.
    pub skip_first: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { samples: DEFAULT_SAMPLES, weight: None, window: None, skip_first: false }
    }
}

impl SampleOptions {
    fn weight_at(&self, t: f64) -> f64 {
        match self.weight {
            Some(a) => t.powf(a).min(1.0),
            None => 1.0,
        }
    }

    fn in_window(&self, t: f64) -> bool {
        self.meets_window(t, t)
    }

    fn meets_window(&self, lo: f64, hi: f64) -> bool {
        match self.window {
            Some((a, b)) => {
                let slack = 1e-12 * b.abs().max(1.0);
                hi >= a - slack && lo <= b + slack
            }
            None => true,
        }
    }

    /// Whether interval `n` with end points `(a, b)` is sampled.
    fn uses_interval(&self, n: usize, (a, b): (f64, f64)) -> bool {
        !(self.skip_first && n == 1) && self.meets_window(a, b)
    }
}

/// Equispaced reference coordinates `-1 + 2i/(s-1)`, `i = 0..s`; the left end
/// of each interval is taken as the right limit there.
pub fn sample_taus(samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![1.0];
    }
    (0..samples).map(|i| -1.0 + 2.0 * i as f64 / (samples - 1) as f64).collect()
}

/// Times at which the sampled error needs a reference value (positive weight,
/// inside the window).
pub fn sample_times(mesh: &TimeMesh, opts: &SampleOptions) -> Vec<f64> {
    let taus = sample_taus(opts.samples);
    let mut out = Vec::new();
    for n in 1..=mesh.len() {
        let (a, b) = mesh.interval(n).expect("n in range");
        if !opts.uses_interval(n, (a, b)) {
            continue;
        }
        for &tau in &taus {
            let t = 0.5 * ((1.0 - tau) * a + (1.0 + tau) * b);
            if opts.weight_at(t) > 0.0 {
                out.push(t);
            }
        }
        let t = b;
        if opts.in_window(t) && opts.weight_at(t) > 0.0 {
            out.push(t);
        }
    }
    out
}

/// Maximum of `w(t) ||approx(t) - reference(t)||` over `samples` points per
/// interval.
pub fn max_error_sampled<F>(approx: &DgSolution, mut reference: F, norm: StateNorm, opts: &SampleOptions) -> Result<f64>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if opts.samples == 0 {
        return invalid("need at least one sample per interval");
    }
    let dim = approx.dim();
    let taus = sample_taus(opts.samples);
    let (mut uh, mut u) = (vec![0.0; dim], vec![0.0; dim]);
    let mut worst: f64 = 0.0;
    let mut seen = false;
    let mesh = approx.mesh();
    for n in 1..=mesh.len() {
        let (a, b) = mesh.interval(n)?;
        if !opts.uses_interval(n, (a, b)) {
            continue;
        }
        for &tau in &taus {
            let t = 0.5 * ((1.0 - tau) * a + (1.0 + tau) * b);
            seen = true;
            let w = opts.weight_at(t);
            if w == 0.0 {
                continue;
            }
            approx.eval_reference(n, tau, &mut uh)?;
            reference(t, &mut u)?;
            worst = worst.max(w * norm.distance(&uh, &u));
        }
    }
    if !seen {
        let (a, b) = opts.window.unwrap_or((mesh.node(0), mesh.final_time()));
        return Err(DgError::EmptyWindow(a, b));
    }
    Ok(worst)
}

/// Maximum of `w(t_n) ||U^n_- - u(t_n)||` over the nodes `t_1..t_N`.
pub fn max_error_nodal<F>(sol: &DgSolution, mut reference: F, norm: StateNorm, opts: &SampleOptions) -> Result<f64>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let mut u = vec![0.0; sol.dim()];
    let mut worst: f64 = 0.0;
    let mut seen = false;
    let mesh = sol.mesh();
    for n in 1..=mesh.len() {
        let t = mesh.node(n);
        if !opts.in_window(t) {
            continue;
        }
        seen = true;
        let w = opts.weight_at(t);
        if w == 0.0 {
            continue;
        }
        reference(t, &mut u)?;
        worst = worst.max(w * norm.distance(&sol.left_limit(n)?, &u));
    }
    if !seen {
        let (a, b) = opts.window.unwrap_or((mesh.node(0), mesh.final_time()));
        return Err(DgError::EmptyWindow(a, b));
    }
    Ok(worst)
}

/// The three model experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Ode,
    Heat1d,
    Heat2d,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Ode => "ode",
            Self::Heat1d => "heat1d",
            Self::Heat2d => "heat2d",
        }
    }
}

impl FromStr for Experiment {
    type Err = DgError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ode" => Ok(Self::Ode),
            "heat1d" => Ok(Self::Heat1d),
            "heat2d" => Ok(Self::Heat2d),
            other => Err(DgError::UnknownExperiment(other.to_string())),
        }
    }
}

/// Everything that defines one convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub r: usize,
    pub ns: Vec<usize>,
    /// Spatial intervals per direction; ignored for the ODE.
    pub p: usize,
    /// Weight exponent for the `U` column; `U*` uses `alpha + 1` and the
    /// nodal column `alpha + r - 1`.
    pub weighted: Option<f64>,
    /// Restrict errors to `[T/4, T]`.
    pub cutoff: bool,
    pub samples: usize,
    /// Drop the source term (`f = 0`).
    pub homogeneous: bool,
    /// Fixed contour size `K` instead of the automatic choice.
    pub half_nodes: Option<usize>,
}

impl ExperimentSpec {
    /// Defaults matching the standard tables for each experiment.
    pub fn new(experiment: Experiment) -> Self {
        let (r, ns, p) = match experiment {
            Experiment::Ode => (4, vec![4, 8, 16, 32, 64, 128], 0),
            Experiment::Heat1d => (3, vec![8, 16, 32, 64, 128], 500),
            Experiment::Heat2d => (3, vec![8, 16, 32, 64, 128], 50),
        };
        Self { experiment, r, ns, p, weighted: None, cutoff: false, samples: DEFAULT_SAMPLES, homogeneous: false, half_nodes: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return invalid("r must be >= 1");
        }
        if self.ns.is_empty() || self.ns.contains(&0) {
            return invalid("need a non-empty list of positive N");
        }
        if self.samples == 0 {
            return invalid("need at least one sample per interval");
        }
        if self.experiment != Experiment::Ode && self.p < 2 {
            return invalid("need P >= 2");
        }
        if let Some(a) = self.weighted {
            if !(a >= 0.0) {
                return invalid(format!("weight exponent must be non-negative, got {a}"));
            }
        }
        table::check_doubling(&self.ns)
    }

    fn final_time(&self) -> f64 {
        2.0
    }

    /// `(U, U*, nodal)` sampling options. The reconstruction error leaves out
    /// the first interval, where `U*` carries the initial layer.
    pub fn column_options(&self) -> [SampleOptions; 3] {
        let window = self.cutoff.then(|| (self.final_time() / 4.0, self.final_time()));
        let weights = match self.weighted {
            Some(a) => [Some(a), Some(a + 1.0), Some(a + self.r as f64 - 1.0)],
            None => [None; 3],
        };
        let [u, star, nodal] = weights.map(|weight| SampleOptions { samples: self.samples, weight, window, skip_first: false });
        [u, SampleOptions { skip_first: true, ..star }, nodal]
    }

    fn source(&self) -> Source {
        if self.homogeneous {
            Source::Zero
        } else {
            Source::RampDecay
        }
    }

    fn heat1d_config(&self, p: usize) -> Heat1dConfig {
        Heat1dConfig::standard(p).with_source(self.source())
    }

    fn heat2d_config(&self) -> Heat2dConfig {
        Heat2dConfig { source: self.source(), ..Heat2dConfig::standard(self.p, self.p) }
    }
}

/// Smallest positive time any column will compare against the reference.
fn reference_window(spec: &ExperimentSpec) -> Result<(f64, f64)> {
    let t_end = spec.final_time();
    let mut t_min = f64::INFINITY;
    for &n in &spec.ns {
        let mesh = TimeMesh::uniform(t_end, n)?;
        for opts in spec.column_options() {
            for t in sample_times(&mesh, &opts) {
                if t > 0.0 {
                    t_min = t_min.min(t);
                }
            }
        }
    }
    if !t_min.is_finite() {
        return Err(DgError::EmptyWindow(0.0, t_end));
    }
    Ok((t_min, t_end))
}

/// Reference used for the errors of one experiment.
#[derive(Debug, Clone)]
pub enum Reference {
    Ode,
    Laplace(LaplaceReference),
}

impl Reference {
    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Ode => {
                out[0] = ode_exact(t);
                Ok(())
            }
            Self::Laplace(r) => r.eval_into(t, out),
        }
    }
}

/// Contour used by a Laplace reference, with the `K` vs `K + 8` check.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourReport {
    pub half_nodes: usize,
    pub window: (f64, f64),
    pub self_check: Option<f64>,
}

/// A table together with the contour diagnostics.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub table: ConvergenceTable,
    pub contour: Option<ContourReport>,
}

fn build_rule(spec: &ExperimentSpec, window: (f64, f64)) -> Result<ContourRule> {
    match spec.half_nodes {
        Some(k) => ContourRule::new(window.0, window.1, k),
        None => ContourRule::for_window(window.0, window.1),
    }
}

/// Builds the reference for `spec` (and its contour rule).
pub fn build_reference(spec: &ExperimentSpec, window: (f64, f64)) -> Result<Reference> {
    match spec.experiment {
        Experiment::Ode => Ok(Reference::Ode),
        Experiment::Heat1d => Ok(Reference::Laplace(heat1d_reference(&spec.heat1d_config(spec.p), build_rule(spec, window)?)?)),
        Experiment::Heat2d => {
            let cfg = spec.heat2d_config();
            let problem = heat2d_problem(&cfg)?;
            Ok(Reference::Laplace(heat2d_reference(&problem, cfg.source, build_rule(spec, window)?)?))
        }
    }
}

/// Problem whose DG solution is compared with the reference; for heat1d the
/// Richardson pair `(P, 2P)` is returned.
fn problems(spec: &ExperimentSpec) -> Result<(LinearProblem, Option<LinearProblem>)> {
    match spec.experiment {
        Experiment::Ode => {
            let mut p = ode_problem();
            if spec.homogeneous {
                p.forcing = crate::dg::Forcing::Zero;
            }
            Ok((p, None))
        }
        Experiment::Heat1d => Ok((heat1d_problem(&spec.heat1d_config(spec.p))?, Some(heat1d_problem(&spec.heat1d_config(2 * spec.p))?))),
        Experiment::Heat2d => Ok((heat2d_problem(&spec.heat2d_config())?, None)),
    }
}

/// DG solution for one `N` (Richardson-extrapolated for heat1d).
pub fn solve_row(spec: &ExperimentSpec, n: usize) -> Result<DgSolution> {
    let (coarse, fine) = problems(spec)?;
    let ws = LegendreWorkspace::new(spec.r)?;
    let mesh = TimeMesh::uniform(spec.final_time(), n)?;
    match fine {
        None => dg_solve(&coarse, &mesh, spec.r, &ws),
        Some(fine) => {
            let (c, f) = rayon::join(|| dg_solve(&coarse, &mesh, spec.r, &ws), || dg_solve(&fine, &mesh, spec.r, &ws));
            richardson_solution(&c?, &f?)
        }
    }
}

fn norm_of(spec: &ExperimentSpec) -> Result<(StateNorm, &'static str)> {
    Ok(match spec.experiment {
        Experiment::Ode => (StateNorm::Euclidean, "abs"),
        Experiment::Heat1d => (heat1d_problem(&spec.heat1d_config(spec.p))?.norm, "h-weighted l2"),
        Experiment::Heat2d => (heat2d_problem(&spec.heat2d_config())?.norm, "hx*hy-weighted l2"),
    })
}

/// Runs the experiment; rows are computed in parallel and merged in order.
/// With `check_contour`, the Laplace reference is recomputed with `K + 8`
/// nodes at every time used and the largest relative change reported.
pub fn run_experiment_with(spec: &ExperimentSpec, check_contour: bool) -> Result<ExperimentReport> {
    spec.validate()?;
    let window = reference_window(spec)?;
    let reference = build_reference(spec, window)?;
    let (norm, norm_name) = norm_of(spec)?;
    let [opt_u, opt_star, opt_nodal] = spec.column_options();
    let rows = spec
        .ns
        .par_iter()
        .map(|&n| {
            let sol = solve_row(spec, n)?;
            let rec = reconstruct(&sol)?;
            let eval = |t: f64, out: &mut [f64]| reference.eval_into(t, out);
            let err_u = max_error_sampled(&sol, eval, norm, &opt_u)?;
            let err_ustar = max_error_sampled(rec.as_piecewise(), eval, norm, &opt_star)?;
            let err_nodal = max_error_nodal(&sol, eval, norm, &opt_nodal)?;
            Ok(TableRow {
                n,
                p: (spec.experiment != Experiment::Ode).then_some(spec.p),
                err_u,
                err_ustar,
                err_nodal,
                rate_u: None,
                rate_ustar: None,
                rate_nodal: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = spec.weighted.map(|_| [0, 1, 2].map(|i| spec.column_options()[i].weight.unwrap_or(0.0)));
    let table = ConvergenceTable::from_rows(spec.experiment.name(), spec.r, norm_name, weights, opt_u.window, rows)?;
    let contour = match &reference {
        Reference::Ode => None,
        Reference::Laplace(lr) => {
            let self_check = if check_contour { Some(contour_change(spec, window, lr.rule().half_nodes())?) } else { None };
            Some(ContourReport { half_nodes: lr.rule().half_nodes(), window, self_check })
        }
    };
    Ok(ExperimentReport { table, contour })
}

/// Table only, without the contour check.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ConvergenceTable> {
    Ok(run_experiment_with(spec, false)?.table)
}

/// Relative change of every reference value used by `spec` between `K` and
/// `K + 8` contour nodes.
pub fn contour_change(spec: &ExperimentSpec, window: (f64, f64), half_nodes: usize) -> Result<f64> {
    let mut times = Vec::new();
    for &n in &spec.ns {
        let mesh = TimeMesh::uniform(spec.final_time(), n)?;
        for opts in spec.column_options() {
            times.extend(sample_times(&mesh, &opts).into_iter().filter(|&t| t > 0.0));
        }
    }
    times.sort_by(f64::total_cmp);
    times.dedup();
    let builder = |rule: ContourRule| -> Result<LaplaceReference> {
        match spec.experiment {
            Experiment::Ode => invalid("the ODE reference is closed form"),
            Experiment::Heat1d => heat1d_reference(&spec.heat1d_config(spec.p), rule),
            Experiment::Heat2d => {
                let cfg = spec.heat2d_config();
                heat2d_reference(&heat2d_problem(&cfg)?, cfg.source, rule)
            }
        }
    };
    contour_self_check(builder, window.0, window.1, half_nodes, &times)
}

/// CSV of `(t, U - u, U - U*)` at the sample points of every interval, for
/// each `N`. Scalar problems report signed differences, systems report norms.
pub fn profile_csv(spec: &ExperimentSpec) -> Result<String> {
    spec.validate()?;
    let t_end = spec.final_time();
    let smallest = spec.ns.iter().max().copied().unwrap_or(1);
    let first = sample_taus(spec.samples).get(1).copied().unwrap_or(1.0);
    let window = (t_end / smallest as f64 * 0.5 * (1.0 + first), t_end);
    let reference = build_reference(spec, window)?;
    let (norm, _) = norm_of(spec)?;
    let scalar = spec.experiment == Experiment::Ode;
    let mut out = String::from(if scalar { "N,n,t,U_minus_u,U_minus_Ustar\n" } else { "N,n,t,norm_U_minus_u,norm_U_minus_Ustar\n" });
    let taus = sample_taus(spec.samples);
    for &n_steps in &spec.ns {
        let sol = solve_row(spec, n_steps)?;
        let rec = reconstruct(&sol)?;
        let dim = sol.dim();
        let (mut uh, mut us, mut u) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
        for n in 1..=sol.mesh().len() {
            let (a, b) = sol.mesh().interval(n)?;
            for &tau in &taus {
                let t = 0.5 * ((1.0 - tau) * a + (1.0 + tau) * b);
                sol.eval_reference(n, tau, &mut uh)?;
                rec.eval_reference(n, tau, &mut us)?;
                reference.eval_into(t, &mut u)?;
                let (du, ds) = if scalar { (uh[0] - u[0], uh[0] - us[0]) } else { (norm.distance(&uh, &u), norm.distance(&uh, &us)) };
                let _ = writeln!(out, "{n_steps},{n},{t:e},{du:e},{ds:e}");
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_error_against_itself() {
        use crate::dg::Forcing;
        use crate::system::LinearOperator;
        let p = LinearProblem::new(LinearOperator::Scalar(0.0), Forcing::Zero, vec![1.5], 2.0).unwrap();
        let ws = LegendreWorkspace::new(2).unwrap();
        let sol = dg_solve(&p, &TimeMesh::uniform(2.0, 4).unwrap(), 2, &ws).unwrap();
        let constant = |_t: f64, out: &mut [f64]| {
            out[0] = 1.5;
            Ok(())
        };
        let opts = SampleOptions::default();
        assert!(max_error_sampled(&sol, constant, StateNorm::Euclidean, &opts).unwrap() < 1e-15);
        assert!(max_error_nodal(&sol, constant, StateNorm::Euclidean, &opts).unwrap() < 1e-15);
    }

    #[test]
    fn zero_weight_exponent_is_unweighted() {
        let p = ode_problem();
        let ws = LegendreWorkspace::new(3).unwrap();
        let sol = dg_solve(&p, &TimeMesh::uniform(2.0, 8).unwrap(), 3, &ws).unwrap();
        let exact = |t: f64, out: &mut [f64]| {
            out[0] = ode_exact(t);
            Ok(())
        };
        let plain = max_error_sampled(&sol, exact, StateNorm::Euclidean, &SampleOptions::default()).unwrap();
        let zero = SampleOptions { weight: Some(0.0), ..Default::default() };
        assert_eq!(max_error_sampled(&sol, exact, StateNorm::Euclidean, &zero).unwrap(), plain);
        let window = SampleOptions { window: Some((3.0, 4.0)), ..Default::default() };
        assert!(matches!(max_error_sampled(&sol, exact, StateNorm::Euclidean, &window), Err(DgError::EmptyWindow(..))));
    }

    #[test]
    fn ode_row_matches_known_value() {
        let spec = ExperimentSpec { ns: vec![16], ..ExperimentSpec::new(Experiment::Ode) };
        let t = run_experiment(&spec).unwrap();
        assert!((t.rows[0].err_u / 8.85e-6 - 1.0).abs() < 0.05);
    }

    #[test]
    fn spec_validation() {
        assert!("heat3d".parse::<Experiment>().is_err());
        assert_eq!("heat2d".parse::<Experiment>().unwrap(), Experiment::Heat2d);
        let bad = ExperimentSpec { ns: vec![8, 24], ..ExperimentSpec::new(Experiment::Ode) };
        assert!(run_experiment(&bad).is_err());
        let w = ExperimentSpec { weighted: Some(1.75), ..ExperimentSpec::new(Experiment::Heat1d) };
        let opts = w.column_options();
        assert_eq!(opts.map(|o| o.weight.unwrap()), [1.75, 2.75, 3.75]);
    }

    #[test]
    fn sample_points() {
        let taus = sample_taus(50);
        assert_eq!(taus.len(), 50);
        assert_eq!(taus[0], -1.0);
        assert_eq!(taus[49], 1.0);
        let mesh = TimeMesh::uniform(2.0, 4).unwrap();
        let cut = SampleOptions { window: Some((0.6, 2.0)), ..Default::default() };
        assert!(sample_times(&mesh, &cut).iter().all(|&t| t >= 0.5 - 1e-12));
    }
}
