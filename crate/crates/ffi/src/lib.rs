//! C ABI over `dgtime`.
//!
//! Objects are opaque handles. Constructors write them through an
//! out-pointer and each kind has a matching `*_free`. Every
//! fallible call returns a [`DgtStatus`]; on failure the message is
//! available from [`dgt_last_error_message`] on the same thread.
//!
//! The forcing callback of a problem is invoked synchronously from the
//! thread that calls [`dgt_solve_uniform`] or [`dgt_solve_mesh`].

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use dgtime::basis::LegendreWorkspace;
use dgtime::bench::{run_experiment, Experiment, ExperimentSpec};
use dgtime::models::{heat1d_problem, heat2d_problem, ode_problem, Heat1dConfig, Heat2dConfig, Source};
use dgtime::system::{CsrMatrix, LinearOperator, Tridiagonal};
use dgtime::{dg_solve, jump_indicator, reconstruct, DgError, Forcing, LinearProblem, StateNorm, TimeMesh};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DgtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    IndexOutOfRange = 4,
    TimeOutOfRange = 5,
    SingularMatrix = 6,
    ForcingFailed = 7,
    NoConvergence = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Linear problem `u' + A u = f`, `u(0) = u0` on `(0, T]`.
pub struct DgtProblem(LinearProblem);

/// Piecewise-polynomial DG solution.
pub struct DgtSolution(dgtime::DgSolution);

/// Continuous reconstruction of a DG solution.
pub struct DgtReconstruction(dgtime::Reconstruction);

/// Writes `f(t)` into `out[0..dim]`.
pub type DgtForcingFn = Option<unsafe extern "C" fn(t: f64, out: *mut f64, dim: usize, user_data: *mut c_void)>;

/// Settings for [`dgt_run_experiment`]; start from [`dgt_experiment_defaults`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DgtExperimentOptions {
    pub r: usize,
    /// Spatial intervals per direction (ignored for the ODE).
    pub p: usize,
    pub samples: usize,
    pub cutoff: bool,
    pub homogeneous: bool,
    pub weighted: bool,
    /// Weight exponent for the `U` column when `weighted` is set.
    pub alpha: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &DgError) -> DgtStatus {
    match e {
        DgError::InvalidArgument(_) | DgError::UnknownExperiment(_) | DgError::NonDoublingSequence(_) | DgError::EmptyWindow(..) => {
            DgtStatus::InvalidArgument
        }
        DgError::DimensionMismatch { .. } => DgtStatus::DimensionMismatch,
        DgError::IndexOutOfRange { .. } => DgtStatus::IndexOutOfRange,
        DgError::TimeOutOfRange { .. } => DgtStatus::TimeOutOfRange,
        DgError::SingularMatrix { .. } => DgtStatus::SingularMatrix,
        DgError::Forcing { .. } => DgtStatus::ForcingFailed,
        DgError::RootFinding { .. } | DgError::ContourAccuracy { .. } => DgtStatus::NoConvergence,
    }
}

struct Fail(DgtStatus, String);

impl From<DgError> for Fail {
    fn from(e: DgError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(DgtStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> DgtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DgtStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            DgtStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a>(p: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(null("output buffer"));
    }
    if len < need {
        return Err(Fail(DgtStatus::BufferTooSmall, format!("output buffer holds {len} values, need {need}")));
    }
    Ok(slice::from_raw_parts_mut(p, need))
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dgt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn dgt_status_string(status: DgtStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DgtStatus::Ok => c"ok",
        DgtStatus::NullPointer => c"null pointer",
        DgtStatus::InvalidArgument => c"invalid argument",
        DgtStatus::DimensionMismatch => c"dimension mismatch",
        DgtStatus::IndexOutOfRange => c"index out of range",
        DgtStatus::TimeOutOfRange => c"time out of range",
        DgtStatus::SingularMatrix => c"singular matrix",
        DgtStatus::ForcingFailed => c"forcing evaluation failed",
        DgtStatus::NoConvergence => c"no convergence",
        DgtStatus::BufferTooSmall => c"buffer too small",
        DgtStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

// ---- problems ----

/// Scalar problem `u' + a u = 0`, `u(0) = u0`.
///
/// # Safety
/// `out` must be null or a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_scalar(a: f64, u0: f64, final_time: f64, out: *mut *mut DgtProblem) -> DgtStatus {
    guard(|| {
        let p = LinearProblem::new(LinearOperator::Scalar(a), Forcing::Zero, vec![u0], final_time)?;
        write_handle(out, DgtProblem(p))
    })
}

/// Tridiagonal `A` of order `n`: `lower[i] = A[i+1][i]`, `upper[i] = A[i][i+1]`
/// (both of length `n - 1`).
///
/// # Safety
/// Array arguments must point to the stated number of values.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_tridiagonal(
    n: usize,
    lower: *const f64,
    diag: *const f64,
    upper: *const f64,
    u0: *const f64,
    final_time: f64,
    out: *mut *mut DgtProblem,
) -> DgtStatus {
    guard(|| {
        if n == 0 {
            return Err(Fail(DgtStatus::InvalidArgument, "order must be positive".into()));
        }
        let lower = slice_in(lower, n - 1, "lower")?.to_vec();
        let upper = slice_in(upper, n - 1, "upper")?.to_vec();
        let diag = slice_in(diag, n, "diag")?.to_vec();
        let u0 = slice_in(u0, n, "u0")?.to_vec();
        let op = LinearOperator::Tridiagonal(Tridiagonal::new(lower, diag, upper)?);
        let p = LinearProblem::new(op, Forcing::Zero, u0, final_time)?;
        write_handle(out, DgtProblem(p))
    })
}

/// Sparse `A` of order `n` in compressed-row form (`indptr` has `n + 1`
/// entries, `indices` and `values` have `indptr[n]`).
///
/// # Safety
/// Array arguments must point to the stated number of values.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_csr(
    n: usize,
    indptr: *const usize,
    indices: *const usize,
    values: *const f64,
    u0: *const f64,
    final_time: f64,
    out: *mut *mut DgtProblem,
) -> DgtStatus {
    guard(|| {
        if n == 0 {
            return Err(Fail(DgtStatus::InvalidArgument, "order must be positive".into()));
        }
        let indptr = slice_in(indptr, n + 1, "indptr")?;
        let nnz = indptr[n];
        if indptr[0] != 0 || indptr.windows(2).any(|w| w[1] < w[0]) {
            return Err(Fail(DgtStatus::InvalidArgument, "indptr must start at 0 and be non-decreasing".into()));
        }
        let indices = slice_in(indices, nnz, "indices")?;
        let values = slice_in(values, nnz, "values")?;
        let mut triplets = Vec::with_capacity(nnz);
        for i in 0..n {
            for k in indptr[i]..indptr[i + 1] {
                triplets.push((i, indices[k], values[k]));
            }
        }
        let op = LinearOperator::Sparse(CsrMatrix::from_triplets(n, &triplets)?);
        let p = LinearProblem::new(op, Forcing::Zero, slice_in(u0, n, "u0")?.to_vec(), final_time)?;
        write_handle(out, DgtProblem(p))
    })
}

/// The scalar model problem with its forcing.
///
/// # Safety
/// `out` must be null or a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_ode(out: *mut *mut DgtProblem) -> DgtStatus {
    guard(|| write_handle(out, DgtProblem(ode_problem())))
}

fn source(homogeneous: bool) -> Source {
    if homogeneous {
        Source::Zero
    } else {
        Source::RampDecay
    }
}

/// Method-of-lines 1D heat model with `p` intervals.
///
/// # Safety
/// `out` must be null or a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_heat1d(p: usize, homogeneous: bool, out: *mut *mut DgtProblem) -> DgtStatus {
    guard(|| {
        let prob = heat1d_problem(&Heat1dConfig::standard(p).with_source(source(homogeneous)))?;
        write_handle(out, DgtProblem(prob))
    })
}

/// 2D heat model on a `p x p` grid.
///
/// # Safety
/// `out` must be null or a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_heat2d(p: usize, homogeneous: bool, out: *mut *mut DgtProblem) -> DgtStatus {
    guard(|| {
        let cfg = Heat2dConfig { source: source(homogeneous), ..Heat2dConfig::standard(p, p) };
        write_handle(out, DgtProblem(heat2d_problem(&cfg)?))
    })
}

struct Callback {
    f: unsafe extern "C" fn(f64, *mut f64, usize, *mut c_void),
    user_data: *mut c_void,
}

// The callback only runs inside a solve on the caller's thread.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

impl Callback {
    fn call(&self, t: f64, out: &mut [f64]) {
        unsafe { (self.f)(t, out.as_mut_ptr(), out.len(), self.user_data) }
    }
}

/// Replaces the forcing with `callback`; a null callback sets `f = 0`.
/// `user_data` is passed through unchanged and must outlive the problem.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_set_forcing(problem: *mut DgtProblem, callback: DgtForcingFn, user_data: *mut c_void) -> DgtStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| null("problem"))?;
        p.0.forcing = match callback {
            None => Forcing::Zero,
            Some(f) => {
                let cb = Callback { f, user_data };
                Forcing::from_fn(move |t, out| cb.call(t, out))
            }
        };
        Ok(())
    })
}

/// State dimension, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_dim(problem: *const DgtProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.dim())
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgt_problem_free(problem: *mut DgtProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

// ---- solving ----

fn solve(p: &LinearProblem, mesh: &TimeMesh, r: usize) -> Result<DgtSolution, Fail> {
    let ws = LegendreWorkspace::new(r)?;
    Ok(DgtSolution(dg_solve(p, mesh, r, &ws)?))
}

/// dG(r-1) on `n_steps` equal steps over `(0, T]`.
///
/// # Safety
/// `problem` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_solve_uniform(problem: *const DgtProblem, r: usize, n_steps: usize, out: *mut *mut DgtSolution) -> DgtStatus {
    guard(|| {
        let p = get(problem, "problem")?;
        let mesh = TimeMesh::uniform(p.0.final_time, n_steps)?;
        write_handle(out, solve(&p.0, &mesh, r)?)
    })
}

/// dG(r-1) on the mesh `0 = nodes[0] < ... < nodes[n_nodes - 1]`.
///
/// # Safety
/// `problem` must be a live handle and `nodes` must hold `n_nodes` values.
#[no_mangle]
pub unsafe extern "C" fn dgt_solve_mesh(
    problem: *const DgtProblem,
    r: usize,
    nodes: *const f64,
    n_nodes: usize,
    out: *mut *mut DgtSolution,
) -> DgtStatus {
    guard(|| {
        let p = get(problem, "problem")?;
        let mesh = TimeMesh::from_nodes(slice_in(nodes, n_nodes, "nodes")?.to_vec())?;
        write_handle(out, solve(&p.0, &mesh, r)?)
    })
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_dim(solution: *const DgtSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.dim())
}

/// Number of time steps, or 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_steps(solution: *const DgtSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.0.mesh().len())
}

/// `U(t)`; at a node the left limit is returned.
///
/// # Safety
/// `solution` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_eval(solution: *const DgtSolution, t: f64, out: *mut f64, len: usize) -> DgtStatus {
    guard(|| {
        let s = get(solution, "solution")?;
        s.0.eval_into(t, slice_out(out, len, s.0.dim())?)?;
        Ok(())
    })
}

/// `U(t_n^-)` for `0 <= n <= N` (`n = 0` gives `u0`).
///
/// # Safety
/// `solution` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_left_limit(solution: *const DgtSolution, n: usize, out: *mut f64, len: usize) -> DgtStatus {
    guard(|| {
        let s = get(solution, "solution")?;
        let v = s.0.left_limit(n)?;
        slice_out(out, len, v.len())?.copy_from_slice(&v);
        Ok(())
    })
}

/// Jump `U(t_{n-1}^+) - U(t_{n-1}^-)` for `1 <= n <= N`.
///
/// # Safety
/// `solution` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_jump(solution: *const DgtSolution, n: usize, out: *mut f64, len: usize) -> DgtStatus {
    guard(|| {
        let s = get(solution, "solution")?;
        let v = s.0.jump(n)?;
        slice_out(out, len, v.len())?.copy_from_slice(&v);
        Ok(())
    })
}

/// Norm of the jump at `t_{n-1}`, `sqrt(weight * sum v_i^2)`; use
/// `weight = 1` for the Euclidean norm.
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_jump_indicator(solution: *const DgtSolution, n: usize, weight: f64, out: *mut f64) -> DgtStatus {
    guard(|| {
        let s = get(solution, "solution")?;
        if weight.is_nan() || weight <= 0.0 {
            return Err(Fail(DgtStatus::InvalidArgument, format!("norm weight must be positive, got {weight}")));
        }
        let v = jump_indicator(&s.0, n, StateNorm::Weighted(weight))?;
        *slice_out(out, 1, 1)?.first_mut().unwrap() = v;
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgt_solution_free(solution: *mut DgtSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

// ---- reconstruction ----

/// Continuous reconstruction `U*` of degree `r`.
///
/// # Safety
/// `solution` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dgt_reconstruct(solution: *const DgtSolution, out: *mut *mut DgtReconstruction) -> DgtStatus {
    guard(|| {
        let s = get(solution, "solution")?;
        write_handle(out, DgtReconstruction(reconstruct(&s.0)?))
    })
}

/// `U*(t)` for `0 <= t <= T`.
///
/// # Safety
/// `rec` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn dgt_reconstruction_eval(rec: *const DgtReconstruction, t: f64, out: *mut f64, len: usize) -> DgtStatus {
    guard(|| {
        let r = get(rec, "reconstruction")?;
        let dim = r.0.as_piecewise().dim();
        r.0.eval_into(t, slice_out(out, len, dim)?)?;
        Ok(())
    })
}

/// # Safety
/// `rec` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgt_reconstruction_free(rec: *mut DgtReconstruction) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

// ---- benchmarks ----

fn experiment(name: *const c_char) -> Result<Experiment, Fail> {
    if name.is_null() {
        return Err(null("experiment name"));
    }
    let s =
        unsafe { CStr::from_ptr(name) }.to_str().map_err(|_| Fail(DgtStatus::InvalidArgument, "experiment name is not UTF-8".into()))?;
    Ok(s.parse()?)
}

/// Default options for `"ode"`, `"heat1d"` or `"heat2d"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dgt_experiment_defaults(name: *const c_char, out: *mut DgtExperimentOptions) -> DgtStatus {
    guard(|| {
        let spec = ExperimentSpec::new(experiment(name)?);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = DgtExperimentOptions {
            r: spec.r,
            p: spec.p,
            samples: spec.samples,
            cutoff: spec.cutoff,
            homogeneous: spec.homogeneous,
            weighted: false,
            alpha: 0.0,
        };
        Ok(())
    })
}

/// Runs a convergence study for the `n_len` step counts in `ns` and returns
/// the table as a CSV string, to be released with [`dgt_string_free`].
///
/// # Safety
/// `name` must be a NUL-terminated string, `options` a valid pointer, `ns`
/// must hold `n_len` values and `csv_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dgt_run_experiment(
    name: *const c_char,
    options: *const DgtExperimentOptions,
    ns: *const usize,
    n_len: usize,
    csv_out: *mut *mut c_char,
) -> DgtStatus {
    guard(|| {
        let o = get(options, "options")?;
        if csv_out.is_null() {
            return Err(null("csv_out"));
        }
        let mut spec = ExperimentSpec::new(experiment(name)?);
        spec.r = o.r;
        spec.p = o.p;
        spec.samples = o.samples;
        spec.cutoff = o.cutoff;
        spec.homogeneous = o.homogeneous;
        spec.weighted = o.weighted.then_some(o.alpha);
        spec.ns = slice_in(ns, n_len, "ns")?.to_vec();
        let csv = run_experiment(&spec)?.to_csv();
        *csv_out = CString::new(csv).map_err(|_| Fail(DgtStatus::Panic, "interior NUL in output".into()))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dgt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
