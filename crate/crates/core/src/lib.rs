//! Discontinuous Galerkin time stepping for `u' + A u = f` with a continuous
//! reconstruction, jump error indicators and convergence benchmarks.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bench;
pub mod dg;
pub mod error;
pub mod mesh;
pub mod models;
pub mod postprocess;
pub mod reference;
pub mod system;

pub use dg::{dg_solve, DgSolution, Forcing, LinearProblem, StateNorm};
pub use error::{DgError, Result};
pub use mesh::TimeMesh;
pub use postprocess::{jump_indicator, reconstruct, Reconstruction};
