//! Time partitions `0 = t_0 < t_1 < ... < t_N = T`.

use crate::basis::{affine, reference_coord};
use crate::error::{invalid, DgError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
}

impl TimeMesh {
    /// Mesh from an explicit, strictly increasing node list.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return invalid("a mesh needs at least two nodes");
        }
        if nodes.iter().any(|t| !t.is_finite()) {
            return invalid("mesh nodes must be finite");
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("mesh nodes must be strictly increasing");
        }
        Ok(Self { nodes })
    }

    /// `N` equal steps of length `T / N` on `[0, T]`.
    pub fn uniform(final_time: f64, n: usize) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return invalid(format!("final time must be positive, got {final_time}"));
        }
        if n == 0 {
            return invalid("number of intervals must be >= 1");
        }
        let mut nodes: Vec<f64> = (0..=n).map(|i| i as f64 * final_time / n as f64).collect();
        nodes[n] = final_time;
        Ok(Self { nodes })
    }

    /// Number of intervals `N`.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `t_n` for `0 <= n <= N`.
    pub fn node(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    pub fn final_time(&self) -> f64 {
        self.nodes[self.len()]
    }

    /// `(t_{n-1}, t_n)` for `1 <= n <= N`.
    pub fn interval(&self, n: usize) -> Result<(f64, f64)> {
        self.check_interval(n)?;
        Ok((self.nodes[n - 1], self.nodes[n]))
    }

    /// `k_n = t_n - t_{n-1}`.
    pub fn step(&self, n: usize) -> Result<f64> {
        let (a, b) = self.interval(n)?;
        Ok(b - a)
    }

    pub fn max_step(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// True when every step agrees with `T / N` to `1e-15 T`.
    pub fn is_uniform(&self) -> bool {
        let t = self.final_time() - self.nodes[0];
        let k = t / self.len() as f64;
        self.nodes.windows(2).all(|w| ((w[1] - w[0]) - k).abs() <= 1e-15 * t)
    }

    /// Affine image of `tau in [-1, 1]` in interval `n`.
    pub fn to_physical(&self, n: usize, tau: f64) -> Result<f64> {
        let (a, b) = self.interval(n)?;
        Ok(affine(a, b, tau))
    }

    /// Inverse of [`TimeMesh::to_physical`].
    pub fn to_reference(&self, n: usize, t: f64) -> Result<f64> {
        let (a, b) = self.interval(n)?;
        Ok(reference_coord(a, b, t))
    }

    /// Interval index `n` with `t in (t_{n-1}, t_n]`; node values belong to
    /// the interval on their left.
    pub fn locate(&self, t: f64) -> Result<usize> {
        let (lo, hi) = (self.nodes[0], self.final_time());
        if !(t > lo && t <= hi) {
            return Err(DgError::TimeOutOfRange { t, lo, hi });
        }
        // first node >= t
        let idx = self.nodes.partition_point(|&x| x < t);
        Ok(idx.max(1))
    }

    fn check_interval(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(DgError::IndexOutOfRange { index: n, max: self.len() });
        }
        Ok(())
    }
}
