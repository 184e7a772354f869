use std::fmt::Write as _;

use crate::error::{DgError, Result};

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: usize,
    pub p: Option<usize>,
    pub err_u: f64,
    pub err_ustar: f64,
    pub err_nodal: f64,
    pub rate_u: Option<f64>,
    pub rate_ustar: Option<f64>,
    pub rate_nodal: Option<f64>,
}

/// Errors and observed rates for a sequence of doubling `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub experiment: String,
    pub r: usize,
    pub norm: String,
    /// Weight exponents for the `U`, `U*` and nodal columns.
    pub weights: Option<[f64; 3]>,
    pub window: Option<(f64, f64)>,
    pub rows: Vec<TableRow>,
}

pub const CSV_HEADER: &str = "N,P,err_U,rate_U,err_Ustar,rate_Ustar,err_nodal,rate_nodal";

/// `log2(e_i / e_{i+1})` for consecutive rows; `ns` must double.
pub fn observed_rates(ns: &[usize], errors: &[f64]) -> Result<Vec<f64>> {
    if ns.len() != errors.len() {
        return Err(DgError::DimensionMismatch { expected: ns.len(), actual: errors.len() });
    }
    check_doubling(ns)?;
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

pub(crate) fn check_doubling(ns: &[usize]) -> Result<()> {
    if ns.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(DgError::NonDoublingSequence(ns.to_vec()));
    }
    Ok(())
}

impl ConvergenceTable {
    /// Fills the rate columns from the errors.
    pub(crate) fn from_rows(
        experiment: &str,
        r: usize,
        norm: &str,
        weights: Option<[f64; 3]>,
        window: Option<(f64, f64)>,
        mut rows: Vec<TableRow>,
    ) -> Result<Self> {
        let ns: Vec<usize> = rows.iter().map(|row| row.n).collect();
        check_doubling(&ns)?;
        for i in 1..rows.len() {
            let (a, b) = (rows[i - 1].clone(), &mut rows[i]);
            b.rate_u = Some((a.err_u / b.err_u).log2());
            b.rate_ustar = Some((a.err_ustar / b.err_ustar).log2());
            b.rate_nodal = Some((a.err_nodal / b.err_nodal).log2());
        }
        Ok(Self { experiment: experiment.to_string(), r, norm: norm.to_string(), weights, window, rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for row in &self.rows {
            let p = row.p.map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:e},{},{:e},{},{:e},{}",
                row.n,
                p,
                row.err_u,
                opt(row.rate_u),
                row.err_ustar,
                opt(row.rate_ustar),
                row.err_nodal,
                opt(row.rate_nodal)
            );
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("{} (r = {}, norm: {}", self.experiment, self.r, self.norm);
        if let Some([a, b, c]) = self.weights {
            let _ = write!(out, ", weights t^{a}, t^{b}, t^{c}");
        }
        if let Some((lo, hi)) = self.window {
            let _ = write!(out, ", window [{lo}, {hi}]");
        }
        out.push_str(")\n\n");
        out.push_str("| N | P | err U | rate | err U* | rate | err nodal | rate |\n");
        out.push_str("|---:|---:|---:|---:|---:|---:|---:|---:|\n");
        let rate = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
        for row in &self.rows {
            let p = row.p.map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "| {} | {} | {:.2e} | {} | {:.2e} | {} | {:.2e} | {} |",
                row.n,
                p,
                row.err_u,
                rate(row.rate_u),
                row.err_ustar,
                rate(row.rate_ustar),
                row.err_nodal,
                rate(row.rate_nodal)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, e: f64) -> TableRow {
        TableRow { n, p: None, err_u: e, err_ustar: e / 2.0, err_nodal: e / 4.0, rate_u: None, rate_ustar: None, rate_nodal: None }
    }

    #[test]
    fn rates() {
        assert_eq!(observed_rates(&[8, 16], &[8e-4, 1e-4]).unwrap(), vec![3.0]);
        let r = observed_rates(&[4, 8], &[1.75e-3, 1.36e-4]).unwrap();
        assert!((r[0] - 3.684).abs() < 0.01);
        assert_eq!(observed_rates(&[1, 2, 4], &[0.3, 0.3, 0.3]).unwrap(), vec![0.0, 0.0]);
        assert!(observed_rates(&[8, 12], &[1.0, 1.0]).is_err());
        assert!(observed_rates(&[8], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = ConvergenceTable::from_rows("ode", 4, "abs", None, None, vec![row(4, 1e-3), row(8, 1.25e-4)]).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "4,,1e-3,,5e-4,,2.5e-4,");
        assert_eq!(lines[2], "8,,1.25e-4,3e0,6.25e-5,3e0,3.125e-5,3e0");
        assert!(!csv.contains('\r'));
        // every rate recomputes from its error pair
        let r = t.rows[1].rate_u.unwrap();
        assert!((r - (t.rows[0].err_u / t.rows[1].err_u).log2()).abs() < 1e-12);
        assert!(ConvergenceTable::from_rows("ode", 4, "abs", None, None, vec![row(4, 1.0), row(6, 1.0)]).is_err());
    }

    #[test]
    fn markdown_three_digits() {
        let t = ConvergenceTable::from_rows("ode", 4, "abs", None, None, vec![row(4, 1.7524e-3), row(8, 1.3627e-4)]).unwrap();
        let md = t.to_markdown();
        assert!(md.contains("| 4 |  | 1.75e-3 |  |"));
        assert!(md.contains("| 3.685 |"));
    }
}
