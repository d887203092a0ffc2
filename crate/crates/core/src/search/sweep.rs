//! Per-dimension search sweep with CSV output.
//!
//! Columns: `format_version, n, bound_general, bound_two_eigenvalue,
//! best_spread, gap, evaluations, violations, error`. `violations` lists the
//! failed checks of the best matrix separated by `;`; `best_spread` and `gap`
//! are empty when the row failed, with the reason in `error`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{minimize_spread, SearchConfig};
use crate::bounds::{spread_lower_bound, two_eigenvalue_bound, verify_bounds, BoundsConfig};
use crate::{Error, Result, FORMAT_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub format_version: u32,
    pub n: usize,
    pub bound_general: f64,
    pub bound_two_eigenvalue: f64,
    pub best_spread: Option<f64>,
    pub gap: Option<f64>,
    pub evaluations: usize,
    pub violations: String,
    pub error: String,
}

impl SweepRow {
    /// Negative gap beyond `tol`, or a failed check on the best matrix.
    pub fn is_alarm(&self, tol: f64) -> bool {
        !self.violations.is_empty() || self.gap.is_some_and(|g| g < -tol)
    }
}

fn row_for(n: usize, base: &SearchConfig, bounds: &BoundsConfig) -> Result<SweepRow> {
    let bound_general = spread_lower_bound(n)?.value;
    let bound_two_eigenvalue = two_eigenvalue_bound(n)?;
    let mut row = SweepRow {
        format_version: FORMAT_VERSION,
        n,
        bound_general,
        bound_two_eigenvalue,
        best_spread: None,
        gap: None,
        evaluations: 0,
        violations: String::new(),
        error: String::new(),
    };
    let cfg = SearchConfig { n, ..base.clone() };
    let outcome = minimize_spread(&cfg)
        .and_then(|r| verify_bounds(&r.best_matrix, bounds).map(|rep| (r, rep)));
    match outcome {
        Ok((result, report)) => {
            row.best_spread = Some(result.best_spread);
            row.gap = Some(result.gap);
            row.evaluations = result.evaluations;
            row.violations = report.violations.join(";");
        }
        Err(e) => row.error = e.to_string(),
    }
    Ok(row)
}

/// One row per `n` in `n_min..=n_max`. Failures of a single `n` are stored in
/// its row and do not stop the sweep.
pub fn sweep_experiment(n_min: usize, n_max: usize, cfg: &SearchConfig) -> Result<Vec<SweepRow>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "sweep needs 2 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let bounds = BoundsConfig {
        report_tol: cfg.report_tol,
        ..BoundsConfig::default()
    };
    (n_min..=n_max).map(|n| row_for(n, cfg, &bounds)).collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
