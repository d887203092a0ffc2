//! Monte Carlo falsification harness: sample `C_n`, verify every bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{sample_cn, stream_rng};
use crate::bounds::{verify_bounds, BoundReport, BoundsConfig};
use crate::parallel::{map_indexed, Execution};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct FalsifyConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Sample `i` uses `densities[i % len]`.
    pub densities: Vec<f64>,
    pub bounds: BoundsConfig,
    pub execution: Execution,
}

impl FalsifyConfig {
    pub fn new(n: usize, samples: usize, seed: u64) -> Self {
        Self {
            n,
            samples,
            seed,
            densities: vec![1.0, 0.6, 0.3],
            bounds: BoundsConfig::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FalsifySummary {
    pub n: usize,
    pub samples: usize,
    /// `(sample index, violated checks)` for every offending sample.
    pub violations: Vec<(usize, Vec<String>)>,
    /// `(sample index, error message)` for samples that could not be checked.
    pub errors: Vec<(usize, String)>,
    /// Smallest `spread - bound` per named bound.
    pub min_margin: BTreeMap<String, f64>,
    pub quadratic_checks: usize,
    pub min_quadratic_residual: Option<f64>,
    pub jll_checks: usize,
    pub max_pairwise_identity: f64,
    /// Samples that landed in `D_n`.
    pub two_eigenvalue_samples: usize,
}

impl FalsifySummary {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.errors.is_empty()
    }

    fn absorb(&mut self, index: usize, report: &BoundReport) {
        if !report.violations.is_empty() {
            self.violations.push((index, report.violations.clone()));
        }
        for (name, &b) in &report.bounds {
            let margin = report.spread - b;
            self.min_margin
                .entry(name.clone())
                .and_modify(|m| *m = m.min(margin))
                .or_insert(margin);
        }
        if let Some(r) = report.eq2_residual {
            self.quadratic_checks += 1;
            self.min_quadratic_residual = Some(self.min_quadratic_residual.map_or(r, |m| m.min(r)));
        }
        self.jll_checks += report.jll.iter().filter(|c| !c.skipped).count();
        self.max_pairwise_identity = self.max_pairwise_identity.max(report.pairwise_identity);
        if report.distinct_eigenvalues == 2 {
            self.two_eigenvalue_samples += 1;
        }
    }
}

/// Draws `samples` members of `C_n` and runs [`verify_bounds`] on each.
pub fn falsify(cfg: &FalsifyConfig) -> Result<FalsifySummary> {
    if cfg.densities.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one density is required".into(),
        ));
    }
    let reports = map_indexed(cfg.samples, cfg.execution, |i| {
        let density = cfg.densities[i % cfg.densities.len()];
        let a = sample_cn(cfg.n, &mut stream_rng(cfg.seed, i as u64), density)?;
        verify_bounds(&a, &cfg.bounds)
    });
    let mut summary = FalsifySummary {
        n: cfg.n,
        samples: cfg.samples,
        ..Default::default()
    };
    for (i, r) in reports.into_iter().enumerate() {
        match r {
            Ok(report) => summary.absorb(i, &report),
            Err(e) => summary.errors.push((i, e.to_string())),
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_reproducible() {
        let cfg = FalsifyConfig::new(4, 200, 5);
        let a = falsify(&cfg).unwrap();
        assert!(a.is_clean(), "{:?}", a.violations);
        assert!(a.jll_checks > 0);
        let b = falsify(&FalsifyConfig {
            execution: Execution::Sequential,
            ..cfg
        })
        .unwrap();
        assert_eq!(a, b);
    }
}
