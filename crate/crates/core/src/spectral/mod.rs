//! Eigenvalues of dense real matrices, the Perron root, and the spread.

mod exact;
mod perron;
mod qr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::{graph, DenseMatrix, RationalMatrix};
use crate::{Error, Result};

pub use exact::{
    characteristic_polynomial, exact_eigenvalues, square_free_decomposition, RationalPoly,
};
pub use perron::{perron_root, PerronConfig, PerronRoot};

/// Default tolerance for clustering eigenvalues into distinct values.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;
/// Default tolerance for matching conjugate pairs.
pub const DEFAULT_PAIRING_TOL: f64 = 1e-8;
/// Largest dimension for which [`SpectrumPolicy::Auto`] takes the exact route.
pub const EXACT_ROUTE_MAX_N: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Qr,
    ExactCharpoly,
}

/// Eigenvalues with multiplicity, plus the accuracy the solver achieved.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    max_residual: f64,
    method: SpectrumMethod,
}

impl Spectrum {
    pub fn new(eigenvalues: Vec<Complex64>, max_residual: f64, method: SpectrumMethod) -> Self {
        Self {
            eigenvalues,
            max_residual,
            method,
        }
    }

    pub fn from_values(eigenvalues: Vec<Complex64>) -> Self {
        Self::new(eigenvalues, 0.0, SpectrumMethod::Qr)
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn method(&self) -> SpectrumMethod {
        self.method
    }

    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Spectrum of `factor * A`.
    pub fn scaled(&self, factor: f64) -> Spectrum {
        Spectrum {
            eigenvalues: self.eigenvalues.iter().map(|z| z * factor).collect(),
            max_residual: self.max_residual * factor.abs(),
            method: self.method,
        }
    }

    /// Maximum of `|λi - λj|` over all pairs.
    pub fn spread(&self) -> f64 {
        spread(self)
    }

    /// Whether every eigenvalue can be matched to a distinct conjugate
    /// partner within `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let ev = &self.eigenvalues;
        let mut used = vec![false; ev.len()];
        for i in 0..ev.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            if ev[i].im.abs() <= tol {
                continue;
            }
            let target = ev[i].conj();
            let partner = (0..ev.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (ev[a] - target).norm().total_cmp(&(ev[b] - target).norm()));
            match partner {
                Some(j) if (ev[j] - target).norm() <= tol => used[j] = true,
                _ => return false,
            }
        }
        true
    }
}

#[derive(Clone, Debug)]
pub struct EigenConfig {
    pub balance: bool,
    /// QR sweeps allowed per eigenvalue.
    pub max_iter: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            balance: true,
            max_iter: 40,
        }
    }
}

/// All eigenvalues of a real matrix by Hessenberg reduction and shifted QR.
///
/// A reducible zero pattern is split into its strongly connected blocks
/// first: the spectrum is the union of the block spectra, `1x1` blocks are
/// read off the diagonal, and QR never sees the nilpotent corners that make
/// its zero shifts converge slowly.
pub fn eigenvalues(a: &DenseMatrix, cfg: &EigenConfig) -> Result<Spectrum> {
    let blocks = graph::strongly_connected_components(a);
    if blocks.len() <= 1 {
        let (values, outcome) = qr_with_retry(a, cfg)?;
        return Ok(Spectrum::new(
            values,
            outcome.achieved_tol,
            SpectrumMethod::Qr,
        ));
    }
    let mut values = Vec::with_capacity(a.n());
    let mut residual = 0.0f64;
    for block in &blocks {
        if let [i] = block[..] {
            values.push(Complex64::new(a[(i, i)], 0.0));
            continue;
        }
        match qr_with_retry(&a.principal_submatrix(block), cfg) {
            Ok((v, outcome)) => {
                values.extend(v);
                residual = residual.max(outcome.achieved_tol);
            }
            Err(Error::NoConvergence {
                iterations,
                partial,
            }) => {
                values.extend(partial);
                return Err(Error::NoConvergence {
                    iterations,
                    partial: values,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Spectrum::new(values, residual, SpectrumMethod::Qr))
}

/// QR on `a`, and on `a^T` if the sweep budget runs out. The transpose has
/// the same spectrum but a different Hessenberg form, which is enough to
/// escape the rare shift stagnation.
fn qr_with_retry(a: &DenseMatrix, cfg: &EigenConfig) -> Result<(Vec<Complex64>, qr::QrOutcome)> {
    match qr::eigenvalues(a, cfg.balance, cfg.max_iter) {
        Err(first @ Error::NoConvergence { .. }) => {
            qr::eigenvalues(&a.transpose(), cfg.balance, cfg.max_iter).map_err(|_| first)
        }
        other => other,
    }
}

/// Which eigensolver to use for a matrix that may carry an exact form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumPolicy {
    /// Exact characteristic polynomial when an exact form is present and the
    /// dimension is at most [`EXACT_ROUTE_MAX_N`], QR otherwise.
    #[default]
    Auto,
    Qr,
    Exact,
}

pub fn spectrum_with_policy(
    dense: &DenseMatrix,
    exact: Option<&RationalMatrix>,
    policy: SpectrumPolicy,
    cfg: &EigenConfig,
) -> Result<Spectrum> {
    match (policy, exact) {
        (SpectrumPolicy::Exact, Some(e)) => exact_eigenvalues(e),
        (SpectrumPolicy::Exact, None) => {
            let e = RationalMatrix::from_entries(
                dense.n(),
                &dense
                    .as_slice()
                    .iter()
                    .map(|&v| crate::io::exact_rational(v))
                    .collect::<Vec<_>>(),
            )?;
            exact_eigenvalues(&e)
        }
        (SpectrumPolicy::Auto, Some(e)) if e.n() <= EXACT_ROUTE_MAX_N => exact_eigenvalues(e),
        _ => eigenvalues(dense, cfg),
    }
}

/// Maximum distance between any two eigenvalues; zero for an empty or
/// single-point spectrum.
pub fn spread(s: &Spectrum) -> f64 {
    let ev = &s.eigenvalues;
    let mut best = 0.0f64;
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            best = best.max((ev[i] - ev[j]).norm());
        }
    }
    best
}

/// Number of clusters when eigenvalues within `cluster_tol` of each other are
/// linked (single linkage). The answer depends on the tolerance.
pub fn distinct_eigenvalue_count(s: &Spectrum, cluster_tol: f64) -> usize {
    let ev = &s.eigenvalues;
    let mut parent: Vec<usize> = (0..ev.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut clusters = ev.len();
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            if (ev[i] - ev[j]).norm() <= cluster_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                    clusters -= 1;
                }
            }
        }
    }
    clusters
}
