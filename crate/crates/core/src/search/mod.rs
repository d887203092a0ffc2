//! Random sampling of `C_n` and derivative-free minimization of the spread.
//!
//! Randomness: restart (or sample) `i` draws from `ChaCha8Rng` seeded with
//! the root seed and switched to stream `i`, so every restart has its own
//! reproducible sequence regardless of how restarts are scheduled.

pub mod anneal;
mod falsify;
pub mod nelder_mead;
mod sweep;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{spread_lower_bound, two_eigenvalue_bound};
use crate::constructions::extremal_matrix;
use crate::matrix::{graph, DenseMatrix, NonnegativeMatrix, DEFAULT_RADIUS_TOL};
use crate::parallel::{map_indexed, Execution};
use crate::spectral::{
    distinct_eigenvalue_count, eigenvalues, spectrum_with_policy, EigenConfig, SpectrumPolicy,
    DEFAULT_CLUSTER_TOL,
};
use crate::{Error, Result, FORMAT_VERSION};

pub use falsify::{falsify, FalsifyConfig, FalsifySummary};
pub use sweep::{sweep_experiment, write_sweep_csv, SweepRow};

/// Consecutive nilpotent draws tolerated by [`sample_cn`].
pub const MAX_NILPOTENT_DRAWS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Random,
    NelderMead,
    Anneal,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "random" => Ok(Method::Random),
            "nelder_mead" | "nm" => Ok(Method::NelderMead),
            "anneal" => Ok(Method::Anneal),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?} (expected random, nelder_mead or anneal)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Random => "random",
            Method::NelderMead => "nelder_mead",
            Method::Anneal => "anneal",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub seed: u64,
    pub restarts: usize,
    pub iters_per_restart: usize,
    /// Expected fraction of nonzero entries in sampled starting points.
    pub density: f64,
    pub method: Method,
    pub execution: Execution,
    /// Slack below the theoretical bound before a result is a red alert.
    pub report_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n: 3,
            seed: 0,
            restarts: 8,
            iters_per_restart: 2000,
            density: 1.0,
            method: Method::NelderMead,
            execution: Execution::Parallel,
            report_tol: 1e-9,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!(
                "search needs n >= 2, got {}",
                self.n
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if self.iters_per_restart == 0 {
            return Err(Error::InvalidArgument("iters must be at least 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "density must lie in (0, 1], got {}",
                self.density
            )));
        }
        Ok(())
    }
}

/// Rng for restart or sample `index` under the root `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random member of `C_n`: each entry other than `a11` is nonzero with
/// probability `density`, magnitudes uniform on `(0, 1]`, then the matrix is
/// scaled to unit Perron root. Nilpotent patterns are redrawn.
pub fn sample_cn<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    density: f64,
) -> Result<NonnegativeMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "sampling needs n >= 2, got {n}"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "density must lie in (0, 1], got {density}"
        )));
    }
    for _ in 0..MAX_NILPOTENT_DRAWS {
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if (i, j) == (0, 0) {
                    continue;
                }
                if rng.random::<f64>() < density {
                    a[(i, j)] = 1.0 - rng.random::<f64>();
                }
            }
        }
        if graph::pattern_is_acyclic(&a) {
            continue;
        }
        return NonnegativeMatrix::new(a)?.normalize_to_unit_radius(DEFAULT_RADIUS_TOL);
    }
    Err(Error::DensityTooLow {
        attempts: MAX_NILPOTENT_DRAWS,
    })
}

/// Entries of `a` other than `a11`, row-major.
pub fn matrix_to_params(a: &DenseMatrix) -> Vec<f64> {
    a.as_slice()[1..].to_vec()
}

/// Inverse of [`matrix_to_params`] through `|.|`, with `a11 = 0`.
pub fn params_to_matrix(n: usize, params: &[f64]) -> Result<DenseMatrix> {
    if params.len() + 1 != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n - 1,
            found: params.len(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    data.push(0.0);
    data.extend(params.iter().map(|p| p.abs()));
    DenseMatrix::new(n, data)
}

/// One objective evaluation.
#[derive(Clone, Copy, Debug)]
struct Evaluation {
    spread: f64,
    two_eigenvalue: bool,
}

const INFEASIBLE: Evaluation = Evaluation {
    spread: f64::INFINITY,
    two_eigenvalue: false,
};

/// Spread of the unit-radius rescaling of `|params|`; infeasible points and
/// solver failures score `+inf`.
fn evaluate(n: usize, params: &[f64], eigen: &EigenConfig) -> Evaluation {
    let Ok(a) = params_to_matrix(n, params) else {
        return INFEASIBLE;
    };
    if graph::pattern_is_acyclic(&a) {
        return INFEASIBLE;
    }
    let Ok(spectrum) = eigenvalues(&a, eigen) else {
        return INFEASIBLE;
    };
    let r = spectrum.max_modulus();
    if !(r > 0.0 && r.is_finite()) {
        return INFEASIBLE;
    }
    let scaled = spectrum.scaled(1.0 / r);
    Evaluation {
        spread: scaled.spread(),
        two_eigenvalue: distinct_eigenvalue_count(&scaled, DEFAULT_CLUSTER_TOL) == 2,
    }
}

/// Objective closure that also records the smallest spread seen among
/// points with exactly two distinct eigenvalues.
struct Tracker {
    n: usize,
    eigen: EigenConfig,
    two_eigenvalue_min: Option<f64>,
}

impl Tracker {
    fn new(n: usize) -> Self {
        Self {
            n,
            eigen: EigenConfig::default(),
            two_eigenvalue_min: None,
        }
    }

    fn eval(&mut self, params: &[f64]) -> f64 {
        let e = evaluate(self.n, params, &self.eigen);
        if e.two_eigenvalue {
            self.note_two_eigenvalue(e.spread);
        }
        e.spread
    }

    fn note_two_eigenvalue(&mut self, spread: f64) {
        self.two_eigenvalue_min = Some(self.two_eigenvalue_min.map_or(spread, |m| m.min(spread)));
    }
}

enum Candidate {
    Incumbent(NonnegativeMatrix),
    Params(Vec<f64>),
}

struct RestartOutcome {
    spread: f64,
    candidate: Candidate,
    evaluations: usize,
    two_eigenvalue_min: Option<f64>,
}

/// Exact-route spread of the extremal matrix, used as the incumbent start.
fn incumbent(n: usize) -> Result<(NonnegativeMatrix, f64, bool)> {
    let a = extremal_matrix(n)?;
    let s = spectrum_with_policy(
        a.dense(),
        a.exact(),
        SpectrumPolicy::Auto,
        &EigenConfig::default(),
    )?;
    let two = distinct_eigenvalue_count(&s, DEFAULT_CLUSTER_TOL) == 2;
    Ok((a, s.spread(), two))
}

fn run_restart(cfg: &SearchConfig, index: usize) -> Result<RestartOutcome> {
    let n = cfg.n;
    let mut rng = stream_rng(cfg.seed, index as u64);
    let mut tracker = Tracker::new(n);

    if cfg.method == Method::Random {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for _ in 0..cfg.iters_per_restart {
            let a = sample_cn(n, &mut rng, cfg.density)?;
            let p = matrix_to_params(a.dense());
            let v = tracker.eval(&p);
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, p));
            }
        }
        let (spread, p) = best.expect("at least one iteration");
        return Ok(RestartOutcome {
            spread,
            candidate: Candidate::Params(p),
            evaluations: cfg.iters_per_restart,
            two_eigenvalue_min: tracker.two_eigenvalue_min,
        });
    }

    let (start, seeded) = if index == 0 {
        let (a, s, two) = incumbent(n)?;
        if two {
            tracker.note_two_eigenvalue(s);
        }
        (matrix_to_params(a.dense()), Some((a, s)))
    } else {
        (
            matrix_to_params(sample_cn(n, &mut rng, cfg.density)?.dense()),
            None,
        )
    };
    let scale = start.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-3);

    let (x, value, evaluations) = match cfg.method {
        Method::NelderMead => {
            let opts = nelder_mead::NelderMeadOptions {
                step: 0.1 * scale,
                max_evaluations: cfg.iters_per_restart,
                ..Default::default()
            };
            let out = nelder_mead::minimize(|p: &[f64]| tracker.eval(p), &start, &opts);
            (out.x, out.value, out.evaluations)
        }
        Method::Anneal => {
            let opts = anneal::AnnealOptions {
                iterations: cfg.iters_per_restart,
                initial_step: 0.1 * scale,
                ..Default::default()
            };
            let out = anneal::minimize(|p: &[f64]| tracker.eval(p), &start, &opts, &mut rng);
            (out.x, out.value, out.evaluations)
        }
        Method::Random => unreachable!(),
    };

    let outcome = match seeded {
        // The exact spread of the incumbent is not beaten by a numerical
        // value that merely ties it up to rounding.
        Some((a, s)) if s <= value => RestartOutcome {
            spread: s,
            candidate: Candidate::Incumbent(a),
            evaluations,
            two_eigenvalue_min: tracker.two_eigenvalue_min,
        },
        _ => RestartOutcome {
            spread: value,
            candidate: Candidate::Params(x),
            evaluations,
            two_eigenvalue_min: tracker.two_eigenvalue_min,
        },
    };
    Ok(outcome)
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: usize,
    /// Unit Perron root, `a11 = 0`.
    pub best_matrix: NonnegativeMatrix,
    pub best_spread: f64,
    pub best_restart: usize,
    pub theoretical_bound: f64,
    /// `best_spread - theoretical_bound`.
    pub gap: f64,
    pub evaluations: usize,
    /// Best spread of each restart, in restart order.
    pub trace: Vec<f64>,
    /// Smallest spread among evaluated points with two distinct eigenvalues.
    pub two_eigenvalue_min_spread: Option<f64>,
    /// The gap is below `-report_tol`.
    pub red_alert: bool,
}

impl SearchResult {
    pub fn report(&self, cfg: &SearchConfig) -> Result<SearchReport> {
        Ok(SearchReport {
            format_version: FORMAT_VERSION,
            n: self.n,
            seed: cfg.seed,
            method: cfg.method,
            restarts: cfg.restarts,
            iters_per_restart: cfg.iters_per_restart,
            density: cfg.density,
            best_spread: self.best_spread,
            best_restart: self.best_restart,
            theoretical_bound: self.theoretical_bound,
            two_eigenvalue_bound: two_eigenvalue_bound(self.n)?,
            gap: self.gap,
            evaluations: self.evaluations,
            trace: self.trace.clone(),
            two_eigenvalue_min_spread: self.two_eigenvalue_min_spread,
            red_alert: self.red_alert,
            best_matrix: crate::io::format_dense(self.best_matrix.dense()),
        })
    }
}

/// JSON form of a [`SearchResult`]; the matrix is embedded in the plain
/// text matrix format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub format_version: u32,
    pub n: usize,
    pub seed: u64,
    pub method: Method,
    pub restarts: usize,
    pub iters_per_restart: usize,
    pub density: f64,
    pub best_spread: f64,
    pub best_restart: usize,
    pub theoretical_bound: f64,
    pub two_eigenvalue_bound: f64,
    pub gap: f64,
    pub evaluations: usize,
    pub trace: Vec<f64>,
    pub two_eigenvalue_min_spread: Option<f64>,
    pub red_alert: bool,
    pub best_matrix: String,
}

/// Runs every restart (concurrently when enabled) and keeps the minimum by
/// `(spread, restart index)`.
pub fn minimize_spread(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let n = cfg.n;
    let outcomes = map_indexed(cfg.restarts, cfg.execution, |i| run_restart(cfg, i));
    let outcomes: Vec<RestartOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let trace: Vec<f64> = outcomes.iter().map(|o| o.spread).collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let two_eigenvalue_min_spread = outcomes
        .iter()
        .filter_map(|o| o.two_eigenvalue_min)
        .reduce(f64::min);
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.spread.total_cmp(&b.spread).then(i.cmp(j)))
        .expect("restarts >= 1");
    if !best.spread.is_finite() {
        return Err(Error::Verification(
            "no restart produced a finite spread".into(),
        ));
    }

    let best_matrix = match best.candidate {
        Candidate::Incumbent(a) => a,
        Candidate::Params(p) => NonnegativeMatrix::new(params_to_matrix(n, &p)?)?
            .normalize_to_unit_radius(DEFAULT_RADIUS_TOL)?,
    };
    let theoretical_bound = spread_lower_bound(n)?.value;
    let gap = best.spread - theoretical_bound;
    Ok(SearchResult {
        n,
        best_matrix,
        best_spread: best.spread,
        best_restart,
        theoretical_bound,
        gap,
        evaluations,
        trace,
        two_eigenvalue_min_spread,
        red_alert: gap < -cfg.report_tol,
    })
}
