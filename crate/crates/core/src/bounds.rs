//! Lower bounds on the spread of nonnegative matrices with zero diagonal
//! entries, the trace-power (JLL) inequalities they rest on, and a combined
//! per-matrix report.
//!
//! Every bound is evaluated against a computed spectrum and any shortfall
//! beyond `report_tol` is listed in [`BoundReport::violations`]. Nothing is
//! clamped. A violation points either at the numerics or at a bound that
//! does not hold, and the caller gets to see it.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::{DenseMatrix, ExactMatrix, NonnegativeMatrix};
use crate::spectral::{
    distinct_eigenvalue_count, perron_root, spectrum_with_policy, EigenConfig, PerronConfig,
    Spectrum, SpectrumMethod, SpectrumPolicy, DEFAULT_CLUSTER_TOL,
};
use crate::{Error, Result, FORMAT_VERSION};

pub const ZERO_DIAGONAL: &str = "zero_diagonal";
pub const THEOREM_PIECEWISE: &str = "theorem_piecewise";
pub const TWO_EIGENVALUE: &str = "two_eigenvalue";
pub const EQ2_RESIDUAL: &str = "eq2_residual";

#[derive(Clone, Debug)]
pub struct BoundsConfig {
    pub radius_tol: f64,
    /// Relative slack allowed before a spread below a bound is a violation.
    pub report_tol: f64,
    /// Relative slack for the trace inequalities.
    pub jll_tol: f64,
    pub cluster_tol: f64,
    pub m_max: u32,
    pub policy: SpectrumPolicy,
    pub eigen: EigenConfig,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            radius_tol: crate::matrix::DEFAULT_RADIUS_TOL,
            report_tol: 1e-9,
            jll_tol: 1e-9,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            m_max: 5,
            policy: SpectrumPolicy::Auto,
            eigen: EigenConfig::default(),
        }
    }
}

/// `k / n`: spread bound for unit-radius matrices with `k` zero diagonal
/// entries.
pub fn bound_zero_diagonal(n: usize, k: usize) -> Result<f64> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "zero-diagonal count {k} out of range for n = {n}"
        )));
    }
    Ok(k as f64 / n as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadBound {
    pub value: f64,
    /// The inequality is strict (`>`); numerically only the non-strict form
    /// is checkable.
    pub strict: bool,
}

fn n5_bound() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        // 5 / (8 + sqrt 74) with sqrt 74 truncated to 40 decimal places.
        let scale: BigInt = Pow::pow(BigInt::from(10), 40u32);
        let root = (BigInt::from(74) * &scale * &scale).sqrt();
        let q = BigRational::new(BigInt::from(5) * &scale, BigInt::from(8) * &scale + root);
        q.to_f64().expect("finite")
    })
}

/// General lower bound on the spread over `C_n`.
pub fn spread_lower_bound(n: usize) -> Result<SpreadBound> {
    let (value, strict) = match n {
        0 | 1 => {
            return Err(Error::InvalidArgument(format!(
                "spread bound needs n >= 2, got {n}"
            )))
        }
        2 => (1.0, false),
        3 => (0.75, false),
        4 => (1.0 / 3.0, false),
        5 => (n5_bound(), false),
        _ => (2.0 / (4.0 + (2.0 * (n as f64 + 3.0)).sqrt()), true),
    };
    Ok(SpreadBound { value, strict })
}

/// `n / (2(n-1))`: spread bound for members of `C_n` with exactly two
/// distinct eigenvalues. Attained by the extremal family.
pub fn two_eigenvalue_bound(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "two-eigenvalue bound needs n >= 2, got {n}"
        )));
    }
    Ok(n as f64 / (2.0 * (n as f64 - 1.0)))
}

/// `(n-1)(n-4)s^2 + 8(n-1)s - 2n`, nonnegative for the spread `s < 1` of
/// any member of `C_n`, `n >= 4`.
pub fn eq2_residual(n: usize, s: f64) -> f64 {
    let nf = n as f64;
    (nf - 1.0) * (nf - 4.0) * s * s + 8.0 * (nf - 1.0) * s - 2.0 * nf
}

/// `|Σ_{i<j} (λi - λj)^2 - (n Σ λi^2 - (Σ λi)^2)|`. The two sides agree
/// identically, so anything above rounding level means a corrupt spectrum.
pub fn pairwise_identity_check(s: &Spectrum) -> f64 {
    let ev = s.eigenvalues();
    let n = ev.len() as f64;
    let mut pairwise = Complex64::zero();
    for i in 0..ev.len() {
        for j in i + 1..ev.len() {
            let d = ev[i] - ev[j];
            pairwise += d * d;
        }
    }
    let sum: Complex64 = ev.iter().sum();
    let sum_sq: Complex64 = ev.iter().map(|z| z * z).sum();
    (pairwise - (sum_sq * n - sum * sum)).norm()
}

/// `s_m = tr(A^m)` for `m = 1..=len`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSequence {
    values: Vec<f64>,
    /// Set when a power overflowed before reaching the requested length.
    pub truncated: bool,
}

impl TraceSequence {
    pub fn compute(a: &DenseMatrix, m_max: u32) -> TraceSequence {
        let mut values = Vec::with_capacity(m_max as usize);
        if m_max == 0 {
            return TraceSequence {
                values,
                truncated: false,
            };
        }
        values.push(a.trace());
        let mut power = a.clone();
        for _ in 2..=m_max {
            match power.matmul(a) {
                Ok(p) if p.trace().is_finite() => {
                    values.push(p.trace());
                    power = p;
                }
                _ => {
                    return TraceSequence {
                        values,
                        truncated: true,
                    }
                }
            }
        }
        TraceSequence {
            values,
            truncated: false,
        }
    }

    /// `s_m`, 1-based.
    pub fn get(&self, m: u32) -> Option<f64> {
        self.values.get((m as usize).checked_sub(1)?).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JllCheck {
    pub m: u32,
    /// `s_1^m`
    pub lhs: f64,
    /// `(n-k)^(m-1) s_m`
    pub rhs: f64,
    pub satisfied: bool,
    /// Overflow prevented evaluation; `lhs`, `rhs` are zero and `satisfied`
    /// is vacuous.
    pub skipped: bool,
    /// Integer-exact verdict, present when the matrix has an exact form.
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalJllCheck {
    pub k: u32,
    pub m: u32,
    /// `s_k^m`
    pub lhs: f64,
    /// `n^(m-1) s_(km)`
    pub rhs: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JllCertificate {
    pub checks: Vec<JllCheck>,
    pub classical: Vec<ClassicalJllCheck>,
}

impl JllCertificate {
    pub fn all_satisfied(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.satisfied && c.exact != Some(false))
            && self.classical.iter().all(|c| c.satisfied)
    }
}

fn within(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs - rhs <= tol * lhs.abs().max(rhs.abs())
}

fn exact_traces(b: &ExactMatrix, m_max: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(m_max as usize);
    let mut power = b.clone();
    out.push(power.trace());
    for _ in 2..=m_max {
        power = power.mul(b).expect("square");
        out.push(power.trace());
    }
    out
}

/// Checks `s_1^m <= (n-k)^(m-1) s_m` for `m = 2..=m_max`, plus the classical
/// `s_k^m <= n^(m-1) s_(km)` for `k*m <= m_max` as a cross-check.
pub fn jll_certificate(a: &NonnegativeMatrix, m_max: u32, jll_tol: f64) -> Result<JllCertificate> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("m_max must be at least 2".into()));
    }
    let n = a.n();
    let k = a.zero_diagonal_count();
    let traces = TraceSequence::compute(a.dense(), m_max);
    let exact = a.exact().map(|e| {
        let kz = (0..n).filter(|&i| e.numer()[(i, i)].is_zero()).count();
        (kz, exact_traces(e.numer(), m_max))
    });

    let base = (n - k) as f64;
    let mut checks = Vec::new();
    for m in 2..=m_max {
        let (lhs, rhs, skipped) = match (traces.get(1), traces.get(m)) {
            (Some(s1), Some(sm)) => {
                let lhs = s1.powi(m as i32);
                let rhs = base.powi(m as i32 - 1) * sm;
                if lhs.is_finite() && rhs.is_finite() {
                    (lhs, rhs, false)
                } else {
                    (0.0, 0.0, true)
                }
            }
            _ => (0.0, 0.0, true),
        };
        let exact_verdict = exact.as_ref().map(|(kz, t)| {
            let lhs: BigInt = Pow::pow(&t[0], m);
            let rhs: BigInt = Pow::pow(BigInt::from(n - kz), m - 1) * &t[m as usize - 1];
            lhs <= rhs
        });
        checks.push(JllCheck {
            m,
            lhs,
            rhs,
            satisfied: skipped || within(lhs, rhs, jll_tol),
            skipped,
            exact: exact_verdict,
        });
    }

    let mut classical = Vec::new();
    for kk in 1..=m_max {
        for m in 2..=m_max / kk {
            if let (Some(sk), Some(skm)) = (traces.get(kk), traces.get(kk * m)) {
                let lhs = sk.powi(m as i32);
                let rhs = (n as f64).powi(m as i32 - 1) * skm;
                if lhs.is_finite() && rhs.is_finite() {
                    classical.push(ClassicalJllCheck {
                        k: kk,
                        m,
                        lhs,
                        rhs,
                        satisfied: within(lhs, rhs, jll_tol),
                    });
                }
            }
        }
    }
    Ok(JllCertificate { checks, classical })
}

/// Every applicable bound for one matrix, evaluated on its unit-radius
/// normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub format_version: u32,
    pub n: usize,
    pub k: usize,
    pub spread: f64,
    /// Perron root of the matrix as given, before normalization.
    pub perron: f64,
    pub normalized: bool,
    pub spectrum_method: SpectrumMethod,
    pub cluster_tol: f64,
    pub distinct_eigenvalues: usize,
    pub bounds: BTreeMap<String, f64>,
    pub bound_strict: bool,
    pub eq2_residual: Option<f64>,
    pub jll: Vec<JllCheck>,
    pub jll_classical: Vec<ClassicalJllCheck>,
    pub pairwise_identity: f64,
    pub report_tol: f64,
    pub violations: Vec<String>,
}

impl BoundReport {
    /// Recomputes the violation list from the stored numbers.
    pub fn recheck(&self) -> Vec<String> {
        let tol = self.report_tol;
        let mut out: Vec<String> = self
            .bounds
            .iter()
            .filter(|(_, &b)| self.spread < b - tol * b.max(1.0))
            .map(|(name, _)| name.clone())
            .collect();
        if self.eq2_residual.is_some_and(|r| r < -tol) {
            out.push(EQ2_RESIDUAL.to_string());
        }
        for c in &self.jll {
            if !c.satisfied || c.exact == Some(false) {
                out.push(format!("jll_m{}", c.m));
            }
        }
        for c in &self.jll_classical {
            if !c.satisfied {
                out.push(format!("jll_classical_k{}_m{}", c.k, c.m));
            }
        }
        out
    }

    pub fn has_violations(&self) -> bool {
        !self.violations.is_empty() || !self.recheck().is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Spectrum of the unit-radius normalization together with the Perron root
/// of the matrix as given.
pub fn normalized_spectrum(
    a: &NonnegativeMatrix,
    cfg: &BoundsConfig,
) -> Result<(Spectrum, f64, bool)> {
    if a.is_nilpotent() {
        return Err(Error::Nilpotent);
    }
    let spectrum = spectrum_with_policy(a.dense(), a.exact(), cfg.policy, &cfg.eigen)?;
    let perron = perron_root(a, &PerronConfig::default()).value;
    if !(perron > 0.0) {
        return Err(Error::Nilpotent);
    }
    if (perron - 1.0).abs() <= cfg.radius_tol {
        return Ok((spectrum, perron, false));
    }
    let radius = match spectrum.method() {
        SpectrumMethod::ExactCharpoly => spectrum.max_modulus(),
        SpectrumMethod::Qr => perron,
    };
    Ok((spectrum.scaled(1.0 / radius), perron, true))
}

pub fn verify_bounds(a: &NonnegativeMatrix, cfg: &BoundsConfig) -> Result<BoundReport> {
    let n = a.n();
    let k = a.zero_diagonal_count();
    let (spectrum, perron, normalized) = normalized_spectrum(a, cfg)?;
    let spread = spectrum.spread();
    let distinct = distinct_eigenvalue_count(&spectrum, cfg.cluster_tol);

    let mut bounds = BTreeMap::new();
    bounds.insert(ZERO_DIAGONAL.to_string(), bound_zero_diagonal(n, k)?);
    let mut bound_strict = false;
    let mut quadratic = None;
    // A zero anywhere on the diagonal can be permuted to position (1,1)
    // without changing the spectrum.
    if n >= 2 && k >= 1 {
        let t = spread_lower_bound(n)?;
        bound_strict = t.strict;
        bounds.insert(THEOREM_PIECEWISE.to_string(), t.value);
        if distinct == 2 {
            bounds.insert(TWO_EIGENVALUE.to_string(), two_eigenvalue_bound(n)?);
        }
        if n >= 4 && spread < 1.0 {
            quadratic = Some(eq2_residual(n, spread));
        }
    }

    let scaled = if normalized {
        NonnegativeMatrix::new(a.dense().scaled(1.0 / perron))?
    } else {
        a.clone()
    };
    let mut jll = if cfg.m_max >= 2 {
        jll_certificate(&scaled, cfg.m_max, cfg.jll_tol)?
    } else {
        JllCertificate {
            checks: Vec::new(),
            classical: Vec::new(),
        }
    };
    if normalized && cfg.m_max >= 2 && a.exact().is_some() {
        // The inequalities are homogeneous, so the exact verdict of the
        // unscaled matrix carries over.
        let exact = jll_certificate(a, cfg.m_max, cfg.jll_tol)?;
        for (c, e) in jll.checks.iter_mut().zip(exact.checks) {
            c.exact = e.exact;
        }
    }

    let mut report = BoundReport {
        format_version: FORMAT_VERSION,
        n,
        k,
        spread,
        perron,
        normalized,
        spectrum_method: spectrum.method(),
        cluster_tol: cfg.cluster_tol,
        distinct_eigenvalues: distinct,
        bounds,
        bound_strict,
        eq2_residual: quadratic,
        jll: jll.checks,
        jll_classical: jll.classical,
        pairwise_identity: pairwise_identity_check(&spectrum),
        report_tol: cfg.report_tol,
        violations: Vec::new(),
    };
    report.violations = report.recheck();
    Ok(report)
}
