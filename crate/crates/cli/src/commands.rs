use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use spreadlab_core::bounds::{verify_bounds, BoundReport, BoundsConfig};
use spreadlab_core::constructions::{certify, ExtremalFamily};
use spreadlab_core::io::{format_exact, read_matrix_file};
use spreadlab_core::search::{minimize_spread, sweep_experiment, write_sweep_csv, SearchConfig};
use spreadlab_core::spectral::{
    perron_root, spectrum_with_policy, EigenConfig, PerronConfig, SpectrumMethod, SpectrumPolicy,
};
use spreadlab_core::{NonnegativeMatrix, FORMAT_VERSION};

use crate::{Command, SearchArgs};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(spreadlab_core::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<spreadlab_core::Error> for Failure {
    fn from(e: spreadlab_core::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Core(e.into()))?;
    s.push('\n');
    Ok(s)
}

fn load(path: &Path) -> Result<NonnegativeMatrix, Failure> {
    let parsed = read_matrix_file(path)?;
    Ok(NonnegativeMatrix::with_exact(parsed.dense, parsed.exact)?)
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Construct { n, which, out } => {
            let family = ExtremalFamily::build(n)?;
            emit(out.as_deref(), &format_exact(family.get(which)))?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { file, out } => spectrum(&file, out.as_deref()),
        Command::Bounds {
            file,
            report,
            m_max,
            tol,
            out,
        } => match (file, report) {
            (Some(file), None) => bounds(&file, m_max, tol, out.as_deref()),
            (None, Some(report)) => recheck(&report, out.as_deref()),
            _ => Err(Failure::Usage(
                "exactly one of --file or --report is required".into(),
            )),
        },
        Command::Verify { n, out } => {
            let cert = certify(n)?;
            emit(out.as_deref(), &to_json(&cert)?)?;
            if cert.holds() {
                Ok(EXIT_OK)
            } else {
                eprintln!("similarity certificate failed for n = {n}");
                Ok(EXIT_NUMERIC)
            }
        }
        Command::Search { n, search } => run_search(n, &search),
        Command::Sweep { n, search } => {
            let (lo, hi) = parse_range(&n)?;
            run_sweep(lo, hi, &search)
        }
    }
}

#[derive(Serialize)]
struct SpectrumOutput {
    format_version: u32,
    n: usize,
    method: SpectrumMethod,
    /// `[re, im]` pairs.
    eigenvalues: Vec<[f64; 2]>,
    spread: f64,
    spectral_radius: f64,
    perron: f64,
    max_residual: f64,
}

fn spectrum(file: &Path, out: Option<&Path>) -> Outcome {
    let a = load(file)?;
    let s = spectrum_with_policy(
        a.dense(),
        a.exact(),
        SpectrumPolicy::Auto,
        &EigenConfig::default(),
    )?;
    let output = SpectrumOutput {
        format_version: FORMAT_VERSION,
        n: a.n(),
        method: s.method(),
        eigenvalues: s.eigenvalues().iter().map(|z| [z.re, z.im]).collect(),
        spread: s.spread(),
        spectral_radius: s.max_modulus(),
        perron: perron_root(&a, &PerronConfig::default()).value,
        max_residual: s.max_residual(),
    };
    emit(out, &to_json(&output)?)?;
    Ok(EXIT_OK)
}

fn report_verdict(report: &BoundReport, violations: &[String]) -> u8 {
    if violations.is_empty() {
        EXIT_OK
    } else {
        eprintln!(
            "BOUND VIOLATION (n = {}, spread = {}): {}",
            report.n,
            report.spread,
            violations.join(", ")
        );
        EXIT_VIOLATION
    }
}

fn bounds(file: &Path, m_max: u32, tol: f64, out: Option<&Path>) -> Outcome {
    if !(tol >= 0.0) {
        return Err(Failure::Usage(format!(
            "--tol must be nonnegative, got {tol}"
        )));
    }
    let a = load(file)?;
    let cfg = BoundsConfig {
        report_tol: tol,
        jll_tol: tol,
        m_max,
        ..BoundsConfig::default()
    };
    let report = verify_bounds(&a, &cfg)?;
    emit(out, &to_json(&report)?)?;
    Ok(report_verdict(&report, &report.violations))
}

fn recheck(path: &Path, out: Option<&Path>) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    let mut report = BoundReport::from_json(&text)?;
    let mut violations = report.recheck();
    for v in &report.violations {
        if !violations.contains(v) {
            violations.push(v.clone());
        }
    }
    report.violations = violations.clone();
    emit(out, &to_json(&report)?)?;
    Ok(report_verdict(&report, &violations))
}

fn search_config(n: usize, args: &SearchArgs) -> Result<SearchConfig, Failure> {
    let cfg = SearchConfig {
        n,
        seed: args.seed,
        restarts: args.restarts,
        iters_per_restart: args.iters,
        density: args.density,
        method: args.method,
        report_tol: args.tol,
        ..SearchConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn run_search(n: usize, args: &SearchArgs) -> Outcome {
    let cfg = search_config(n, args)?;
    let result = minimize_spread(&cfg)?;
    emit(args.out.as_deref(), &to_json(&result.report(&cfg)?)?)?;
    if result.red_alert {
        eprintln!(
            "RED ALERT: n = {} best spread {} is below the bound {} (gap {})",
            n, result.best_spread, result.theoretical_bound, result.gap
        );
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}

fn run_sweep(lo: usize, hi: usize, args: &SearchArgs) -> Outcome {
    let cfg = search_config(lo, args)?;
    let rows = sweep_experiment(lo, hi, &cfg)?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))?;

    let mut code = EXIT_OK;
    for row in &rows {
        if !row.error.is_empty() {
            eprintln!("n = {}: {}", row.n, row.error);
            code = code.max(EXIT_NUMERIC);
        }
    }
    for row in rows.iter().filter(|r| r.is_alarm(args.tol)) {
        eprintln!(
            "RED ALERT: n = {} gap {:?} violations [{}]",
            row.n, row.gap, row.violations
        );
        code = EXIT_VIOLATION;
    }
    Ok(code)
}

/// `a..b` and `a..=b` are both inclusive; a bare number is a single
/// dimension.
pub fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || {
        Failure::Usage(format!(
            "invalid dimension range {text:?}, expected e.g. 2..8"
        ))
    };
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if lo < 2 || lo > hi {
        return Err(Failure::Usage(format!(
            "sweep needs 2 <= n_min <= n_max, got {text:?}"
        )));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..8").unwrap(), (2, 8));
        assert_eq!(parse_range("3..=5").unwrap(), (3, 5));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        for bad in ["1..4", "5..3", "x..3", "2...", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }
}
