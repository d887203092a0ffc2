mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spreadlab_core::constructions::Which;
use spreadlab_core::search::Method;

/// Spectral spread of nonnegative matrices with a zero diagonal entry.
#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a member of the extremal family in the matrix text format.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "A")]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues, spread and Perron root of a matrix file, as JSON.
    Spectrum {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every applicable spread bound for a matrix file, or recheck a
    /// saved report.
    Bounds {
        #[arg(long, required_unless_present = "report", conflicts_with = "report")]
        file: Option<PathBuf>,
        /// Recompute the violation list of an existing report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        /// Relative tolerance for bound and trace checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact similarity certificate for the extremal family.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the spread over one dimension; writes a JSON report.
    Search {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search every dimension in a range; writes CSV.
    Sweep {
        /// Inclusive range such as `2..8`, or a single dimension.
        #[arg(long)]
        n: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Objective evaluations per restart.
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value = "nelder_mead")]
    method: Method,
    /// Slack below the bound tolerated before a finding is reported.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    spreadlab_core::parallel::init_from_env();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
