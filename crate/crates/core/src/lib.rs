//! Spectral spread of nonnegative matrices with a zero diagonal entry.
//!
//! The crate computes spectra and spreads of dense real matrices, evaluates
//! the known lower bounds on the spread of matrices in the class `C_n`
//! (nonnegative, `a11 = 0`, spectral radius one), builds the extremal
//! two-eigenvalue family together with an exact integer similarity
//! certificate, and runs randomized searches for small spreads.
//!
//! Batch workloads (Monte Carlo falsification, search restarts, sweeps) run
//! on rayon when the `parallel` feature is enabled and fall back to plain
//! iteration otherwise.

pub mod bounds;
pub mod constructions;
mod error;
pub mod io;
pub mod matrix;
pub mod parallel;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, ExactMatrix, NonnegativeMatrix, RationalMatrix};
pub use spectral::Spectrum;

/// Version tag written into every JSON and CSV document.
pub const FORMAT_VERSION: u32 = 1;
