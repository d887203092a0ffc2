//! Dense real and exact integer matrices, structural predicates and
//! normalization to unit spectral radius.

mod dense;
mod exact;
pub mod graph;
mod nonneg;

pub use dense::DenseMatrix;
pub use exact::{ExactMatrix, RationalMatrix};
pub use nonneg::{trace_power, NonnegativeMatrix, DEFAULT_RADIUS_TOL};
