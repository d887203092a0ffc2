use super::{graph, DenseMatrix, RationalMatrix};
use crate::spectral::{perron_root, PerronConfig};
use crate::{Error, Result};

/// Default tolerance on `|r(A) - 1|` for membership in `C_n`.
pub const DEFAULT_RADIUS_TOL: f64 = 1e-9;

/// A dense matrix with every entry `>= 0`.
///
/// Optionally carries the exact rational matrix it was rounded from, so that
/// spectra of constructed or parsed matrices can be computed exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegativeMatrix {
    dense: DenseMatrix,
    exact: Option<RationalMatrix>,
    in_c_n: bool,
}

impl NonnegativeMatrix {
    pub fn new(dense: DenseMatrix) -> Result<Self> {
        let n = dense.n();
        if let Some(pos) = dense.as_slice().iter().position(|&v| v < 0.0) {
            return Err(Error::Negative {
                row: pos / n,
                col: pos % n,
                value: dense.as_slice()[pos],
            });
        }
        Ok(Self {
            dense,
            exact: None,
            in_c_n: false,
        })
    }

    /// Attaches an exact form. The rounded entries must match `dense` exactly.
    pub fn with_exact(dense: DenseMatrix, exact: RationalMatrix) -> Result<Self> {
        if exact.to_dense()? != dense {
            return Err(Error::InvalidArgument(
                "exact form does not round to the given dense matrix".into(),
            ));
        }
        let mut m = Self::new(dense)?;
        m.exact = Some(exact);
        Ok(m)
    }

    pub fn from_exact(exact: RationalMatrix) -> Result<Self> {
        let dense = exact.to_dense()?;
        let mut m = Self::new(dense)?;
        m.exact = Some(exact);
        Ok(m)
    }

    /// Sets the `C_n` flag after checking `a11 = 0` exactly and the Perron
    /// root against `radius_tol`.
    pub fn mark_c_n(mut self, radius_tol: f64) -> Result<Self> {
        if self.dense[(0, 0)] != 0.0 {
            return Err(Error::InvalidArgument("entry (1,1) is not zero".into()));
        }
        let r = perron_root(&self, &PerronConfig::default()).value;
        if (r - 1.0).abs() > radius_tol {
            return Err(Error::InvalidArgument(format!(
                "spectral radius {r} is not within {radius_tol} of 1"
            )));
        }
        self.in_c_n = true;
        Ok(self)
    }

    pub fn dense(&self) -> &DenseMatrix {
        &self.dense
    }

    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    pub fn in_c_n(&self) -> bool {
        self.in_c_n
    }

    pub fn n(&self) -> usize {
        self.dense.n()
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.dense
    }

    /// Number of diagonal entries that are exactly zero.
    pub fn zero_diagonal_count(&self) -> usize {
        self.dense.diagonal_entries().filter(|&v| v == 0.0).count()
    }

    /// Strong connectivity of the nonzero pattern.
    pub fn is_irreducible(&self) -> bool {
        graph::is_strongly_connected(&self.dense)
    }

    pub fn is_nilpotent(&self) -> bool {
        graph::pattern_is_acyclic(&self.dense)
    }

    /// Divides by the Perron root. A matrix already within `radius_tol` of
    /// unit radius is returned unchanged, so the map is idempotent.
    pub fn normalize_to_unit_radius(&self, radius_tol: f64) -> Result<NonnegativeMatrix> {
        if self.is_nilpotent() {
            return Err(Error::Nilpotent);
        }
        let r = perron_root(self, &PerronConfig::default()).value;
        if !(r > 0.0) {
            return Err(Error::Nilpotent);
        }
        let mut out = if (r - 1.0).abs() <= radius_tol {
            self.clone()
        } else {
            NonnegativeMatrix {
                dense: self.dense.scaled(1.0 / r),
                exact: None,
                in_c_n: false,
            }
        };
        out.in_c_n = out.dense[(0, 0)] == 0.0;
        Ok(out)
    }
}

/// `tr(A^m)`; for `m = 1` the diagonal sum is returned without multiplying.
pub fn trace_power(a: &DenseMatrix, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "trace power exponent must be >= 1".into(),
        ));
    }
    if m == 1 {
        return Ok(a.trace());
    }
    let mut power = a.clone();
    for _ in 1..m {
        power = power.matmul(a)?;
    }
    let t = power.trace();
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::NumericOverflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn(rows: &[[f64; 2]]) -> NonnegativeMatrix {
        NonnegativeMatrix::new(DenseMatrix::from_rows(rows).unwrap()).unwrap()
    }

    fn witness() -> DenseMatrix {
        DenseMatrix::from_rows(&[[0.0, 2.0, 0.0], [0.0, 3.0, 1.0], [2.0, 0.0, 3.0]])
            .unwrap()
            .scaled(0.25)
    }

    #[test]
    fn negative_entries_are_rejected() {
        let d = DenseMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            NonnegativeMatrix::new(d),
            Err(Error::Negative { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn zero_diagonal_counts() {
        assert_eq!(nn(&[[0.0, 0.0], [0.0, 1.0]]).zero_diagonal_count(), 1);
        let w = NonnegativeMatrix::new(witness()).unwrap();
        assert_eq!(w.zero_diagonal_count(), 1);
        let z = NonnegativeMatrix::new(DenseMatrix::zeros(6)).unwrap();
        assert_eq!(z.zero_diagonal_count(), 6);
    }

    #[test]
    fn trace_powers() {
        assert_eq!(trace_power(&witness(), 1).unwrap(), 1.5);
        for m in 1..5 {
            assert_eq!(trace_power(&DenseMatrix::identity(4), m).unwrap(), 4.0);
        }
        let a = DenseMatrix::from_rows(&[[0.0, 4.0], [1.0, 0.0]]).unwrap();
        assert_eq!(trace_power(&a, 2).unwrap(), 8.0);
        assert!(trace_power(&a, 0).is_err());
    }

    #[test]
    fn trace_power_overflow() {
        let a = DenseMatrix::identity(2).scaled(1e200);
        assert!(matches!(trace_power(&a, 3), Err(Error::NumericOverflow)));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(nn(&[[0.0, 1.0], [1.0, 0.0]]).is_irreducible());
        assert!(!nn(&[[0.0, 0.0], [0.0, 1.0]]).is_irreducible());
        let one = NonnegativeMatrix::new(DenseMatrix::zeros(1)).unwrap();
        assert!(one.is_irreducible());
    }

    #[test]
    fn normalization_examples() {
        let a = nn(&[[0.0, 4.0], [1.0, 0.0]]);
        let b = a.normalize_to_unit_radius(DEFAULT_RADIUS_TOL).unwrap();
        let expected = [[0.0, 2.0], [0.5, 0.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((b.dense()[(i, j)] - expected[i][j]).abs() < 1e-12);
            }
        }
        assert!(b.in_c_n());
        let c = b.normalize_to_unit_radius(DEFAULT_RADIUS_TOL).unwrap();
        assert_eq!(c, b);

        let upper = nn(&[[0.0, 3.0], [0.0, 0.0]]);
        assert!(matches!(
            upper.normalize_to_unit_radius(DEFAULT_RADIUS_TOL),
            Err(Error::Nilpotent)
        ));
    }

    #[test]
    fn mark_c_n_checks_both_conditions() {
        assert!(nn(&[[0.0, 0.0], [0.0, 1.0]])
            .mark_c_n(1e-9)
            .unwrap()
            .in_c_n());
        assert!(nn(&[[1.0, 0.0], [0.0, 0.0]]).mark_c_n(1e-9).is_err());
        assert!(nn(&[[0.0, 0.0], [0.0, 2.0]]).mark_c_n(1e-9).is_err());
    }
}
