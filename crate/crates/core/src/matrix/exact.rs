use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::DenseMatrix;
use crate::{Error, Result};

/// Square matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn new(n: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Ok(Self { n, data })
    }

    /// Outer product `e_i e_j^T` scaled by `value`.
    pub fn unit(n: usize, i: usize, j: usize, value: impl Into<BigInt>) -> Self {
        let mut m = Self::zeros(n);
        m.data[i * n + j] = value.into();
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn check_dims(&self, other: &ExactMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_dims(other)?;
        let n = self.n;
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_dims(other)?;
        Ok(ExactMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.check_dims(other)?;
        Ok(ExactMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn exact_eq(&self, other: &ExactMatrix) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.data == other.data)
    }

    pub fn scaled(&self, factor: &BigInt) -> ExactMatrix {
        ExactMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(self.n);
        for _ in 0..exp {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self.data[i * self.n + i]).sum()
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let data = self
            .data
            .iter()
            .map(|v| v.to_f64().ok_or(Error::NumericOverflow))
            .collect::<Result<Vec<_>>>()?;
        DenseMatrix::new(self.n, data)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::io::write_exact(f, self)
    }
}

/// Rational matrix `numer / denom` with a single positive common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    numer: ExactMatrix,
    denom: BigInt,
}

impl RationalMatrix {
    pub fn new(numer: ExactMatrix, denom: BigInt) -> Result<Self> {
        if !denom.is_positive() {
            return Err(Error::InvalidArgument(
                "denominator must be positive".into(),
            ));
        }
        Ok(Self { numer, denom })
    }

    /// Builds the matrix from per-entry rationals, bringing them over the
    /// least common denominator.
    pub fn from_entries(n: usize, entries: &[BigRational]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let denom = entries
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let data = entries
            .iter()
            .map(|q| q.numer() * (&denom / q.denom()))
            .collect();
        Ok(Self {
            numer: ExactMatrix::new(n, data)?,
            denom,
        })
    }

    pub fn from_integer(numer: ExactMatrix) -> Self {
        Self {
            numer,
            denom: BigInt::one(),
        }
    }

    pub fn n(&self) -> usize {
        self.numer.n()
    }

    pub fn numer(&self) -> &ExactMatrix {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.numer[(i, j)].clone(), self.denom.clone())
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.n();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.entry(i, j).to_f64().ok_or(Error::NumericOverflow)?);
            }
        }
        DenseMatrix::new(n, data)
    }
}
