//! The extremal two-eigenvalue family and its exact similarity certificate.
//!
//! For `n >= 2` the integer matrix `A` is similar to the upper bidiagonal
//! `U` with diagonal `(2(n-1), n-2, ..., n-2)` through the unit lower
//! triangular `S = (I+N)(I-N)^{-1}`, where `N` is the subdiagonal shift. The
//! certificate is the exact identity `S U - A S = 0`; scaling `A` by
//! `1/(2(n-1))` gives a member of `C_n` with spectrum
//! `{1, (n-2)/(2(n-1)) x (n-1)}` and spread `n/(2(n-1))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::{ExactMatrix, NonnegativeMatrix, RationalMatrix};
use crate::{Error, Result, FORMAT_VERSION};

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "construction needs n >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Subdiagonal 0/1 shift `N`.
pub fn build_n(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n);
    for i in 1..n {
        m[(i, i - 1)] = BigInt::one();
    }
    m
}

/// Superdiagonal `n-1, n-2, ..., 1`.
pub fn build_m(n: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n);
    for i in 0..n.saturating_sub(1) {
        m[(i, i + 1)] = BigInt::from(n - 1 - i);
    }
    m
}

/// Superdiagonal `a_{i,i+1} = n-i`, diagonal `n` except `a_11 = 0`, and `2`
/// wherever the row index exceeds the column index by a positive even number
/// (1-based).
pub fn build_a(n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    let mut a = ExactMatrix::zeros(n);
    let mut placed = vec![false; n * n];
    let mut place = |a: &mut ExactMatrix, i: usize, j: usize, v: usize| -> Result<()> {
        if std::mem::replace(&mut placed[i * n + j], true) {
            return Err(Error::ConstructionCollision {
                row: i + 1,
                col: j + 1,
            });
        }
        a[(i, j)] = BigInt::from(v);
        Ok(())
    };
    for i in 0..n - 1 {
        place(&mut a, i, i + 1, n - 1 - i)?;
    }
    for i in 1..n {
        place(&mut a, i, i, n)?;
    }
    for i in 0..n {
        for j in 0..i {
            if (i - j) % 2 == 0 {
                place(&mut a, i, j, 2)?;
            }
        }
    }
    Ok(a)
}

/// Upper bidiagonal with `u_{i,i+1} = n-i`, `u_11 = 2(n-1)`, `u_ii = n-2`.
pub fn build_u(n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    let mut u = build_m(n);
    u[(0, 0)] = BigInt::from(2 * (n - 1));
    for i in 1..n {
        u[(i, i)] = BigInt::from(n - 2);
    }
    Ok(u)
}

/// `I + 2N + 2N^2 + ... + 2N^(n-1)`, checked against `(I - N) S = I + N`.
pub fn build_s(n: usize) -> Result<ExactMatrix> {
    check_n(n)?;
    let shift = build_n(n);
    let two = BigInt::from(2);
    let mut s = ExactMatrix::identity(n);
    let mut power = ExactMatrix::identity(n);
    for _ in 1..n {
        power = power.mul(&shift)?;
        s = s.add(&power.scaled(&two))?;
    }
    if !series_identity_holds(&shift, &s)? {
        return Err(Error::Verification("(I - N) S != I + N".into()));
    }
    Ok(s)
}

fn series_identity_holds(shift: &ExactMatrix, s: &ExactMatrix) -> Result<bool> {
    let id = ExactMatrix::identity(shift.n());
    id.sub(shift)?.mul(s)?.exact_eq(&id.add(shift)?)
}

/// Exact check of `[N^k, M] = k N^(k-1) - n e_k e_1^T` for `1 <= k <= n`.
pub fn commutator_identity_check(n: usize, k: usize) -> Result<bool> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let shift = build_n(n);
    let m = build_m(n);
    let nk = shift.pow(k as u32);
    let lhs = nk.mul(&m)?.sub(&m.mul(&nk)?)?;
    let rhs = shift
        .pow(k as u32 - 1)
        .scaled(&BigInt::from(k))
        .sub(&ExactMatrix::unit(n, k - 1, 0, n))?;
    lhs.exact_eq(&rhs)
}

/// Exact check of `S U - A S = 0`.
pub fn verify_similarity(n: usize) -> Result<bool> {
    let a = build_a(n)?;
    let u = build_u(n)?;
    let s = build_s(n)?;
    Ok(s.mul(&u)?.sub(&a.mul(&s)?)?.is_zero())
}

/// All five matrices of the construction for one `n`.
#[derive(Clone, Debug)]
pub struct ExtremalFamily {
    pub n: usize,
    pub a: ExactMatrix,
    pub u: ExactMatrix,
    pub shift: ExactMatrix,
    pub m: ExactMatrix,
    pub s: ExactMatrix,
}

impl ExtremalFamily {
    pub fn build(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            a: build_a(n)?,
            u: build_u(n)?,
            shift: build_n(n),
            m: build_m(n),
            s: build_s(n)?,
        })
    }

    pub fn get(&self, which: Which) -> &ExactMatrix {
        match which {
            Which::A => &self.a,
            Which::U => &self.u,
            Which::N => &self.shift,
            Which::M => &self.m,
            Which::S => &self.s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    A,
    U,
    N,
    M,
    S,
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Which::A),
            "U" => Ok(Which::U),
            "N" => Ok(Which::N),
            "M" => Ok(Which::M),
            "S" => Ok(Which::S),
            _ => Err(Error::InvalidArgument(format!(
                "unknown matrix {s:?}; expected A, U, N, M or S"
            ))),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Which::A => "A",
            Which::U => "U",
            Which::N => "N",
            Which::M => "M",
            Which::S => "S",
        };
        f.write_str(s)
    }
}

/// `A / (2(n-1))`, flagged as a member of `C_n` and carrying its exact form.
pub fn extremal_matrix(n: usize) -> Result<NonnegativeMatrix> {
    let exact = RationalMatrix::new(build_a(n)?, BigInt::from(2 * (n - 1)))?;
    NonnegativeMatrix::from_exact(exact)?.mark_c_n(crate::matrix::DEFAULT_RADIUS_TOL)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityCertificate {
    pub format_version: u32,
    pub n: usize,
    pub similarity_exact: bool,
    pub commutators_exact: bool,
    pub series_identity_exact: bool,
}

impl SimilarityCertificate {
    pub fn holds(&self) -> bool {
        self.similarity_exact && self.commutators_exact && self.series_identity_exact
    }
}

pub fn certify(n: usize) -> Result<SimilarityCertificate> {
    check_n(n)?;
    let shift = build_n(n);
    let mut s = ExactMatrix::identity(n);
    let mut power = ExactMatrix::identity(n);
    for _ in 1..n {
        power = power.mul(&shift)?;
        s = s.add(&power.scaled(&BigInt::from(2)))?;
    }
    let series_identity_exact = series_identity_holds(&shift, &s)?;
    let similarity_exact = series_identity_exact && verify_similarity(n)?;
    let mut commutators_exact = true;
    for k in 1..=n {
        commutators_exact &= commutator_identity_check(n, k)?;
    }
    Ok(SimilarityCertificate {
        format_version: FORMAT_VERSION,
        n,
        similarity_exact,
        commutators_exact,
        series_identity_exact,
    })
}

/// True when every entry strictly below the diagonal of `s` is 2 and the
/// diagonal is 1.
pub fn is_two_series_pattern(s: &ExactMatrix) -> bool {
    let n = s.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let v = &s[(i, j)];
            match i.cmp(&j) {
                std::cmp::Ordering::Less => v.is_zero(),
                std::cmp::Ordering::Equal => v.is_one(),
                std::cmp::Ordering::Greater => *v == BigInt::from(2),
            }
        })
    })
}
