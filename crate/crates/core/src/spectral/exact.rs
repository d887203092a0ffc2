//! Eigenvalues of rational matrices from the exact characteristic polynomial.
//!
//! The characteristic polynomial is computed division-free over the integers
//! (Berkowitz), split into square-free factors over the rationals (Yun), and
//! only the roots of each factor are approximated in floating point. Repeated
//! eigenvalues therefore come out with exact multiplicity, including defective
//! ones where QR iteration loses half the digits or more.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{qr, Spectrum, SpectrumMethod};
use crate::matrix::{DenseMatrix, ExactMatrix, RationalMatrix};
use crate::{Error, Result};

/// Polynomial with rational coefficients, lowest degree first, no trailing
/// zeros. The zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly(Vec<BigRational>);

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.lead().clone();
        Self(self.0.iter().map(|c| c / &lead).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Self::new(
            (0..len)
                .map(|k| self.0.get(k).unwrap_or(&zero) - other.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.0.clone();
        let Some(nd) = self.degree().filter(|&d| d >= dd) else {
            return (Self(Vec::new()), self.clone());
        };
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        let lead = divisor.lead();
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval_f64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }
}

/// `det(xI - A)` for an integer matrix, lowest degree first.
pub fn characteristic_polynomial(a: &ExactMatrix) -> Vec<BigInt> {
    let n = a.n();
    if n == 0 {
        return vec![BigInt::one()];
    }
    // Highest degree first while building.
    let mut v = vec![BigInt::one(), -a[(0, 0)].clone()];
    for r in 1..n {
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-a[(r, r)].clone());
        let mut w: Vec<BigInt> = (0..r).map(|i| a[(i, r)].clone()).collect();
        for _ in 0..r {
            let rw: BigInt = (0..r).map(|j| &a[(r, j)] * &w[j]).sum();
            t.push(-rw);
            w = (0..r)
                .map(|i| (0..r).map(|j| &a[(i, j)] * &w[j]).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &v[j]).sum())
            .collect();
        v = next;
    }
    v.reverse();
    v
}

/// Yun's square-free factorization: pairs `(factor, multiplicity)` with monic,
/// pairwise coprime, square-free factors whose product (with multiplicities)
/// is the monic version of `p`.
pub fn square_free_decomposition(p: &RationalPoly) -> Vec<(RationalPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = p.monic();
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let (mut b, _) = p.div_rem(&a0);
    let (mut c, _) = dp.div_rem(&a0);
    let mut d = c.sub(&b.derivative());
    let mut mult = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let (nb, _) = b.div_rem(&a);
        let (nc, _) = d.div_rem(&a);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, mult));
        }
        b = nb;
        c = nc;
        d = c.sub(&b.derivative());
        mult += 1;
    }
    out
}

/// Roots of a square-free monic factor given with floating coefficients.
fn factor_roots(factor: &[BigRational]) -> Result<(Vec<Complex64>, f64)> {
    let deg = factor.len() - 1;
    let to_f = |q: &BigRational| {
        q.to_f64()
            .filter(|v| v.is_finite())
            .ok_or(Error::NumericOverflow)
    };
    match deg {
        1 => {
            let root = -&factor[0] / &factor[1];
            Ok((vec![Complex64::new(to_f(&root)?, 0.0)], 0.0))
        }
        2 => {
            let b = &factor[1] / &factor[2];
            let c = &factor[0] / &factor[2];
            let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
            let bf = to_f(&b)?;
            let cf = to_f(&c)?;
            let sq = to_f(&disc.abs())?.sqrt();
            if disc.is_negative() {
                let re = -0.5 * bf;
                let im = 0.5 * sq;
                Ok((vec![Complex64::new(re, im), Complex64::new(re, -im)], 0.0))
            } else {
                let q = -0.5 * (bf + sq.copysign(bf));
                let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q, cf / q) };
                Ok((vec![Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)], 0.0))
            }
        }
        _ => {
            let lead = &factor[deg];
            let monic: Vec<f64> = factor
                .iter()
                .map(|c| to_f(&(c / lead)))
                .collect::<Result<_>>()?;
            let mut companion = DenseMatrix::zeros(deg);
            for j in 0..deg {
                companion[(0, j)] = -monic[deg - 1 - j];
            }
            for i in 1..deg {
                companion[(i, i - 1)] = 1.0;
            }
            let (mut roots, _) = qr::eigenvalues(&companion, true, 40)?;
            let coeffs: Vec<Complex64> = monic.iter().map(|&c| Complex64::new(c, 0.0)).collect();
            let mut residual = 0.0f64;
            for z in roots.iter_mut() {
                let mut step_size = 0.0;
                for _ in 0..3 {
                    let (p, dp) = RationalPoly::eval_f64(&coeffs, *z);
                    if dp.is_zero() {
                        break;
                    }
                    let step = p / dp;
                    let cand = *z - step;
                    if RationalPoly::eval_f64(&coeffs, cand).0.norm() < p.norm() {
                        *z = cand;
                        step_size = step.norm();
                    } else {
                        break;
                    }
                }
                residual = residual.max(step_size);
            }
            Ok((roots, residual))
        }
    }
}

/// Eigenvalues of `numer / denom` with exact multiplicities.
pub fn exact_eigenvalues(m: &RationalMatrix) -> Result<Spectrum> {
    let n = m.n();
    let charpoly = RationalPoly::from_integers(&characteristic_polynomial(m.numer()));
    let denom = BigRational::from_integer(m.denom().clone());
    let mut eigenvalues = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for (factor, mult) in square_free_decomposition(&charpoly) {
        // Roots of the numerator matrix are denom times those of the matrix.
        let deg = factor.degree().expect("nonconstant factor");
        let scaled: Vec<BigRational> = factor
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut s = c.clone();
                for _ in k..deg {
                    s /= &denom;
                }
                s
            })
            .collect();
        let (roots, res) = factor_roots(&scaled)?;
        residual = residual.max(res);
        for z in roots {
            eigenvalues.extend(std::iter::repeat_n(z, mult));
        }
    }
    if eigenvalues.len() != n {
        return Err(Error::Verification(format!(
            "square-free factors account for {} of {n} eigenvalues",
            eigenvalues.len()
        )));
    }
    Ok(Spectrum::new(
        eigenvalues,
        residual,
        SpectrumMethod::ExactCharpoly,
    ))
}
