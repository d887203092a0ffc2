//! Plain-text matrix format.
//!
//! The first line holds `n`; each of the next `n` lines holds `n`
//! whitespace-separated decimal literals. Blank lines and lines starting with
//! `#` are ignored. Integer-valued entries are written without a decimal
//! point so integer fixtures stay byte-stable.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::matrix::{DenseMatrix, ExactMatrix, RationalMatrix};
use crate::{Error, Result};

/// A matrix read from text: the decimal literals as exact rationals and their
/// nearest doubles.
#[derive(Clone, Debug)]
pub struct ParsedMatrix {
    pub dense: DenseMatrix,
    pub exact: RationalMatrix,
}

impl ParsedMatrix {
    /// The integer matrix, when every literal was an integer.
    pub fn as_integer(&self) -> Option<&ExactMatrix> {
        self.exact.denom().is_one().then(|| self.exact.numer())
    }
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<ParsedMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<ParsedMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing dimension line".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("expected a positive integer dimension, found {header:?}"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: line_no,
            message: "dimension must be at least 1".into(),
        });
    }

    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: line_no + row + 1,
            message: format!("expected {n} rows, found {row}"),
        })?;
        let before = entries.len();
        for token in line.split_whitespace() {
            entries.push(parse_decimal(token).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("malformed number {token:?}"),
            })?);
        }
        let found = entries.len() - before;
        if found != n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {n} entries, found {found}"),
            });
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            message: "trailing content after the last row".into(),
        });
    }

    let data = entries
        .iter()
        .map(|q| {
            q.to_f64()
                .filter(|v| v.is_finite())
                .ok_or(Error::NumericOverflow)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedMatrix {
        dense: DenseMatrix::new(n, data)?,
        exact: RationalMatrix::from_entries(n, &entries)?,
    })
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` exactly.
fn parse_decimal(token: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(pos) => (&token[..pos], token[pos + 1..].parse::<i32>().ok()?),
        None => (token, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigInt::parse_bytes(all_digits.as_bytes(), 10)?;
    if negative {
        value = -value;
    }
    let scale = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        BigRational::from_integer(value * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(value, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Some(q)
}

fn format_entry(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

pub(crate) fn write_dense(f: &mut impl fmt::Write, m: &DenseMatrix) -> fmt::Result {
    writeln!(f, "{}", m.n())?;
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|&v| format_entry(v)).collect();
        writeln!(f, "{}", row.join(" "))?;
    }
    Ok(())
}

pub(crate) fn write_exact(f: &mut impl fmt::Write, m: &ExactMatrix) -> fmt::Result {
    let n = m.n();
    writeln!(f, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| m[(i, j)].to_string()).collect();
        writeln!(f, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn format_dense(m: &DenseMatrix) -> String {
    m.to_string()
}

pub fn format_exact(m: &ExactMatrix) -> String {
    m.to_string()
}

/// The rational form of a finite double, exactly.
pub fn exact_rational(v: f64) -> BigRational {
    if v == 0.0 {
        return BigRational::zero();
    }
    BigRational::from_float(v).expect("finite value")
}
