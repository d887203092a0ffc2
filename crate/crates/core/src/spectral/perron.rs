//! Perron root of a nonnegative matrix by shifted power iteration, certified
//! with Collatz–Wielandt bounds.
//!
//! The matrix is split into the strongly connected components of its zero
//! pattern; the Perron root is the largest root over the irreducible diagonal
//! blocks. Each block of size >= 2 is iterated as `B + I` (after scaling so
//! that `r(B) <= 1`), which is primitive, so the bracket
//! `min_i (Bx)_i / x_i <= r(B) <= max_i (Bx)_i / x_i` closes.

use serde::Serialize;

use super::{eigenvalues, EigenConfig};
use crate::matrix::{graph, DenseMatrix, NonnegativeMatrix};

#[derive(Clone, Debug)]
pub struct PerronConfig {
    pub max_iter: usize,
    /// Relative width of the Collatz–Wielandt bracket at convergence.
    pub rel_tol: f64,
}

impl Default for PerronConfig {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            rel_tol: 1e-13,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PerronRoot {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    /// Power iteration did not close the bracket and the value came from the
    /// full eigenvalue solver.
    pub fallback: bool,
}

pub fn perron_root(a: &NonnegativeMatrix, cfg: &PerronConfig) -> PerronRoot {
    let m = a.dense();
    let mut best = PerronRoot {
        value: 0.0,
        lower: 0.0,
        upper: 0.0,
        iterations: 0,
        fallback: false,
    };
    for block in graph::strongly_connected_components(m) {
        let root = if block.len() == 1 {
            let v = m[(block[0], block[0])];
            PerronRoot {
                value: v,
                lower: v,
                upper: v,
                iterations: 0,
                fallback: false,
            }
        } else {
            block_root(m, &block, cfg)
        };
        best.iterations += root.iterations;
        best.fallback |= root.fallback;
        if root.value > best.value {
            best.value = root.value;
            best.lower = root.lower;
            best.upper = root.upper;
        }
    }
    best
}

fn block_root(m: &DenseMatrix, block: &[usize], cfg: &PerronConfig) -> PerronRoot {
    let k = block.len();
    let sub = m.principal_submatrix(block);
    // Max row sum bounds the root; scale so the unit shift is commensurate.
    let scale = (0..k)
        .map(|i| sub.row(i).iter().sum::<f64>())
        .fold(0.0, f64::max);
    let b = sub.scaled(1.0 / scale);

    let mut x = vec![1.0; k];
    let mut y = vec![0.0; k];
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for it in 1..=cfg.max_iter {
        for i in 0..k {
            y[i] = x[i] + b.row(i).iter().zip(&x).map(|(a, v)| a * v).sum::<f64>();
        }
        let (lo, hi) = y
            .iter()
            .zip(&x)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), (yi, xi)| {
                let q = yi / xi;
                (lo.min(q), hi.max(q))
            });
        lower = lower.max(lo);
        upper = upper.min(hi);
        if upper - lower <= cfg.rel_tol * upper {
            return PerronRoot {
                value: scale * (0.5 * (lower + upper) - 1.0),
                lower: scale * (lower - 1.0),
                upper: scale * (upper - 1.0),
                iterations: it,
                fallback: false,
            };
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    let value = eigenvalues(&sub, &EigenConfig::default())
        .map(|s| s.max_modulus())
        .unwrap_or(scale * (0.5 * (lower + upper) - 1.0));
    PerronRoot {
        value,
        lower: scale * (lower - 1.0),
        upper: scale * (upper - 1.0),
        iterations: cfg.max_iter,
        fallback: true,
    }
}
