//! Real nonsymmetric eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, and Francis double-shift QR with deflation.

use num_complex::Complex64;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

const RADIX: f64 = 2.0;

/// Row-major working copy with 1-based accessors; keeps the index arithmetic
/// of the QR sweep close to its textbook form.
struct Work {
    n: usize,
    a: Vec<f64>,
}

impl Work {
    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[(i - 1) * self.n + (j - 1)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[(i - 1) * self.n + (j - 1)] = v;
    }

    #[inline]
    fn sub(&mut self, i: usize, j: usize, v: f64) {
        self.a[(i - 1) * self.n + (j - 1)] -= v;
    }
}

/// Diagonal similarity by powers of two so that row and column norms are
/// comparable. Exact in floating point.
fn balance(w: &mut Work) {
    let n = w.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 1..=n {
                if j != i {
                    c += w.get(j, i).abs();
                    r += w.get(i, j).abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 1..=n {
                    let v = w.get(i, j) * g;
                    w.set(i, j, v);
                }
                for j in 1..=n {
                    let v = w.get(j, i) * f;
                    w.set(j, i, v);
                }
            }
        }
    }
}

/// Householder similarity transforms zeroing everything below the first
/// subdiagonal.
fn hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n + 1];
    for k in 1..=n - 2 {
        let scale: f64 = (k + 1..=n).map(|i| w.get(i, k).abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in k + 1..=n {
            v[i] = w.get(i, k) / scale;
            h += v[i] * v[i];
        }
        let g = if v[k + 1] > 0.0 { -h.sqrt() } else { h.sqrt() };
        h -= v[k + 1] * g;
        v[k + 1] -= g;
        // Left: rows k+1..n of columns k..n.
        for j in k..=n {
            let f: f64 = (k + 1..=n).map(|i| v[i] * w.get(i, j)).sum::<f64>() / h;
            for i in k + 1..=n {
                w.sub(i, j, f * v[i]);
            }
        }
        // Right: columns k+1..n of all rows.
        for i in 1..=n {
            let f: f64 = (k + 1..=n).map(|j| v[j] * w.get(i, j)).sum::<f64>() / h;
            for j in k + 1..=n {
                w.sub(i, j, f * v[j]);
            }
        }
        w.set(k + 1, k, scale * g);
        for i in k + 2..=n {
            w.set(i, k, 0.0);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct QrOutcome {
    /// Largest subdiagonal magnitude discarded at a deflation, or the
    /// rounding floor `eps * ||H||`, whichever is larger.
    pub achieved_tol: f64,
}

/// Eigenvalues of a real matrix, `max_iter` QR sweeps allowed per eigenvalue.
pub(crate) fn eigenvalues(
    m: &DenseMatrix,
    balance_first: bool,
    max_iter: usize,
) -> Result<(Vec<Complex64>, QrOutcome)> {
    let n = m.n();
    let mut w = Work {
        n,
        a: m.as_slice().to_vec(),
    };
    if balance_first {
        balance(&mut w);
    }
    hessenberg(&mut w);

    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += w.get(i, j).abs();
        }
    }
    let mut achieved = f64::EPSILON * anorm;

    let mut nn = n as isize;
    let mut t = 0.0;
    let partial = |wr: &[f64], wi: &[f64], nn: isize| -> Vec<Complex64> {
        ((nn + 1) as usize..=n)
            .map(|i| Complex64::new(wr[i], wi[i]))
            .collect()
    };

    while nn >= 1 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = nu;
            while l >= 2 {
                let mut s = w.get(l - 1, l - 1).abs() + w.get(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                let sub = w.get(l, l - 1).abs();
                if sub + s == s {
                    achieved = achieved.max(sub);
                    w.set(l, l - 1, 0.0);
                    break;
                }
                l -= 1;
            }
            let mut x = w.get(nu, nu);
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
            } else {
                let mut y = w.get(nu - 1, nu - 1);
                let mut ww = w.get(nu, nu - 1) * w.get(nu - 1, nu);
                if l == nu - 1 {
                    // Closed-form 2x2 block.
                    let p = 0.5 * (y - x);
                    let q = p * p + ww;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + z.copysign(p);
                        wr[nu - 1] = x + z;
                        wr[nu] = x + z;
                        if z != 0.0 {
                            wr[nu] = x - ww / z;
                        }
                        wi[nu - 1] = 0.0;
                        wi[nu] = 0.0;
                    } else {
                        wr[nu - 1] = x + p;
                        wr[nu] = x + p;
                        wi[nu - 1] = z;
                        wi[nu] = -z;
                    }
                    nn -= 2;
                } else {
                    if its == max_iter {
                        return Err(Error::NoConvergence {
                            iterations: its,
                            partial: partial(&wr, &wi, nn),
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // Exceptional shift, alternating between the bottom
                        // and the top of the active window to break cycles.
                        let (centre, s) = if its % 20 == 10 {
                            (x, w.get(nu, nu - 1).abs() + w.get(nu - 1, nu - 2).abs())
                        } else {
                            (
                                w.get(l, l),
                                w.get(l + 1, l).abs() + w.get(l + 2, l + 1).abs(),
                            )
                        };
                        t += centre;
                        for i in 1..=nu {
                            w.sub(i, i, centre);
                        }
                        x = 0.75 * s;
                        y = x;
                        ww = -0.4375 * s * s;
                    }
                    its += 1;
                    francis_step(&mut w, l, nu, x, y, ww);
                }
            }
            if nn < 1 || l as isize >= nn - 1 {
                break;
            }
        }
    }

    let mut out: Vec<Complex64> = (1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect();
    out.reverse();
    Ok((
        out,
        QrOutcome {
            achieved_tol: achieved,
        },
    ))
}

/// One implicit double-shift sweep on the active window `l..=nu`.
fn francis_step(w: &mut Work, l: usize, nu: usize, mut x: f64, mut y: f64, ww: f64) {
    let (mut p, mut q, mut r, mut z);
    // Look for two consecutive small subdiagonal elements.
    let mut m = nu - 2;
    loop {
        z = w.get(m, m);
        r = x - z;
        let s0 = y - z;
        p = (r * s0 - ww) / w.get(m + 1, m) + w.get(m, m + 1);
        q = w.get(m + 1, m + 1) - z - r - s0;
        r = w.get(m + 2, m + 1);
        let s = p.abs() + q.abs() + r.abs();
        p /= s;
        q /= s;
        r /= s;
        if m == l {
            break;
        }
        let u = w.get(m, m - 1).abs() * (q.abs() + r.abs());
        let v = p.abs() * (w.get(m - 1, m - 1).abs() + z.abs() + w.get(m + 1, m + 1).abs());
        if u + v == v {
            break;
        }
        m -= 1;
    }
    for i in m + 2..=nu {
        w.set(i, i - 2, 0.0);
        if i != m + 2 {
            w.set(i, i - 3, 0.0);
        }
    }
    let mut k = m;
    while k < nu {
        if k != m {
            p = w.get(k, k - 1);
            q = w.get(k + 1, k - 1);
            r = if k != nu - 1 {
                w.get(k + 2, k - 1)
            } else {
                0.0
            };
            x = p.abs() + q.abs() + r.abs();
            if x != 0.0 {
                p /= x;
                q /= x;
                r /= x;
            }
        }
        let s = (p * p + q * q + r * r).sqrt().copysign(p);
        if s != 0.0 {
            if k == m {
                if l != m {
                    let v = -w.get(k, k - 1);
                    w.set(k, k - 1, v);
                }
            } else {
                w.set(k, k - 1, -s * x);
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for j in k..=nu {
                let mut pp = w.get(k, j) + q * w.get(k + 1, j);
                if k != nu - 1 {
                    pp += r * w.get(k + 2, j);
                    w.sub(k + 2, j, pp * z);
                }
                w.sub(k + 1, j, pp * y);
                w.sub(k, j, pp * x);
            }
            let mmin = nu.min(k + 3);
            for i in l..=mmin {
                let mut pp = x * w.get(i, k) + y * w.get(i, k + 1);
                if k != nu - 1 {
                    pp += z * w.get(i, k + 2);
                    w.sub(i, k + 2, pp * r);
                }
                w.sub(i, k + 1, pp * q);
                w.sub(i, k, pp);
            }
        }
        k += 1;
    }
}
