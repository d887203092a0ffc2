//! Nelder–Mead simplex minimization.

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Initial edge length of the axis-aligned simplex.
    pub step: f64,
    /// Stop when every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            step: 0.05,
            diameter_tol: 1e-10,
            max_evaluations: 1000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

struct Budget<F> {
    f: F,
    used: usize,
    max: usize,
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.used += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn exhausted(&self) -> bool {
        self.used >= self.max
    }
}

fn axis_simplex<F: FnMut(&[f64]) -> f64>(
    budget: &mut Budget<F>,
    x0: &[f64],
    f0: f64,
    step: f64,
) -> Vec<(Vec<f64>, f64)> {
    let mut simplex = vec![(x0.to_vec(), f0)];
    for i in 0..x0.len() {
        if budget.exhausted() {
            break;
        }
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = budget.eval(&x);
        simplex.push((x, fx));
    }
    simplex
}

/// Minimizes `f` from `x0`. When the simplex collapses before the budget is
/// spent, a fresh simplex is built around the best point; the run ends once
/// a rebuilt simplex fails to improve on it.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> NelderMeadOutcome {
    let dim = x0.len();
    let mut budget = Budget {
        f,
        used: 0,
        max: opts.max_evaluations.max(1),
    };
    let f0 = budget.eval(x0);
    let mut best = (x0.to_vec(), f0);
    if dim == 0 {
        return NelderMeadOutcome {
            x: best.0,
            value: best.1,
            evaluations: budget.used,
        };
    }

    while !budget.exhausted() {
        let start_value = best.1;
        let mut simplex = axis_simplex(&mut budget, &best.0, best.1, opts.step);
        if simplex.len() < dim + 1 {
            for v in simplex {
                if v.1 < best.1 {
                    best = v;
                }
            }
            break;
        }
        run_simplex(&mut budget, &mut simplex, opts);
        let top = simplex
            .into_iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty simplex");
        if top.1 < best.1 {
            best = top;
        }
        if !(best.1 < start_value) {
            break;
        }
    }
    NelderMeadOutcome {
        x: best.0,
        value: best.1,
        evaluations: budget.used,
    }
}

fn run_simplex<F: FnMut(&[f64]) -> f64>(
    budget: &mut Budget<F>,
    simplex: &mut [(Vec<f64>, f64)],
    opts: &NelderMeadOptions,
) {
    let dim = simplex.len() - 1;
    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    while !budget.exhausted() {
        // Stable sort keeps ties in insertion order, so runs are reproducible.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            return;
        }

        let mut centroid = vec![0.0; simplex[0].0.len()];
        for (x, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let (worst, f_worst) = simplex[dim].clone();
        let f_best = simplex[0].1;
        let f_second = simplex[dim - 1].1;

        let xr = combine(&centroid, &worst, -opts.reflection);
        let fr = budget.eval(&xr);
        if fr < f_best {
            if budget.exhausted() {
                simplex[dim] = (xr, fr);
                return;
            }
            let xe = combine(&centroid, &xr, opts.expansion);
            let fe = budget.eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[dim] = (xr, fr);
            continue;
        }
        if budget.exhausted() {
            return;
        }
        if fr < f_worst {
            let xc = combine(&centroid, &xr, opts.contraction);
            let fc = budget.eval(&xc);
            if fc <= fr {
                simplex[dim] = (xc, fc);
                continue;
            }
        } else {
            let xc = combine(&centroid, &worst, opts.contraction);
            let fc = budget.eval(&xc);
            if fc < f_worst {
                simplex[dim] = (xc, fc);
                continue;
            }
        }
        let best = simplex[0].0.clone();
        for vertex in simplex[1..].iter_mut() {
            if budget.exhausted() {
                return;
            }
            let x = combine(&best, &vertex.0, opts.shrink);
            let fx = budget.eval(&x);
            *vertex = (x, fx);
        }
    }
}
