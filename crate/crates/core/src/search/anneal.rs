//! Simulated annealing with single-coordinate moves and a linear cooling
//! schedule.

use rand::Rng;

#[derive(Clone, Debug)]
pub struct AnnealOptions {
    pub iterations: usize,
    /// Starting temperature; cools linearly to zero.
    pub initial_temperature: f64,
    /// Half-width of the uniform move at the start; shrinks with temperature
    /// down to `min_step`.
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for AnnealOptions {
    fn default() -> Self {
        Self {
            iterations: 1000,
            initial_temperature: 1e-2,
            initial_step: 0.1,
            min_step: 1e-4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AnnealOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

pub fn minimize<F, R>(mut f: F, x0: &[f64], opts: &AnnealOptions, rng: &mut R) -> AnnealOutcome
where
    F: FnMut(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let sanitize = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let mut x = x0.to_vec();
    let mut fx = sanitize(f(&x));
    let mut best = (x.clone(), fx);
    let mut evaluations = 1;
    if x.is_empty() {
        return AnnealOutcome {
            x: best.0,
            value: best.1,
            evaluations,
        };
    }
    let total = opts.iterations.max(1);
    while evaluations < total {
        let frac = 1.0 - evaluations as f64 / total as f64;
        let temperature = opts.initial_temperature * frac;
        let step = (opts.initial_step * frac).max(opts.min_step);

        let i = rng.random_range(0..x.len());
        let old = x[i];
        x[i] += step * (2.0 * rng.random::<f64>() - 1.0);
        let fy = sanitize(f(&x));
        evaluations += 1;

        let accept = fy <= fx
            || (temperature > 0.0
                && fy.is_finite()
                && rng.random::<f64>() < (-(fy - fx) / temperature).exp());
        if accept {
            fx = fy;
            if fx < best.1 {
                best = (x.clone(), fx);
            }
        } else {
            x[i] = old;
        }
    }
    AnnealOutcome {
        x: best.0,
        value: best.1,
        evaluations,
    }
}
