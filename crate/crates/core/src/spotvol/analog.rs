//! Monte Carlo simulation of the supremum of the Gaussian analog of the
//! studentized estimation error.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed::Seed;
use crate::spotvol::Kernel;

/// Draws per independent substream.
const DRAW_BATCH: usize = 256;

/// The evaluation grid `{a_n, a_n + delta, ...}` capped at `T - a_n`.
pub fn eval_grid(a_n: f64, horizon: f64, delta: f64) -> Vec<f64> {
    let mut ts = Vec::new();
    let mut j = 0usize;
    loop {
        let t = a_n + j as f64 * delta;
        if t > horizon - a_n + 1e-12 {
            break;
        }
        ts.push(t);
        j += 1;
    }
    ts
}

/// Standardized kernel weights per evaluation point: `Z_n(t)` is the dot
/// product of these coefficients with i.i.d. standard normals, so its
/// variance is 1 by construction at every point.
struct AnalogWeights {
    /// Per eval point: index of the first contributing increment and the
    /// normalized coefficients over its window.
    windows: Vec<(usize, Vec<f64>)>,
}

impl AnalogWeights {
    fn build(n: usize, horizon: f64, h: f64, kernel: Kernel, eval_times: &[f64]) -> Result<Self> {
        let step = horizon / n as f64;
        let inv_h = 1.0 / h;
        let sqrt2_over_n = std::f64::consts::SQRT_2 / n as f64;
        let mut windows = Vec::with_capacity(eval_times.len());
        for &t in eval_times {
            let radius = h * kernel.support_radius();
            let lo = (((t - radius) / step).ceil().max(0.0) as usize).min(n);
            let hi = ((((t + radius) / step).floor() as isize + 1).clamp(0, n as isize)) as usize;
            let mut coefs: Vec<f64> = (lo..hi)
                .map(|i| kernel.eval((i as f64 * step - t) * inv_h) * inv_h * sqrt2_over_n)
                .collect();
            let norm_sq: f64 = coefs.iter().map(|c| c * c).sum();
            if norm_sq <= 0.0 {
                return Err(Error::Config(format!(
                    "kernel support at t = {t} contains no sample points (s_n(t) = 0); \
                     increase the bandwidth or coarsen the evaluation grid"
                )));
            }
            let inv_s = 1.0 / norm_sq.sqrt();
            for c in &mut coefs {
                *c *= inv_s;
            }
            windows.push((lo, coefs));
        }
        Ok(AnalogWeights { windows })
    }
}

/// Draw `n_draws` samples of `sup_t |Z_n(t)|` over the delta-grid on
/// `[a_n, T - a_n]`, where `Z_n(t)` is the standardized kernel average of
/// i.i.d. `N(0, 2/n^2)` variables.
#[allow(clippy::too_many_arguments)]
pub fn simulate_sup_gaussian_analog(
    n: usize,
    horizon: f64,
    h: f64,
    kernel: Kernel,
    a_n: f64,
    delta: f64,
    n_draws: usize,
    seed: Seed,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Config("need n >= 2 increments".into()));
    }
    if !(h > 0.0 && delta > 0.0 && a_n >= 0.0) {
        return Err(Error::Config("bandwidth, eval step and trim must be positive".into()));
    }
    let eval_times = eval_grid(a_n, horizon, delta);
    if eval_times.is_empty() {
        return Err(Error::Config(format!(
            "empty evaluation grid: trim a_n = {a_n} leaves no points in [a_n, T - a_n]"
        )));
    }
    let weights = AnalogWeights::build(n, horizon, h, kernel, &eval_times)?;

    let n_batches = n_draws.div_ceil(DRAW_BATCH);
    let sups: Vec<f64> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = seed.child(batch as u64).rng();
            let count = DRAW_BATCH.min(n_draws - batch * DRAW_BATCH);
            let mut g = vec![0.0f64; n];
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                for gi in &mut g {
                    *gi = rng.sample(StandardNormal);
                }
                let mut sup = 0.0f64;
                for (lo, coefs) in &weights.windows {
                    let mut z = 0.0;
                    for (c, gi) in coefs.iter().zip(&g[*lo..]) {
                        z += c * gi;
                    }
                    if z.abs() > sup {
                        sup = z.abs();
                    }
                }
                out.push(sup);
            }
            out
        })
        .collect::<Vec<Vec<f64>>>()
        .concat();
    Ok(sups)
}
