//! The kernel spot-volatility estimator and its standard-error proxy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spotvol::Kernel;

/// Observations of a single asset on the equidistant grid `t_i = T i / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleAssetPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl SingleAssetPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let path = SingleAssetPath { times, values };
        path.validate()?;
        Ok(path)
    }

    /// Check the `t_i = T i / n` structure; returns `(n, T)`.
    pub fn validate(&self) -> Result<(usize, f64)> {
        if self.times.len() != self.values.len() {
            return Err(Error::Dimension {
                expected: self.times.len(),
                actual: self.values.len(),
            });
        }
        if self.times.len() < 2 {
            return Err(Error::Data("need at least 2 observations".into()));
        }
        let n = self.times.len() - 1;
        let horizon = *self.times.last().unwrap();
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Data(format!("horizon T = {horizon} must be positive")));
        }
        let tol = 1e-9 * horizon;
        for (i, &t) in self.times.iter().enumerate() {
            let expected = horizon * i as f64 / n as f64;
            if (t - expected).abs() > tol {
                return Err(Error::Data(format!(
                    "non-equidistant input: time[{i}] = {t}, expected {expected} on the T i/n grid"
                )));
            }
        }
        Ok((n, horizon))
    }

    pub fn increments(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Indices `i` (1-based observation intervals, 0-based into increment
/// arrays) whose left endpoint `t_{i-1}` falls in the kernel window
/// `[t - h, t + h]`.
fn window(n: usize, horizon: f64, t: f64, h: f64) -> std::ops::Range<usize> {
    let step = horizon / n as f64;
    let lo = ((t - h) / step).ceil().max(0.0) as usize;
    let hi = (((t + h) / step).floor() as isize + 1).clamp(0, n as isize) as usize;
    lo.min(n)..hi
}

/// The kernel estimator
/// `sigma_hat^2(t) = sum_i K_h(t_{i-1} - t) (X_{t_i} - X_{t_{i-1}})^2`.
pub fn spot_estimate_at(path: &SingleAssetPath, kernel: Kernel, h: f64, t: f64) -> Result<f64> {
    let (n, horizon) = path.validate()?;
    let inv_h = 1.0 / h;
    let mut acc = 0.0;
    for i in window(n, horizon, t, h * kernel.support_radius()) {
        let d = path.values[i + 1] - path.values[i];
        acc += kernel.eval((path.times[i] - t) * inv_h) * inv_h * d * d;
    }
    Ok(acc)
}

/// `sigma_hat^2` on a whole evaluation grid.
pub fn spot_estimate(path: &SingleAssetPath, kernel: Kernel, h: f64, eval_times: &[f64]) -> Result<Vec<f64>> {
    eval_times
        .iter()
        .map(|&t| spot_estimate_at(path, kernel, h, t))
        .collect()
}

/// The standard-error proxy
/// `s_n(t) = sqrt( (2 / n^2) sum_i K_h(t_{i-1} - t)^2 )`, an exact finite
/// sum over the sample times.
pub fn s_n(t: f64, times: &[f64], h: f64, kernel: Kernel) -> f64 {
    let n = times.len() - 1;
    let horizon = times[n];
    let inv_h = 1.0 / h;
    let mut acc = 0.0;
    for i in window(n, horizon, t, h * kernel.support_radius()) {
        let k = kernel.eval((times[i] - t) * inv_h) * inv_h;
        acc += k * k;
    }
    (2.0 * acc).sqrt() / n as f64
}
