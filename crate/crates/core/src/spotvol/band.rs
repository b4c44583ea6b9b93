//! Uniform confidence bands for spot volatility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;
use crate::spotvol::{eval_grid, s_n, simulate_sup_gaussian_analog, spot_estimate, Kernel, SingleAssetPath};
use crate::stats;

/// Configuration for band construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotVolConfig {
    /// Bandwidth h.
    pub bandwidth: f64,
    pub kernel: Kernel,
    /// Boundary trim a_n; evaluation runs over `[a_n, T - a_n]`.
    pub boundary_trim: f64,
    /// Evaluation grid step delta; defaults to h / 20 (a grid much finer
    /// than the bandwidth adds nothing to the supremum).
    pub eval_step: Option<f64>,
    pub alpha: f64,
    /// Monte Carlo draws for the Gaussian-analog supremum.
    pub mc_draws: usize,
    pub seed: Seed,
    /// Declared Hölder exponent of the volatility path, used only for the
    /// undersmoothing diagnostics; never alters the computation.
    pub gamma: Option<f64>,
}

impl SpotVolConfig {
    pub fn eval_step(&self) -> f64 {
        self.eval_step.unwrap_or(self.bandwidth / 20.0)
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        let h = self.bandwidth;
        if !(h > 0.0 && h < horizon / 2.0) {
            return Err(Error::Config(format!("bandwidth must satisfy 0 < h < T/2, got h = {h}")));
        }
        let min_trim = h * self.kernel.support_radius();
        if self.boundary_trim <= min_trim {
            return Err(Error::Config(format!(
                "boundary trim a_n = {} must exceed bandwidth * support radius = {min_trim}",
                self.boundary_trim
            )));
        }
        let delta = self.eval_step();
        if !(delta > 0.0 && delta <= h / 20.0 + 1e-15) {
            return Err(Error::Config(format!(
                "evaluation step delta = {delta} must be positive and at most h/20 = {}",
                h / 20.0
            )));
        }
        if !(0.0 < self.alpha && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must be in (0, 1), got {}", self.alpha)));
        }
        if self.mc_draws == 0 {
            return Err(Error::Config("need at least one Monte Carlo draw".into()));
        }
        Ok(())
    }
}

/// Uniform confidence band over the evaluation grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandResult {
    pub eval_times: Vec<f64>,
    pub sigma2_hat: Vec<f64>,
    pub s_n: Vec<f64>,
    /// The (1-alpha) Monte Carlo quantile of `sup_t |Z_n(t)|`.
    pub quantile: f64,
    pub lower: Vec<f64>,
    /// Upper band; `+inf` where the band formula degenerates.
    #[serde(with = "crate::serde_util::float_vec")]
    pub upper: Vec<f64>,
    /// False exactly where `1 - s_n(t) * quantile <= 0` (upper bound
    /// undefined there).
    pub valid: Vec<bool>,
    pub alpha: f64,
    pub bandwidth: f64,
    pub kernel: Kernel,
    pub boundary_trim: f64,
    pub eval_step: f64,
    pub mc_draws: usize,
    pub seed: Seed,
}

/// The Monte Carlo quantile of the Gaussian-analog supremum for this
/// configuration. Depends on the data only through its size, so it can be
/// computed once and shared across many datasets of the same shape.
pub fn gaussian_analog_quantile(n: usize, horizon: f64, cfg: &SpotVolConfig) -> Result<f64> {
    cfg.validate(horizon)?;
    let sups = simulate_sup_gaussian_analog(
        n,
        horizon,
        cfg.bandwidth,
        cfg.kernel,
        cfg.boundary_trim,
        cfg.eval_step(),
        cfg.mc_draws,
        cfg.seed,
    )?;
    stats::order_statistic_quantile(&sups, cfg.alpha)
}

/// Assemble the band for a path given a precomputed analog quantile.
pub fn band_from_quantile(path: &SingleAssetPath, cfg: &SpotVolConfig, quantile: f64) -> Result<BandResult> {
    let (_n, horizon) = path.validate()?;
    cfg.validate(horizon)?;
    let delta = cfg.eval_step();
    let eval_times = eval_grid(cfg.boundary_trim, horizon, delta);
    if eval_times.is_empty() {
        return Err(Error::Config("empty evaluation grid after boundary trim".into()));
    }
    let sigma2_hat = spot_estimate(path, cfg.kernel, cfg.bandwidth, &eval_times)?;
    let s: Vec<f64> = eval_times
        .iter()
        .map(|&t| s_n(t, &path.times, cfg.bandwidth, cfg.kernel))
        .collect();

    let mut lower = Vec::with_capacity(eval_times.len());
    let mut upper = Vec::with_capacity(eval_times.len());
    let mut valid = Vec::with_capacity(eval_times.len());
    for (est, si) in sigma2_hat.iter().zip(&s) {
        let denom_plus = 1.0 + si * quantile;
        let denom_minus = 1.0 - si * quantile;
        lower.push(est / denom_plus);
        if denom_minus > 0.0 {
            upper.push(est / denom_minus);
            valid.push(true);
        } else {
            upper.push(f64::INFINITY);
            valid.push(false);
        }
    }

    Ok(BandResult {
        eval_times,
        sigma2_hat,
        s_n: s,
        quantile,
        lower,
        upper,
        valid,
        alpha: cfg.alpha,
        bandwidth: cfg.bandwidth,
        kernel: cfg.kernel,
        boundary_trim: cfg.boundary_trim,
        eval_step: delta,
        mc_draws: cfg.mc_draws,
        seed: cfg.seed,
    })
}

/// The full pipeline: estimate, simulate the Gaussian analog, take its
/// quantile and form the band
/// `[sigma2_hat / (1 + s_n q), sigma2_hat / (1 - s_n q)]`.
pub fn uniform_band(path: &SingleAssetPath, cfg: &SpotVolConfig) -> Result<BandResult> {
    let (n, horizon) = path.validate()?;
    let q = gaussian_analog_quantile(n, horizon, cfg)?;
    band_from_quantile(path, cfg, q)
}

/// Undersmoothing diagnostics for a declared Hölder exponent gamma: the
/// quantities `n h^{1+2 gamma} log n` and `log^6 n / (n h)`, both of which
/// should be well below 1 for the band's nominal level to be trustworthy.
pub fn undersmoothing_diagnostics(n: usize, h: f64, gamma: f64) -> (f64, f64) {
    let nf = n as f64;
    let log_n = nf.ln();
    (nf * h.powf(1.0 + 2.0 * gamma) * log_n, log_n.powi(6) / (nf * h))
}
