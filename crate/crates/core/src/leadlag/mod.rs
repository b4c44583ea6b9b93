//! The lead-lag absence test: interval partitions, overlap kernel, contrast
//! function, max-statistic, wild bootstrap and the theoretical diagnostics.

mod bootstrap;
mod contrast;
mod diagnostics;

pub use bootstrap::{bootstrap_quantile, bootstrap_statistics, p_value, test_statistic};
pub use contrast::{contrast, contrast_naive, ContrastOptions, ContrastResult, OverlapTable};
pub use diagnostics::{sigma_cross, v_n};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;
use crate::stats;

/// A half-open interval `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Data(format!("invalid interval ({lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Do two half-open intervals `(a, b]` and `(c, d]` intersect?
///
/// True iff `a < d` and `c < b`; touching at a single shared endpoint is an
/// empty intersection. Endpoint equality is honored exactly in floating
/// point, since scheme times are constructed rather than measured; see
/// [`ContrastOptions::epsilon`] for ingested real data.
pub fn overlaps(i: &Interval, j: &Interval) -> bool {
    i.lo < j.hi && j.lo < i.hi
}

/// Contiguous half-open intervals `(t_{i-1}, t_i]` built from observation
/// times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalPartition {
    intervals: Vec<Interval>,
}

impl IntervalPartition {
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Left endpoints followed by the final right endpoint.
    pub fn endpoints(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.intervals.iter().map(|i| i.lo).collect();
        if let Some(last) = self.intervals.last() {
            e.push(last.hi);
        }
        e
    }
}

/// Build the partition `{(t_{i-1}, t_i]}` from strictly increasing times.
pub fn build_partition(times: &[f64]) -> Result<IntervalPartition> {
    if times.len() < 2 {
        return Err(Error::Data(format!(
            "need at least 2 observation times to build a partition, got {}",
            times.len()
        )));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Data("observation times must be strictly increasing".into()));
    }
    Ok(IntervalPartition {
        intervals: times.windows(2).map(|w| Interval { lo: w[0], hi: w[1] }).collect(),
    })
}

/// Finite ordered set of candidate lags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagGrid {
    thetas: Vec<f64>,
}

impl LagGrid {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Config("lag grid must be nonempty".into()));
        }
        if thetas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("lag grid must be strictly increasing".into()));
        }
        Ok(LagGrid { thetas })
    }

    /// The grid `{k step : |k step| <= radius}`.
    pub fn symmetric(step: f64, radius: f64) -> Result<Self> {
        if !(step > 0.0 && radius >= 0.0) {
            return Err(Error::Config(format!(
                "lag grid needs step > 0 and radius >= 0, got step {step}, radius {radius}"
            )));
        }
        let k_max = (radius / step + 1e-9).floor() as i64;
        Ok(LagGrid {
            thetas: (-k_max..=k_max).map(|k| k as f64 * step).collect(),
        })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Multiplier distribution for the wild bootstrap. All choices have mean 0
/// and variance 1 except `Identity`, which forces every weight to 1 and
/// reproduces the plain statistic (useful for validation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplier {
    Rademacher,
    Gaussian,
    Identity,
}

/// Wild bootstrap configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Number of bootstrap replications R.
    pub replications: usize,
    pub multiplier: Multiplier,
    pub seed: Seed,
    /// Multiply statistics by sqrt(n); the test decision is invariant to
    /// this, so it defaults to off.
    pub scale_by_sqrt_n: bool,
    /// Scaling parameter n used when `scale_by_sqrt_n` is set (there is no
    /// canonical n under non-synchronous sampling, so the caller supplies
    /// it; it is echoed in reports).
    pub n_scale: usize,
    /// Cap on the precomputed overlap table, in bytes. Above the cap,
    /// replications fall back to re-sweeping the partitions.
    pub pair_cache_cap_bytes: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replications: 999,
            multiplier: Multiplier::Rademacher,
            seed: Seed::new(0),
            scale_by_sqrt_n: false,
            n_scale: 0,
            pair_cache_cap_bytes: 256 << 20,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::Config("need at least 1 bootstrap replication".into()));
        }
        if self.scale_by_sqrt_n && self.n_scale == 0 {
            return Err(Error::Config("sqrt(n) scaling requested but n_scale = 0".into()));
        }
        Ok(())
    }
}

/// Everything the lead-lag test produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    pub thetas: Vec<f64>,
    /// Contrast values U_n(theta), unscaled.
    pub contrast: Vec<f64>,
    /// Per-theta flag: no interval pair overlapped at this lag.
    pub no_overlap: Vec<bool>,
    /// The test statistic: max |U_n(theta)|, sqrt(n)-scaled iff configured.
    pub statistic: f64,
    pub sqrt_n_scaled: bool,
    pub n_scale: usize,
    /// Bootstrap statistics T*(1..R), same scaling as `statistic`.
    pub bootstrap_statistics: Vec<f64>,
    pub alpha: f64,
    /// The ceil((R+1)(1-alpha))-th order statistic of the bootstrap
    /// statistics; +inf when that rank exceeds R.
    #[serde(with = "crate::serde_util::float")]
    pub quantile: f64,
    /// 1-based order-statistic rank realizing the quantile (convention echo).
    pub quantile_rank: usize,
    /// Fraction of bootstrap statistics strictly above the observed one.
    pub p_value: f64,
    /// Rejection decision: p_value <= alpha.
    pub reject: bool,
    /// The lag with the largest |U_n(theta)|.
    pub argmax_theta: f64,
    pub multiplier: Multiplier,
    pub replications: usize,
    pub seed: Seed,
    pub overlap_epsilon: f64,
}

/// Run the complete test: contrast, statistic, bootstrap, quantile, p-value.
pub fn run_test(
    path: &crate::sim::PathPair,
    grid: &LagGrid,
    alpha: f64,
    cfg: &BootstrapConfig,
    opts: &ContrastOptions,
) -> Result<TestReport> {
    cfg.validate()?;
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must be in (0, 1), got {alpha}")));
    }
    path.validate()?;

    let result = contrast(path, grid, opts)?;
    let statistic = test_statistic(&result.values, cfg.n_scale, cfg.scale_by_sqrt_n)?;
    let boot = bootstrap_statistics(path, grid, cfg, opts)?;
    let quantile = bootstrap_quantile(&boot, alpha)?;
    let p = p_value(statistic, &boot);

    let argmax = result
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(k, _)| result.thetas[k])
        .unwrap_or(f64::NAN);

    Ok(TestReport {
        thetas: result.thetas,
        contrast: result.values,
        no_overlap: result.no_overlap,
        statistic,
        sqrt_n_scaled: cfg.scale_by_sqrt_n,
        n_scale: cfg.n_scale,
        bootstrap_statistics: boot,
        alpha,
        quantile,
        quantile_rank: stats::quantile_rank(cfg.replications, alpha),
        p_value: p,
        reject: p <= alpha,
        argmax_theta: argmax,
        multiplier: cfg.multiplier,
        replications: cfg.replications,
        seed: cfg.seed,
        overlap_epsilon: opts.epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_three_times() {
        let p = build_partition(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(p.intervals(), &[Interval { lo: 0.0, hi: 0.5 }, Interval { lo: 0.5, hi: 1.0 }]);
    }

    #[test]
    fn partition_of_two_times_is_single_interval() {
        let p = build_partition(&[0.0, 1.0]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.intervals()[0], Interval { lo: 0.0, hi: 1.0 });
    }

    #[test]
    fn partition_from_equidistant_quarters() {
        let s = crate::sim::SamplingScheme::equidistant(0.25, 1.0).unwrap();
        let p = build_partition(&s.times1).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.intervals().iter().all(|i| (i.width() - 0.25).abs() < 1e-15));
    }

    #[test]
    fn non_monotone_times_are_a_data_error() {
        assert!(matches!(build_partition(&[0.0, 0.5, 0.4]), Err(Error::Data(_))));
    }

    #[test]
    fn touching_intervals_do_not_overlap() {
        let a = Interval { lo: 0.0, hi: 0.5 };
        let b = Interval { lo: 0.5, hi: 1.0 };
        assert!(!overlaps(&a, &b));
        let c = Interval { lo: -0.5, hi: 0.0 };
        assert!(!overlaps(&a, &c));
    }

    #[test]
    fn interior_intersection_overlaps() {
        let a = Interval { lo: 0.0, hi: 0.5 };
        let b = Interval { lo: 0.4, hi: 0.9 };
        assert!(overlaps(&a, &b));
        assert!(overlaps(&b, &a));
    }

    #[test]
    fn symmetric_grid_covers_radius() {
        let g = LagGrid::symmetric(1e-3, 0.3).unwrap();
        assert_eq!(g.len(), 601);
        assert_eq!(g.thetas()[0], -0.3);
        assert_eq!(*g.thetas().last().unwrap(), 0.3);
        let g = LagGrid::symmetric(6e-3, 0.3).unwrap();
        assert_eq!(g.len(), 101);
    }

    #[test]
    fn grids_must_increase() {
        assert!(LagGrid::new(vec![0.0, 0.0]).is_err());
        assert!(LagGrid::new(vec![]).is_err());
        assert!(LagGrid::new(vec![-0.1, 0.0, 0.1]).is_ok());
    }
}
