//! Wild bootstrap for the max-contrast statistic.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::leadlag::{build_partition, BootstrapConfig, ContrastOptions, LagGrid, Multiplier, OverlapTable};
use crate::sim::PathPair;
use crate::stats;

/// The test statistic: `max_theta |U_n(theta)|`, multiplied by `sqrt(n)`
/// iff `scale` is set (`n` is the caller-supplied scaling parameter; the
/// test decision is invariant to it).
pub fn test_statistic(contrast_values: &[f64], n: usize, scale: bool) -> Result<f64> {
    if contrast_values.is_empty() {
        return Err(Error::Data("empty contrast vector".into()));
    }
    let max = contrast_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(if scale { (n as f64).sqrt() * max } else { max })
}

/// Bootstrap statistics `T*(1..R)`.
///
/// Replication `r` multiplies the increments of each asset by independent
/// weights (one per interval) drawn from `cfg.multiplier` using substream
/// `r` of `cfg.seed`, and records `max_theta |U*_n(theta)|` under the same
/// scaling as the main statistic. The overlap runs are precomputed once and
/// shared across replications (falling back to per-replication sweeps above
/// the configured memory cap), and the vector is ordered by replication
/// index, so results do not depend on scheduling.
pub fn bootstrap_statistics(
    path: &PathPair,
    grid: &LagGrid,
    cfg: &BootstrapConfig,
    opts: &ContrastOptions,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    path.validate()?;
    let p1 = build_partition(&path.scheme.times1)?;
    let p2 = build_partition(&path.scheme.times2)?;
    let d1 = path.increments1();
    let d2 = path.increments2();
    let scale = if cfg.scale_by_sqrt_n {
        (cfg.n_scale as f64).sqrt()
    } else {
        1.0
    };

    let table = OverlapTable::build(&p1, &p2, grid, opts, cfg.pair_cache_cap_bytes);

    let stats: Vec<f64> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.seed.child(r as u64).rng();
            let mut y1 = vec![0.0f64; d1.len()];
            let mut y2 = vec![0.0f64; d2.len()];
            // Asset-1 weights are drawn before asset-2 weights, in interval order.
            for (y, d) in y1.iter_mut().zip(&d1) {
                *y = draw_weight(&mut rng, cfg.multiplier) * d;
            }
            for (y, d) in y2.iter_mut().zip(&d2) {
                *y = draw_weight(&mut rng, cfg.multiplier) * d;
            }
            scale * table.max_abs_weighted(&y1, &y2)
        })
        .collect();
    Ok(stats)
}

fn draw_weight<R: Rng>(rng: &mut R, multiplier: Multiplier) -> f64 {
    match multiplier {
        Multiplier::Rademacher => {
            if rng.random::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
        Multiplier::Gaussian => rng.sample(StandardNormal),
        Multiplier::Identity => 1.0,
    }
}

/// The `ceil((R+1)(1-alpha))`-th order statistic of the bootstrap
/// statistics; `+inf` when that rank exceeds R (alpha too small for R).
pub fn bootstrap_quantile(bootstrap_stats: &[f64], alpha: f64) -> Result<f64> {
    stats::order_statistic_quantile(bootstrap_stats, alpha)
}

/// The bootstrap p-value: the fraction of replications with `T*(r) > T`.
/// Rejection at level alpha is `p <= alpha`.
pub fn p_value(statistic: f64, bootstrap_stats: &[f64]) -> f64 {
    let above = bootstrap_stats.iter().filter(|&&t| t > statistic).count();
    above as f64 / bootstrap_stats.len() as f64
}
