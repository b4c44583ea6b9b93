//! Sampling maxima of centered Gaussian vectors.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::Result;
use crate::linalg;
use crate::seed::Seed;

/// Draws per independent substream; batching keeps generator setup cheap
/// while the result stays independent of thread scheduling.
const DRAW_BATCH: usize = 4096;

/// Draw `n_draws` i.i.d. samples of `max_j Z_j` (or `max_j |Z_j|` when
/// `two_sided`) for `Z ~ N(0, cov)`.
///
/// `cov` must be symmetric within 1e-10 relative tolerance and PSD up to
/// eigenvalue clipping: negatives above `-1e-8 * lambda_max` are clipped to
/// zero, anything lower is rejected.
pub fn sample_gaussian_max(
    cov: &DMatrix<f64>,
    n_draws: usize,
    seed: Seed,
    two_sided: bool,
) -> Result<Vec<f64>> {
    let factor = linalg::psd_factor(cov)?;
    Ok(sample_max_with_factor(&factor, n_draws, seed, two_sided))
}

/// Same as [`sample_gaussian_max`] but reusing a precomputed PSD factor
/// (`B B^T = cov`).
pub fn sample_max_with_factor(
    factor: &DMatrix<f64>,
    n_draws: usize,
    seed: Seed,
    two_sided: bool,
) -> Vec<f64> {
    let d = factor.nrows();
    let n_batches = n_draws.div_ceil(DRAW_BATCH);
    (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = seed.child(batch as u64).rng();
            let count = DRAW_BATCH.min(n_draws - batch * DRAW_BATCH);
            let mut out = Vec::with_capacity(count);
            let mut z = vec![0.0f64; d];
            for _ in 0..count {
                for zi in &mut z {
                    *zi = rng.sample(StandardNormal);
                }
                let mut max = f64::NEG_INFINITY;
                for i in 0..d {
                    let mut v = 0.0;
                    for (j, zj) in z.iter().enumerate() {
                        v += factor[(i, j)] * zj;
                    }
                    let v = if two_sided { v.abs() } else { v };
                    if v > max {
                        max = v;
                    }
                }
                out.push(max);
            }
            out
        })
        .collect::<Vec<Vec<f64>>>()
        .concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::order_statistic_quantile;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn univariate_two_sided_quantile_matches_normal() {
        let cov = DMatrix::from_row_slice(1, 1, &[1.0]);
        let draws = sample_gaussian_max(&cov, 1_000_000, Seed::new(11), true).unwrap();
        let q = order_statistic_quantile(&draws, 0.05).unwrap();
        // 0.95 quantile of |Z| is the 0.975 normal quantile.
        let oracle = Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.975);
        assert!((q - oracle).abs() < 0.03, "quantile {q} vs oracle {oracle}");
    }

    #[test]
    fn independent_pair_max_below_zero_quarter_of_the_time() {
        let cov = DMatrix::identity(2, 2);
        let draws = sample_gaussian_max(&cov, 400_000, Seed::new(3), false).unwrap();
        let p = draws.iter().filter(|&&m| m <= 0.0).count() as f64 / draws.len() as f64;
        assert!((p - 0.25).abs() < 0.005, "P(max <= 0) = {p}");
    }

    #[test]
    fn perfect_correlation_collapses_to_one_coordinate() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let seed = Seed::new(8);
        let both = sample_gaussian_max(&cov, 50_000, seed, false).unwrap();
        // Against a single coordinate with the same marginal.
        let single = sample_gaussian_max(&DMatrix::from_row_slice(1, 1, &[1.0]), 50_000, seed, false).unwrap();
        let d = crate::stats::ks_distance_two_sample(&both, &single);
        assert!(d < 0.02, "KS distance {d}");
    }

    #[test]
    fn scaling_covariance_by_four_scales_quantiles_by_two_exactly() {
        let d = 3;
        let cov = DMatrix::identity(d, d);
        let cov4 = &cov * 4.0;
        let seed = Seed::new(99);
        let a = sample_gaussian_max(&cov, 20_000, seed, true).unwrap();
        let b = sample_gaussian_max(&cov4, 20_000, seed, true).unwrap();
        for alpha in [0.5, 0.1, 0.05, 0.01] {
            let qa = order_statistic_quantile(&a, alpha).unwrap();
            let qb = order_statistic_quantile(&b, alpha).unwrap();
            assert_eq!(qb, 2.0 * qa, "alpha {alpha}");
        }
    }

    #[test]
    fn asymmetric_covariance_rejected() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.1, 1.0]);
        assert!(sample_gaussian_max(&cov, 10, Seed::new(0), true).is_err());
    }
}
