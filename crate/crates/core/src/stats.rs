//! Small shared statistics helpers: empirical quantiles, two-sample
//! Kolmogorov-Smirnov distance, moment summaries.

use crate::error::{Error, Result};

/// Empirical quantile by the `ceil((R+1)(1-alpha))`-th order statistic.
///
/// This is the inf-type quantile `inf{z : P(X <= z) >= 1-alpha}` applied to
/// the empirical law augmented with the observed statistic, the standard
/// exact-level convention for multiplier bootstrap critical values. When
/// `ceil((R+1)(1-alpha)) > R` the quantile is not defined from R draws and
/// `+inf` is returned (the caller should warn that `alpha` is too small for
/// the replication count).
pub fn order_statistic_quantile(samples: &[f64], alpha: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Config(format!("alpha must be in (0, 1), got {alpha}")));
    }
    let r = samples.len();
    if r == 0 {
        return Err(Error::Config("quantile of an empty sample".into()));
    }
    let rank = quantile_rank(r, alpha);
    if rank > r {
        return Ok(f64::INFINITY);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in quantile input"));
    Ok(sorted[rank - 1])
}

/// The 1-based rank `ceil((R+1)(1-alpha))` used by
/// [`order_statistic_quantile`]. A tiny downward nudge guards against the
/// product landing one ulp above an integer (e.g. 1000 * 0.95).
pub fn quantile_rank(r: usize, alpha: f64) -> usize {
    let x = (r as f64 + 1.0) * (1.0 - alpha);
    (x - 1e-9).ceil() as usize
}

/// Two-sample Kolmogorov-Smirnov distance: the exact sup over x of the
/// absolute difference of the two empirical CDFs, evaluated on the pooled
/// sample points.
pub fn ks_distance_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty(), "empty sample in KS distance");
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in KS input"));
    ys.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in KS input"));

    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut dist: f64 = 0.0;
    // Step through the pooled order; the ECDF difference only changes at
    // sample points, and just after a point both counters are up to date.
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        dist = dist.max((i as f64 / nx - j as f64 / ny).abs());
    }
    // One sample is exhausted; the gap is largest right at the boundary and
    // then shrinks as the other ECDF climbs to 1.
    dist.max((i as f64 / nx - j as f64 / ny).abs())
}

/// Mean of a slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Sample skewness and excess kurtosis (biased, moment-based).
pub fn skewness_excess_kurtosis(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_rank_convention() {
        // ceil(1000 * 0.95) = 950 despite 0.95 not being representable.
        assert_eq!(quantile_rank(999, 0.05), 950);
        assert_eq!(quantile_rank(9, 0.05), 10); // > R: +inf sentinel upstream
        assert_eq!(quantile_rank(999, 0.01), 990);
        assert_eq!(quantile_rank(999, 0.10), 900);
        assert_eq!(quantile_rank(299, 0.05), 285);
    }

    #[test]
    fn quantile_of_1_to_999_at_5pct_is_950() {
        let samples: Vec<f64> = (1..=999).map(|i| i as f64).collect();
        assert_eq!(order_statistic_quantile(&samples, 0.05).unwrap(), 950.0);
    }

    #[test]
    fn quantile_constant_sample() {
        // Any alpha whose rank fits within R = 17 returns the constant.
        let samples = vec![3.25; 17];
        for alpha in [0.1, 0.25, 0.5, 0.9] {
            assert_eq!(order_statistic_quantile(&samples, alpha).unwrap(), 3.25);
        }
    }

    #[test]
    fn quantile_too_small_alpha_is_infinite() {
        let samples: Vec<f64> = (1..=9).map(|i| i as f64).collect();
        assert!(order_statistic_quantile(&samples, 0.05).unwrap().is_infinite());
    }

    #[test]
    fn ks_identical_samples_is_zero() {
        let xs = vec![1.0, 2.0, 3.0, 4.0];
        let ys = vec![2.0, 1.0, 4.0, 3.0];
        assert_eq!(ks_distance_two_sample(&xs, &ys), 0.0);
    }

    #[test]
    fn ks_known_small_cases() {
        // ECDFs differ by 1/4 at x in [1, 4).
        let xs = vec![1.0, 1.0, 4.0, 4.0];
        let ys = vec![1.0, 1.0, 1.0, 4.0];
        assert!((ks_distance_two_sample(&xs, &ys) - 0.25).abs() < 1e-12);

        // Disjoint supports: distance 1.
        let xs = vec![0.0, 0.1];
        let ys = vec![5.0, 6.0];
        assert!((ks_distance_two_sample(&xs, &ys) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_of_simple_sample() {
        let xs = vec![1.0, 2.0, 3.0, 4.0];
        assert!((mean(&xs) - 2.5).abs() < 1e-12);
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-12);
        let (skew, _) = skewness_excess_kurtosis(&xs);
        assert!(skew.abs() < 1e-12);
    }
}
