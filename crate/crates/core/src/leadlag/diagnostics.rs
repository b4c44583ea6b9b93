//! Theory-side diagnostics: the variance proxy `V_n(theta)` and the
//! cross-volatility integral `Sigma(theta)`.

use crate::error::Result;
use crate::leadlag::{ContrastOptions, IntervalPartition, LagGrid, OverlapTable};
use crate::sim::Volatility;

/// `V_n(theta) = n sum_{I,J} (int_I sigma1^2)(int_J sigma2^2) K(I, J_-theta)`
/// with exact piecewise integrals. Bounded above and below across lags when
/// the sqrt(n) scaling of the statistic is appropriate.
pub fn v_n(
    sigma1: &Volatility,
    sigma2: &Volatility,
    p1: &IntervalPartition,
    p2: &IntervalPartition,
    theta: f64,
    n: usize,
) -> Result<f64> {
    sigma1.validate()?;
    sigma2.validate()?;
    let w1: Vec<f64> = p1.intervals().iter().map(|i| sigma1.integral_sq(i.lo, i.hi)).collect();
    let w2: Vec<f64> = p2.intervals().iter().map(|j| sigma2.integral_sq(j.lo, j.hi)).collect();
    let grid = LagGrid::new(vec![theta])?;
    let table = OverlapTable::build(p1, p2, &grid, &ContrastOptions::default(), usize::MAX);
    let (sums, _) = table.weighted_sums(&w1, &w2);
    Ok(n as f64 * sums[0])
}

/// `Sigma(theta)`: the cross-volatility integral
/// `int_0^{T-theta} sigma1(t) sigma2(t + theta) dt` for `theta >= 0`,
/// mirrored for negative lags, exact under piecewise-constant volatilities.
/// Zero when `|theta| >= T`.
pub fn sigma_cross(sigma1: &Volatility, sigma2: &Volatility, horizon: f64, theta: f64) -> Result<f64> {
    sigma1.validate()?;
    sigma2.validate()?;
    if theta.abs() >= horizon {
        return Ok(0.0);
    }
    // For theta >= 0 integrate sigma1(t) sigma2(t + theta) over [0, T-theta];
    // for theta < 0 the mirrored form equals sigma1(t - theta) sigma2(t)
    // over [0, T+theta], i.e. the same product with roles swapped.
    let (f, g, shift) = if theta >= 0.0 {
        (sigma1, sigma2, theta)
    } else {
        (sigma2, sigma1, -theta)
    };
    let upper = horizon - shift;
    let mut total = 0.0;
    for (lo, hi, vf) in f.segments_in(0.0, upper) {
        // Split further by g's breakpoints shifted back by `shift`.
        for (glo, ghi, vg) in g.segments_in(lo + shift, hi + shift) {
            total += vf * vg * (ghi - glo);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leadlag::build_partition;

    #[test]
    fn synchronous_unit_vols_give_one() {
        // sigma1 = sigma2 = 1, equidistant h = 1/n, theta = 0:
        // n * sum_i h * h = n * n * h^2 = 1.
        for n in [4usize, 10, 25] {
            let h = 1.0 / n as f64;
            let times: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
            let p = build_partition(&times).unwrap();
            let one = Volatility::constant(1.0);
            let v = v_n(&one, &one, &p, &p, 0.0, n).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "n = {n}: V = {v}");
        }
    }

    #[test]
    fn lag_outside_data_gives_zero_v() {
        let times: Vec<f64> = vec![0.0, 0.5, 1.0];
        let p = build_partition(&times).unwrap();
        let one = Volatility::constant(1.0);
        assert_eq!(v_n(&one, &one, &p, &p, 2.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn zero_volatility_gives_zero_v() {
        let times: Vec<f64> = vec![0.0, 0.5, 1.0];
        let p = build_partition(&times).unwrap();
        let zero = Volatility::constant(0.0);
        let one = Volatility::constant(1.0);
        assert_eq!(v_n(&zero, &one, &p, &p, 0.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn sigma_cross_unit_vols_is_range_length() {
        let one = Volatility::constant(1.0);
        assert!((sigma_cross(&one, &one, 1.0, 0.1).unwrap() - 0.9).abs() < 1e-15);
        assert!((sigma_cross(&one, &one, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_cross(&one, &one, 1.0, -0.25).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(sigma_cross(&one, &one, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(sigma_cross(&one, &one, 1.0, -3.0).unwrap(), 0.0);
    }

    #[test]
    fn sigma_cross_piecewise_first_half() {
        // sigma1 = 2 on [0, 0.5), 0 after; sigma2 = 1: integral = 2 * 0.5.
        let s1 = Volatility::piecewise(vec![0.5], vec![2.0, 0.0]).unwrap();
        let s2 = Volatility::constant(1.0);
        assert!((sigma_cross(&s1, &s2, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_cross_shifted_piecewise() {
        // sigma1 = 1_{[0,0.5)}, sigma2 = 1_{[0.5,1]}, theta = 0.5: the
        // product sigma1(t) sigma2(t + 0.5) is 1 on [0, 0.5).
        let s1 = Volatility::piecewise(vec![0.5], vec![1.0, 0.0]).unwrap();
        let s2 = Volatility::piecewise(vec![0.5], vec![0.0, 1.0]).unwrap();
        assert!((sigma_cross(&s1, &s2, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        // And with no shift the supports are disjoint.
        assert_eq!(sigma_cross(&s1, &s2, 1.0, 0.0).unwrap(), 0.0);
        // Negative lag mirrors: sigma1(t - theta) sigma2(t) with theta = -0.5.
        assert!((sigma_cross(&s2, &s1, 1.0, -0.5).unwrap() - 0.5).abs() < 1e-15);
    }
}
