//! Influence indices of quadratic-form coefficient matrices and the
//! decay criterion built from them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qform::moments::trace_pow4;

/// The influence of variable `i`: the squared row norm
/// `sum_j gamma(i, j)^2`.
pub fn influence(gamma: &DMatrix<f64>, i: usize) -> Result<f64> {
    if i >= gamma.nrows() {
        return Err(Error::Config(format!(
            "influence index {i} out of range for a {}x{} matrix",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    Ok(gamma.row(i).iter().map(|x| x * x).sum())
}

/// `Lambda_i = max_k Inf_i(Gamma_k)` for every variable.
pub fn influence_profile(gammas: &[DMatrix<f64>]) -> Result<Vec<f64>> {
    let first = gammas.first().ok_or_else(|| Error::Config("empty matrix list".into()))?;
    let n = first.nrows();
    if gammas.iter().any(|g| g.nrows() != n) {
        return Err(Error::Dimension {
            expected: n,
            actual: gammas.iter().map(|g| g.nrows()).find(|&m| m != n).unwrap(),
        });
    }
    let mut profile = vec![0.0f64; n];
    for g in gammas {
        for (i, p) in profile.iter_mut().enumerate() {
            let inf: f64 = g.row(i).iter().map(|x| x * x).sum();
            if inf > *p {
                *p = inf;
            }
        }
    }
    Ok(profile)
}

/// The decay criterion
/// `(log d)^6 max_k tr(Gamma_k^4)
///  + (log d)^5 (max_i sqrt(Lambda_i)) sum_i Lambda_i`.
///
/// When this tends to zero along a sequence of specifications, the maximum
/// of the quadratic forms admits a Gaussian approximation under
/// sub-Gaussian multipliers. `d` enters only through its logarithm and must
/// be at least 2.
pub fn criterion_value(gammas: &[DMatrix<f64>], d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Config(format!("criterion needs d >= 2 (log d > 0), got {d}")));
    }
    let profile = influence_profile(gammas)?;
    let log_d = (d as f64).ln();
    let max_tr4 = gammas.iter().map(trace_pow4).fold(0.0f64, f64::max);
    let max_sqrt = profile.iter().map(|l| l.sqrt()).fold(0.0f64, f64::max);
    let sum: f64 = profile.iter().sum();
    Ok(log_d.powi(6) * max_tr4 + log_d.powi(5) * max_sqrt * sum)
}

/// The sample autocovariance coefficient family: `gamma(i, j) = 1/sqrt(N)`
/// iff `|i - j| = k`, otherwise 0.
pub fn autocovariance_gamma(n: usize, k: usize) -> DMatrix<f64> {
    let w = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == k { w } else { 0.0 })
}
