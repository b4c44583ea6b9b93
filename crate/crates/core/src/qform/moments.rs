//! Exact moment and cumulant formulas for centered Gaussian quadratic forms
//! `F = xi^T Gamma xi - tr(Gamma)` with `xi ~ N(0, I)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

/// Whitening: `Gamma_k = Sigma^{1/2} A_k Sigma^{1/2}` with the symmetric
/// PSD square root of `Sigma`.
pub fn whiten(sigma: &DMatrix<f64>, a_mats: &[DMatrix<f64>]) -> Result<Vec<DMatrix<f64>>> {
    let root = linalg::sym_sqrt(sigma)?;
    a_mats
        .iter()
        .map(|a| {
            linalg::require_symmetric(a)?;
            if a.nrows() != sigma.nrows() {
                return Err(Error::Dimension {
                    expected: sigma.nrows(),
                    actual: a.nrows(),
                });
            }
            Ok(&root * linalg::symmetrize(a) * &root)
        })
        .collect()
}

/// `tr(A B)` for symmetric matrices: the entrywise product sum.
fn trace_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `Var(F) = 2 ||Gamma||_F^2`.
pub fn qf_variance(gamma: &DMatrix<f64>) -> f64 {
    2.0 * trace_product(gamma, gamma)
}

/// `Cov(F_k, F_l) = 2 tr(Gamma_k Gamma_l)`.
pub fn qf_covariance(gamma_k: &DMatrix<f64>, gamma_l: &DMatrix<f64>) -> Result<f64> {
    if gamma_k.nrows() != gamma_l.nrows() || gamma_k.ncols() != gamma_l.ncols() {
        return Err(Error::Dimension {
            expected: gamma_k.nrows(),
            actual: gamma_l.nrows(),
        });
    }
    Ok(2.0 * trace_product(gamma_k, gamma_l))
}

/// `tr(Gamma^4)` computed as `||Gamma^2||_F^2`: one symmetric multiply, no
/// eigendecomposition.
pub fn trace_pow4(gamma: &DMatrix<f64>) -> f64 {
    let sq = gamma * gamma;
    trace_product(&sq, &sq)
}

/// `tr(Gamma^4)` by summing fourth powers of eigenvalues; kept as an
/// independent cross-check of [`trace_pow4`].
pub fn trace_pow4_eigen(gamma: &DMatrix<f64>) -> Result<f64> {
    linalg::require_symmetric(gamma)?;
    let eig = linalg::symmetrize(gamma).symmetric_eigen();
    Ok(eig.eigenvalues.iter().map(|l| l.powi(4)).sum())
}

/// The fourth cumulant `E[F^4] - 3 E[F^2]^2 = 48 tr(Gamma^4)`, always
/// nonnegative for symmetric `Gamma`.
pub fn qf_fourth_cumulant(gamma: &DMatrix<f64>) -> f64 {
    48.0 * trace_pow4(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = crate::seed::Seed::new(seed).rng();
        let raw = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        linalg::symmetrize(&raw)
    }

    #[test]
    fn scalar_variance_is_two_lambda_sq() {
        // F = lambda (eta^2 - 1): Var = lambda^2 Var(eta^2) = 2 lambda^2.
        for lambda in [0.5, -1.25, 3.0] {
            let g = DMatrix::from_row_slice(1, 1, &[lambda]);
            assert!((qf_variance(&g) - 2.0 * lambda * lambda).abs() < 1e-14);
        }
    }

    #[test]
    fn covariance_of_a_matrix_with_itself_is_its_variance() {
        let g = random_symmetric(4, 17);
        assert_eq!(qf_covariance(&g, &g).unwrap(), qf_variance(&g));
    }

    #[test]
    fn scalar_fourth_cumulant_matches_chi_square_moments() {
        // Gamma = 1/sqrt(2): F = (eta^2 - 1)/sqrt(2) with E[F^2] = 1,
        // E[F^4] = E[(eta^2-1)^4]/4 = 60/4 = 15, so kappa_4 = 15 - 3 = 12;
        // the trace formula gives 48 (1/sqrt(2))^4 = 12.
        let g = DMatrix::from_row_slice(1, 1, &[std::f64::consts::FRAC_1_SQRT_2]);
        assert!((qf_fourth_cumulant(&g) - 12.0).abs() < 1e-12);
        assert_eq!(qf_fourth_cumulant(&DMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn scaled_identity_cumulant_decays_as_12_over_n() {
        for n in [4usize, 16, 64] {
            let g = DMatrix::<f64>::identity(n, n) / (2.0 * n as f64).sqrt();
            let k4 = qf_fourth_cumulant(&g);
            assert!((k4 - 12.0 / n as f64).abs() < 1e-12, "n = {n}: {k4}");
            // And the variance is exactly one for this family.
            assert!((qf_variance(&g) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_pow4_routes_agree() {
        for seed in 0..5u64 {
            let g = random_symmetric(6, seed);
            let a = trace_pow4(&g);
            let b = trace_pow4_eigen(&g).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }
        // Large structured case: the two routes stay within 1e-10.
        let g = crate::qform::autocovariance_gamma(256, 3);
        let a = trace_pow4(&g);
        let b = trace_pow4_eigen(&g).unwrap();
        assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
    }

    #[test]
    fn fourth_cumulant_nonnegative_and_bounded_by_spectral_norm() {
        for seed in 10..30u64 {
            let g = random_symmetric(5, seed);
            let k4 = qf_fourth_cumulant(&g);
            assert!(k4 >= 0.0);
            let sp = linalg::spectral_norm_sym(&g).unwrap();
            let bound = 24.0 * sp * sp * qf_variance(&g);
            assert!(k4 <= bound * (1.0 + 1e-12), "k4 {k4} > bound {bound}");
        }
    }

    #[test]
    fn whiten_with_identity_is_identity_map() {
        let a = random_symmetric(3, 5);
        let id = DMatrix::identity(3, 3);
        let g = whiten(&id, std::slice::from_ref(&a)).unwrap();
        assert!((&g[0] - &a).amax() < 1e-12);

        // Sigma = c I scales linearly.
        let c = 2.5;
        let g = whiten(&(&id * c), std::slice::from_ref(&a)).unwrap();
        assert!((&g[0] - &a * c).amax() < 1e-10);
    }

    #[test]
    fn whiten_root_reconstructs_sigma() {
        let b = random_symmetric(3, 8);
        let sigma = &b * b.transpose() + DMatrix::identity(3, 3) * 0.5;
        let root = linalg::sym_sqrt(&sigma).unwrap();
        assert!((&root * &root - &sigma).amax() < 1e-10);
    }

    #[test]
    fn orthogonal_conjugation_preserves_cumulant_and_variance() {
        let g = random_symmetric(4, 99);
        // Householder reflection: Q = I - 2 v v^T / (v^T v).
        let v = nalgebra::DVector::from_row_slice(&[1.0, -0.3, 0.8, 0.5]);
        let q: DMatrix<f64> = DMatrix::identity(4, 4) - (&v * v.transpose()) * (2.0 / v.dot(&v));
        let conj = q.transpose() * &g * &q;
        assert!((qf_fourth_cumulant(&conj) - qf_fourth_cumulant(&g)).abs() < 1e-10);
        assert!((qf_variance(&conj) - qf_variance(&g)).abs() < 1e-10);
    }
}
