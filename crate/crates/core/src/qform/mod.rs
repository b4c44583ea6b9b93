//! Moment and cumulant diagnostics for maxima of centered Gaussian
//! quadratic forms.

mod influence;
mod mc;
mod moments;

pub use influence::{autocovariance_gamma, criterion_value, influence, influence_profile};
pub use mc::{
    mc_max_kolmogorov, r1_estimate, sample_quadform_maxima, theorem_remainders, MaxDistanceEstimate,
    MultiplierLaw, RemainderTerms,
};
pub use moments::{qf_covariance, qf_fourth_cumulant, qf_variance, trace_pow4, trace_pow4_eigen, whiten};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A family of symmetric coefficient matrices defining the centered
/// quadratic forms `F_k = xi^T Gamma_k xi - E[...]` with standard normal
/// `xi`. Built either directly from the whitened matrices or from a
/// covariance `Sigma` and raw coefficient matrices `A_k` (whitened as
/// `Sigma^{1/2} A_k Sigma^{1/2}`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadFormSpec {
    gammas: Vec<DMatrix<f64>>,
}

impl QuadFormSpec {
    /// Validate symmetry (1e-10 relative) and symmetrize exactly.
    pub fn from_gammas(gammas: Vec<DMatrix<f64>>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::Config("need at least one coefficient matrix".into()));
        }
        let n = gammas[0].nrows();
        let gammas = gammas
            .into_iter()
            .map(|g| {
                linalg::require_symmetric(&g)?;
                if g.nrows() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        actual: g.nrows(),
                    });
                }
                Ok(linalg::symmetrize(&g))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuadFormSpec { gammas })
    }

    pub fn from_sigma_and_a(sigma: &DMatrix<f64>, a_mats: &[DMatrix<f64>]) -> Result<Self> {
        QuadFormSpec::from_gammas(whiten(sigma, a_mats)?)
    }

    pub fn gammas(&self) -> &[DMatrix<f64>] {
        &self.gammas
    }

    /// Dimension N of the underlying Gaussian vector.
    pub fn dim(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// Number d of quadratic forms.
    pub fn count(&self) -> usize {
        self.gammas.len()
    }
}

/// The exact moment diagnostics of a specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    /// `Var(F_k) = 2 ||Gamma_k||_F^2` per form.
    pub variances: Vec<f64>,
    /// `Cov(F_k, F_l) = 2 tr(Gamma_k Gamma_l)`, row-major d x d.
    pub covariance: Vec<Vec<f64>>,
    /// `E[F_k^4] - 3 E[F_k^2]^2 = 48 tr(Gamma_k^4)` per form; nonnegative.
    pub fourth_cumulants: Vec<f64>,
    /// `Lambda_i = max_k Inf_i(Gamma_k)` per variable.
    pub influence_profile: Vec<f64>,
    /// The decay criterion value; requires d >= 2.
    pub criterion: Option<f64>,
    /// Spectral norm per coefficient matrix.
    pub spectral_norms: Vec<f64>,
    /// The spectral upper bound `24 ||Gamma_k||_sp^2 Var(F_k)` on the
    /// fourth cumulant.
    pub fourth_cumulant_bounds: Vec<f64>,
}

/// Compute every exact diagnostic for a specification.
pub fn diagnostics_report(spec: &QuadFormSpec) -> Result<DiagnosticsReport> {
    let gammas = spec.gammas();
    let d = gammas.len();
    let variances: Vec<f64> = gammas.iter().map(qf_variance).collect();
    let mut covariance = vec![vec![0.0f64; d]; d];
    for k in 0..d {
        for l in 0..d {
            covariance[k][l] = qf_covariance(&gammas[k], &gammas[l])?;
        }
    }
    let fourth_cumulants: Vec<f64> = gammas.iter().map(qf_fourth_cumulant).collect();
    let profile = influence_profile(gammas)?;
    let criterion = if d >= 2 {
        Some(criterion_value(gammas, d)?)
    } else {
        None
    };
    let spectral_norms = gammas
        .iter()
        .map(linalg::spectral_norm_sym)
        .collect::<Result<Vec<f64>>>()?;
    let fourth_cumulant_bounds: Vec<f64> = spectral_norms
        .iter()
        .zip(&variances)
        .map(|(sp, v)| 24.0 * sp * sp * v)
        .collect();
    Ok(DiagnosticsReport {
        variances,
        covariance,
        fourth_cumulants,
        influence_profile: profile,
        criterion,
        spectral_norms,
        fourth_cumulant_bounds,
    })
}
