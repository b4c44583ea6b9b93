//! Symmetric-matrix helpers: symmetry checks, PSD factorization with
//! eigenvalue clipping, symmetric square roots.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance for symmetry checks (against the largest |entry|).
pub const SYMMETRY_REL_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_CLIP_REL * lambda_max` are clipped to zero;
/// anything below is a genuine indefiniteness and is rejected.
pub const PSD_CLIP_REL: f64 = 1e-8;

/// Verify `m` is square and symmetric within `SYMMETRY_REL_TOL` relative to
/// its largest absolute entry.
pub fn require_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let scale = m.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let tol = SYMMETRY_REL_TOL * scale;
    let mut max_asym = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            max_asym = max_asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if max_asym > tol {
        return Err(Error::NotSymmetric { max_asym, tol });
    }
    Ok(())
}

/// Exact symmetrization `(M + M^T) / 2`; quadratic forms only see this part.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Clipped eigenvalues of a symmetric matrix together with the eigenvector
/// matrix: negatives above `-PSD_CLIP_REL * lambda_max` become 0, more
/// negative ones are an error.
fn clipped_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    require_symmetric(m)?;
    let eig = symmetrize(m).symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -PSD_CLIP_REL * max_eig.max(0.0) {
        return Err(Error::NotPositiveSemidefinite { min_eig, max_eig });
    }
    let clipped = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    Ok((clipped, eig.eigenvectors))
}

/// Factor `B` with `B B^T = M` for a PSD matrix `M` (up to clipping),
/// via the symmetric eigendecomposition `B = V diag(sqrt(lambda))`.
pub fn psd_factor(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (lambda, v) = clipped_eigen(m)?;
    let mut b = v;
    for (j, l) in lambda.iter().enumerate() {
        let s = l.sqrt();
        for i in 0..b.nrows() {
            b[(i, j)] *= s;
        }
    }
    Ok(b)
}

/// Symmetric PSD square root `M^{1/2} = V diag(sqrt(lambda)) V^T`.
pub fn sym_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (lambda, v) = clipped_eigen(m)?;
    let mut scaled = v.clone();
    for (j, l) in lambda.iter().enumerate() {
        let s = l.sqrt();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    Ok(&scaled * v.transpose())
}

/// Spectral norm of a symmetric matrix (largest |eigenvalue|).
pub fn spectral_norm_sym(m: &DMatrix<f64>) -> Result<f64> {
    require_symmetric(m)?;
    let eig = symmetrize(m).symmetric_eigen();
    Ok(eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs())))
}
