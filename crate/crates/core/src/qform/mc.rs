//! Monte Carlo comparison of the maximum of Gaussian quadratic forms with
//! its Gaussian analog, and the computable remainder terms of the
//! approximation bound.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qform::moments::{qf_covariance, trace_pow4};
use crate::qform::QuadFormSpec;
use crate::seed::Seed;
use crate::sim::sample_max_with_factor;
use crate::stats::ks_distance_two_sample;

const DRAW_BATCH: usize = 512;

/// Estimated Kolmogorov distances between `max_k F_k` and `max_k Z_k`
/// (and the `|.|` versions), evaluated exactly on the pooled sample points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MaxDistanceEstimate {
    /// Distance between the signed maxima.
    pub signed: f64,
    /// Distance between the maxima of absolute values.
    pub absolute: f64,
    pub n_mc: usize,
}

/// Simulate `n_mc` draws of `max_k F_k` (with
/// `F_k = xi^T Gamma_k xi - tr Gamma_k`, `xi` standard normal) and of
/// `max_k Z_k` for `Z ~ N(0, cov_z)`, and return the sup-ECDF distances.
pub fn mc_max_kolmogorov(
    spec: &QuadFormSpec,
    cov_z: &DMatrix<f64>,
    n_mc: usize,
    seed: Seed,
) -> Result<MaxDistanceEstimate> {
    if n_mc < 1000 {
        return Err(Error::Config(format!("need n_mc >= 1000 draws, got {n_mc}")));
    }
    if cov_z.nrows() != spec.count() {
        return Err(Error::Dimension {
            expected: spec.count(),
            actual: cov_z.nrows(),
        });
    }
    let factor = linalg::psd_factor(cov_z)?;

    let (max_f, max_abs_f) = sample_quadform_maxima(spec, n_mc, seed.child(1));
    let z_signed = sample_max_with_factor(&factor, n_mc, seed.child(2), false);
    let z_abs = sample_max_with_factor(&factor, n_mc, seed.child(2), true);

    Ok(MaxDistanceEstimate {
        signed: ks_distance_two_sample(&max_f, &z_signed),
        absolute: ks_distance_two_sample(&max_abs_f, &z_abs),
        n_mc,
    })
}

/// Draws of `(max_k F_k, max_k |F_k|)`, batched over substreams.
pub fn sample_quadform_maxima(spec: &QuadFormSpec, n_mc: usize, seed: Seed) -> (Vec<f64>, Vec<f64>) {
    let n = spec.dim();
    let gammas = spec.gammas();
    let traces: Vec<f64> = gammas.iter().map(|g| g.diagonal().sum()).collect();
    // Diagonal coefficient matrices admit an O(N) evaluation per draw.
    let diagonals: Vec<Option<Vec<f64>>> = gammas
        .iter()
        .map(|g| {
            let mut diag = Vec::with_capacity(n);
            for i in 0..n {
                for j in 0..n {
                    if i != j && g[(i, j)] != 0.0 {
                        return None;
                    }
                }
                diag.push(g[(i, i)]);
            }
            Some(diag)
        })
        .collect();

    let n_batches = n_mc.div_ceil(DRAW_BATCH);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = seed.child(batch as u64).rng();
            let count = DRAW_BATCH.min(n_mc - batch * DRAW_BATCH);
            let mut xi = vec![0.0f64; n];
            let mut signed = Vec::with_capacity(count);
            let mut absolute = Vec::with_capacity(count);
            for _ in 0..count {
                for x in &mut xi {
                    *x = rng.sample(StandardNormal);
                }
                let mut max_s = f64::NEG_INFINITY;
                let mut max_a = 0.0f64;
                for (k, g) in gammas.iter().enumerate() {
                    let quad = match &diagonals[k] {
                        Some(diag) => diag.iter().zip(&xi).map(|(d, x)| d * x * x).sum::<f64>(),
                        None => {
                            let mut q = 0.0;
                            for i in 0..n {
                                let mut row = 0.0;
                                for j in 0..n {
                                    row += g[(i, j)] * xi[j];
                                }
                                q += xi[i] * row;
                            }
                            q
                        }
                    };
                    let f = quad - traces[k];
                    if f > max_s {
                        max_s = f;
                    }
                    if f.abs() > max_a {
                        max_a = f.abs();
                    }
                }
                signed.push(max_s);
                absolute.push(max_a);
            }
            (signed, absolute)
        })
        .collect();

    let mut signed = Vec::with_capacity(n_mc);
    let mut absolute = Vec::with_capacity(n_mc);
    for (s, a) in pairs {
        signed.extend(s);
        absolute.extend(a);
    }
    (signed, absolute)
}

/// The computable remainder terms of the Gaussian approximation bound:
/// `R2 = max_{k,l} |cov_z(k,l) - 2 tr(Gamma_k Gamma_l)|` and
/// `R3 = max_k sqrt(48 tr(Gamma_k^4))`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RemainderTerms {
    pub r2: f64,
    pub r3: f64,
}

pub fn theorem_remainders(spec: &QuadFormSpec, cov_z: &DMatrix<f64>) -> Result<RemainderTerms> {
    let gammas = spec.gammas();
    let d = gammas.len();
    if cov_z.nrows() != d || cov_z.ncols() != d {
        return Err(Error::Dimension {
            expected: d,
            actual: cov_z.nrows(),
        });
    }
    let mut r2 = 0.0f64;
    for k in 0..d {
        for l in 0..d {
            let exact = qf_covariance(&gammas[k], &gammas[l])?;
            r2 = r2.max((cov_z[(k, l)] - exact).abs());
        }
    }
    let r3 = gammas
        .iter()
        .map(|g| (48.0 * trace_pow4(g)).sqrt())
        .fold(0.0f64, f64::max);
    Ok(RemainderTerms { r2, r3 })
}

/// Multiplier law for the remainder-one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultiplierLaw {
    Rademacher,
    Gaussian,
}

/// Monte Carlo *estimate* of the first remainder term
/// `R1 = sum_i E[max_k |sum_j gamma_k(i,j) W^(i)_j|^3] (E|Y_i|^3 + E|G_i|^3)`,
/// where `W^(i)` takes the multiplier law on coordinates `j <= i` and is
/// standard Gaussian beyond. There is no closed form; this is an estimate
/// and should be labeled as such wherever it is reported.
pub fn r1_estimate(spec: &QuadFormSpec, law: MultiplierLaw, n_mc: usize, seed: Seed) -> Result<f64> {
    if n_mc == 0 {
        return Err(Error::Config("need at least one draw".into()));
    }
    let n = spec.dim();
    let gammas = spec.gammas();
    // E|G|^3 = 2 sqrt(2/pi); Rademacher has E|Y|^3 = 1.
    let abs3_gauss = 2.0 * (2.0 / std::f64::consts::PI).sqrt();
    let abs3_y = match law {
        MultiplierLaw::Rademacher => 1.0,
        MultiplierLaw::Gaussian => abs3_gauss,
    };

    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.child(i as u64).rng();
            let mut w = vec![0.0f64; n];
            let mut acc = 0.0f64;
            for _ in 0..n_mc {
                for (j, wj) in w.iter_mut().enumerate() {
                    *wj = if j <= i {
                        match law {
                            MultiplierLaw::Rademacher => {
                                if rng.random::<bool>() {
                                    1.0
                                } else {
                                    -1.0
                                }
                            }
                            MultiplierLaw::Gaussian => rng.sample(StandardNormal),
                        }
                    } else {
                        rng.sample(StandardNormal)
                    };
                }
                let mut max_abs = 0.0f64;
                for g in gammas {
                    let mut s = 0.0;
                    for j in 0..n {
                        s += g[(i, j)] * w[j];
                    }
                    if s.abs() > max_abs {
                        max_abs = s.abs();
                    }
                }
                acc += max_abs.powi(3);
            }
            (acc / n_mc as f64) * (abs3_y + abs3_gauss)
        })
        .sum();
    Ok(total)
}
