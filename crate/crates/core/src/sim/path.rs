//! Path simulation on an exact driving grid.
//!
//! One fine two-sided grid drives both assets. Its step is the gcd-aligned
//! lattice of all sample times, shifted sample times and volatility
//! breakpoints, so every value the simulation needs is read off the grid
//! exactly; incommensurate configurations are rejected rather than
//! interpolated.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::seed::Seed;
use crate::sim::{LeadLagModel, SamplingScheme};

/// Hard cap on driving-grid cells; anything larger is a misconfiguration.
const MAX_GRID_CELLS: i64 = 1 << 26;

/// Observed price series for two assets aligned to a sampling scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPair {
    pub scheme: SamplingScheme,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

impl PathPair {
    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.x1.len() != self.scheme.times1.len() {
            return Err(Error::Dimension {
                expected: self.scheme.times1.len(),
                actual: self.x1.len(),
            });
        }
        if self.x2.len() != self.scheme.times2.len() {
            return Err(Error::Dimension {
                expected: self.scheme.times2.len(),
                actual: self.x2.len(),
            });
        }
        Ok(())
    }

    /// Increments of asset 1 over consecutive observation intervals.
    pub fn increments1(&self) -> Vec<f64> {
        self.x1.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Increments of asset 2 over consecutive observation intervals.
    pub fn increments2(&self) -> Vec<f64> {
        self.x2.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Simulate the lagged-correlation model on the given scheme.
///
/// The driver increments per grid cell are `dB1 ~ N(0, step)` and
/// `dB2 = rho dB1 + sqrt(1 - rho^2) dW` with `dW` independent, read through
/// the deterministic volatilities. Identical `(model, scheme, seed)` inputs
/// produce bit-identical paths.
pub fn simulate_leadlag(model: &LeadLagModel, scheme: &SamplingScheme, seed: Seed) -> Result<PathPair> {
    model.validate()?;
    scheme.validate()?;
    let theta = model.theta;

    // Every point the simulation must represent exactly on the grid.
    let mut points: Vec<f64> = vec![0.0, -theta];
    points.extend(scheme.times1.iter().copied());
    points.extend(scheme.times2.iter().map(|&t| t - theta));
    points.extend(model.sigma1.breakpoints().iter().copied());
    points.extend(model.sigma2.breakpoints().iter().map(|&b| b - theta));

    let lattice = Lattice::fit(points.iter().copied()).ok_or_else(|| {
        Error::Config(
            "sample times, lag and volatility breakpoints are not commensurate; \
             refusing to interpolate the driving grid"
                .into(),
        )
    })?;

    let on_grid = |p: f64| -> Result<i64> {
        lattice.index_of(p).ok_or_else(|| {
            Error::Config(format!("time point {p} is not representable on the driving grid"))
        })
    };

    // Grid index range: all needed points plus the two-sided cover
    // [min(0, -|theta|) - step, T + |theta| + step].
    let mut lo_idx = i64::MAX;
    let mut hi_idx = i64::MIN;
    for &p in &points {
        let k = on_grid(p)?;
        lo_idx = lo_idx.min(k);
        hi_idx = hi_idx.max(k);
    }
    let cover_lo = (0f64).min(-theta.abs());
    let cover_hi = model.horizon + theta.abs();
    lo_idx = lo_idx.min((cover_lo / lattice.step).floor() as i64) - 1;
    hi_idx = hi_idx.max((cover_hi / lattice.step).ceil() as i64) + 1;

    let n_cells = hi_idx - lo_idx;
    if n_cells > MAX_GRID_CELLS {
        return Err(Error::Config(format!(
            "driving grid would need {n_cells} cells (step {}); configuration too fine",
            lattice.step
        )));
    }
    let n_cells = n_cells as usize;

    let mut rng1 = seed.child(0).rng();
    let mut rng2 = seed.child(1).rng();
    let sqrt_step = lattice.step.sqrt();
    let rho = model.rho;
    let rho_perp = (1.0 - rho * rho).sqrt();

    // Weighted prefix sums over grid cells: s1 accumulates sigma1 dB1 in
    // calendar time, s2 accumulates sigma2(. + theta) dB2 in driver time.
    let mut s1 = vec![0.0f64; n_cells + 1];
    let mut s2 = vec![0.0f64; n_cells + 1];
    for m in 0..n_cells {
        let cell_lo = lattice.value_of(lo_idx + m as i64);
        let mid = cell_lo + 0.5 * lattice.step;
        let z1: f64 = rng1.sample(StandardNormal);
        let zw: f64 = rng2.sample(StandardNormal);
        let db1 = sqrt_step * z1;
        let db2 = rho * db1 + rho_perp * sqrt_step * zw;
        s1[m + 1] = s1[m] + model.sigma1.value_at(mid) * db1;
        s2[m + 1] = s2[m] + model.sigma2.value_at(mid + theta) * db2;
    }

    let prefix_at = |s: &[f64], p: f64| -> Result<f64> {
        let k = on_grid(p)?;
        Ok(s[(k - lo_idx) as usize])
    };

    // X1(t) = x0 + int_0^t sigma1 dB1; X2(t) = x0 + int_{-theta}^{t-theta}
    // sigma2(u + theta) dB2(u).
    let base1 = prefix_at(&s1, 0.0)?;
    let base2 = prefix_at(&s2, -theta)?;
    let x1 = scheme
        .times1
        .iter()
        .map(|&t| Ok(model.x0_1 + prefix_at(&s1, t)? - base1))
        .collect::<Result<Vec<f64>>>()?;
    let x2 = scheme
        .times2
        .iter()
        .map(|&t| Ok(model.x0_2 + prefix_at(&s2, t - theta)? - base2))
        .collect::<Result<Vec<f64>>>()?;

    Ok(PathPair {
        scheme: scheme.clone(),
        x1,
        x2,
    })
}
