//! Observation-time schemes: synchronous equidistant grids and random
//! subsamples of a fine base grid.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Seed;

/// How a sampling scheme was constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Both assets observed at `{0, h, 2h, ...}` up to the horizon.
    Equidistant { h: f64 },
    /// Each asset independently keeps `m` points of the base grid
    /// `{i * base_step}`, drawn uniformly without replacement with the
    /// point 0 always retained.
    Subsample { m: usize, base_step: f64 },
    /// Times supplied externally (e.g. ingested from a file).
    Custom,
}

/// Per-asset ordered observation times on `[0, T]`, possibly non-synchronous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingScheme {
    pub times1: Vec<f64>,
    pub times2: Vec<f64>,
    pub kind: SchemeKind,
    pub horizon: f64,
}

impl SamplingScheme {
    /// Wrap externally supplied times, validating monotonicity and range.
    pub fn from_times(times1: Vec<f64>, times2: Vec<f64>, horizon: f64) -> Result<Self> {
        let scheme = SamplingScheme {
            times1,
            times2,
            kind: SchemeKind::Custom,
            horizon,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config("horizon T must be finite and > 0".into()));
        }
        for (name, times) in [("asset 1", &self.times1), ("asset 2", &self.times2)] {
            if times.len() < 2 {
                return Err(Error::Data(format!("{name}: need at least 2 observation times")));
            }
            if times.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Data(format!("{name}: observation times must be strictly increasing")));
            }
            let lo = times[0];
            let hi = *times.last().unwrap();
            if lo < 0.0 || hi > self.horizon {
                return Err(Error::Data(format!(
                    "{name}: observation times must lie within [0, {}], got range [{lo}, {hi}]",
                    self.horizon
                )));
            }
        }
        Ok(())
    }

    /// Synchronous equidistant scheme `{0, h, ..., floor(T/h) h}`.
    pub fn equidistant(h: f64, horizon: f64) -> Result<Self> {
        if !(h > 0.0 && h <= horizon) {
            return Err(Error::Config(format!("equidistant step must satisfy 0 < h <= T, got h = {h}")));
        }
        // Nudge before flooring: T/h can land one ulp under an integer.
        let count = (horizon / h + 1e-9).floor() as usize;
        let times: Vec<f64> = (0..=count).map(|i| i as f64 * h).collect();
        Ok(SamplingScheme {
            times1: times.clone(),
            times2: times,
            kind: SchemeKind::Equidistant { h },
            horizon,
        })
    }

    /// Non-synchronous subsample: independently per asset, keep `m` points
    /// of the base grid `{i * base_step}`, always retaining 0, drawn
    /// uniformly without replacement and sorted ascending.
    pub fn subsample(m: usize, base_step: f64, horizon: f64, seed: Seed) -> Result<Self> {
        if !(base_step > 0.0 && base_step <= horizon) {
            return Err(Error::Config(format!(
                "subsample base step must satisfy 0 < base_step <= T, got {base_step}"
            )));
        }
        let base_count = (horizon / base_step + 1e-9).floor() as usize; // indices 0..=base_count
        let base_size = base_count + 1;
        if m < 2 || m > base_size {
            return Err(Error::Config(format!(
                "subsample size m must satisfy 2 <= m <= base grid size ({base_size}), got {m}"
            )));
        }

        let draw = |child: Seed| -> Vec<f64> {
            let mut rng = child.rng();
            // 0 is always kept; draw m-1 of the remaining base_count indices.
            let mut idx: Vec<usize> = index::sample(&mut rng, base_count, m - 1)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            idx.push(0);
            idx.sort_unstable();
            idx.into_iter().map(|i| i as f64 * base_step).collect()
        };

        Ok(SamplingScheme {
            times1: draw(seed.child(0)),
            times2: draw(seed.child(1)),
            kind: SchemeKind::Subsample { m, base_step },
            horizon,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equidistant_quarter_grid() {
        let s = SamplingScheme::equidistant(0.25, 1.0).unwrap();
        assert_eq!(s.times1, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s.times1, s.times2);
    }

    #[test]
    fn equidistant_includes_last_point_despite_rounding() {
        let s = SamplingScheme::equidistant(1e-3, 1.0).unwrap();
        assert_eq!(s.times1.len(), 1001);
        let s = SamplingScheme::equidistant(0.1, 0.3).unwrap();
        assert_eq!(s.times1.len(), 4);
    }

    #[test]
    fn subsample_full_base_grid_is_degenerate() {
        let s = SamplingScheme::subsample(5, 0.25, 1.0, Seed::new(1)).unwrap();
        assert_eq!(s.times1, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s.times2, s.times1);
    }

    #[test]
    fn subsample_draws_strictly_increasing_times_with_zero() {
        let s = SamplingScheme::subsample(300, 1e-3, 1.0, Seed::new(7)).unwrap();
        for times in [&s.times1, &s.times2] {
            assert_eq!(times.len(), 300);
            assert_eq!(times[0], 0.0);
            assert!(times.windows(2).all(|w| w[0] < w[1]));
            assert!(*times.last().unwrap() <= 1.0);
        }
        // Independent draws per asset should differ.
        assert_ne!(s.times1, s.times2);
        // And be reproducible.
        let again = SamplingScheme::subsample(300, 1e-3, 1.0, Seed::new(7)).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn subsample_m_too_large_is_rejected() {
        assert!(SamplingScheme::subsample(1002, 1e-3, 1.0, Seed::new(1)).is_err());
    }

    #[test]
    fn non_monotone_custom_times_rejected() {
        assert!(SamplingScheme::from_times(vec![0.0, 0.5, 0.5], vec![0.0, 1.0], 1.0).is_err());
    }
}
