//! Deterministic volatility functions: constant or piecewise constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative deterministic volatility function of time.
///
/// Piecewise-constant functions keep every integral in this crate exact:
/// `values[k]` applies on `[breakpoints[k-1], breakpoints[k])` with the
/// convention that the first value extends to the left and the last to the
/// right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Volatility {
    Constant(f64),
    Piecewise {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Volatility {
    pub fn constant(v: f64) -> Self {
        Volatility::Constant(v)
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::Config(format!(
                "piecewise volatility needs len(values) = len(breakpoints) + 1, got {} and {}",
                values.len(),
                breakpoints.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("volatility breakpoints must be strictly increasing".into()));
        }
        let vol = Volatility::Piecewise { breakpoints, values };
        vol.validate()?;
        Ok(vol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Volatility::Constant(v) => v.is_finite() && *v >= 0.0,
            Volatility::Piecewise { values, .. } => {
                values.iter().all(|v| v.is_finite() && *v >= 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config("volatility values must be finite and >= 0".into()))
        }
    }

    /// Value at time `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        match self {
            Volatility::Constant(v) => *v,
            Volatility::Piecewise { breakpoints, values } => {
                let k = breakpoints.partition_point(|&b| b <= t);
                values[k]
            }
        }
    }

    /// Interior breakpoints (empty for a constant function).
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            Volatility::Constant(_) => &[],
            Volatility::Piecewise { breakpoints, .. } => breakpoints,
        }
    }

    /// Maximal constant segments `(lo, hi, value)` covering `[a, b]`.
    pub fn segments_in(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        if b <= a {
            return Vec::new();
        }
        match self {
            Volatility::Constant(v) => vec![(a, b, *v)],
            Volatility::Piecewise { breakpoints, .. } => {
                let mut cuts = vec![a];
                cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
                cuts.push(b);
                cuts.windows(2)
                    .map(|w| (w[0], w[1], self.value_at(0.5 * (w[0] + w[1]))))
                    .collect()
            }
        }
    }

    /// Exact `int_a^b sigma(t)^2 dt`.
    pub fn integral_sq(&self, a: f64, b: f64) -> f64 {
        self.segments_in(a, b)
            .iter()
            .map(|(lo, hi, v)| v * v * (hi - lo))
            .sum()
    }
}
