//! The two-asset lagged correlation model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Volatility;

/// Two correlated price processes where the second asset lags the first by
/// `theta`: increments of the driving Brownian motions over intervals `I`
/// and `J` satisfy `Cov(B1(I), B2(J)) = rho * |I cap J|` on the shifted
/// clock, and `X2` reads its driver at `t - theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadLagModel {
    pub x0_1: f64,
    pub x0_2: f64,
    pub sigma1: Volatility,
    pub sigma2: Volatility,
    /// Correlation of the two drivers, in (-1, 1).
    pub rho: f64,
    /// Time lag of asset 2 behind asset 1.
    pub theta: f64,
    /// Horizon T of the observation window.
    pub horizon: f64,
}

impl LeadLagModel {
    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_finite() || self.rho.abs() >= 1.0 {
            return Err(Error::Config(format!("rho must lie in (-1, 1), got {}", self.rho)));
        }
        if !self.theta.is_finite() {
            return Err(Error::Config("theta must be finite".into()));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config("horizon T must be finite and > 0".into()));
        }
        if !self.x0_1.is_finite() || !self.x0_2.is_finite() {
            return Err(Error::Config("initial values must be finite".into()));
        }
        self.sigma1.validate()?;
        self.sigma2.validate()
    }

    /// The standard experiment configuration: unit volatilities, zero
    /// initial values.
    pub fn with_unit_vols(rho: f64, theta: f64, horizon: f64) -> Self {
        LeadLagModel {
            x0_1: 0.0,
            x0_2: 0.0,
            sigma1: Volatility::constant(1.0),
            sigma2: Volatility::constant(1.0),
            rho,
            theta,
            horizon,
        }
    }
}
