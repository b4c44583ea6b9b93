//! Kernel spot-volatility estimation and uniform confidence bands via
//! Monte Carlo quantiles of the Gaussian analog of the studentized error.

mod analog;
mod band;
mod estimate;
mod kernel;

pub use analog::{eval_grid, simulate_sup_gaussian_analog};
pub use band::{
    band_from_quantile, gaussian_analog_quantile, undersmoothing_diagnostics, uniform_band, BandResult,
    SpotVolConfig,
};
pub use estimate::{s_n, spot_estimate, spot_estimate_at, SingleAssetPath};
pub use kernel::Kernel;
