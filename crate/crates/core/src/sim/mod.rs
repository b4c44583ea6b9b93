//! Seeded, reproducible simulation of the data-generating processes and of
//! multivariate Gaussian maxima.

mod gaussian;
mod model;
mod path;
mod scheme;
mod volatility;

pub use gaussian::{sample_gaussian_max, sample_max_with_factor};
pub use model::LeadLagModel;
pub use path::{simulate_leadlag, PathPair};
pub use scheme::{SamplingScheme, SchemeKind};
pub use volatility::Volatility;
