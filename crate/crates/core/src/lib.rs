//! Inference for maximum-type statistics in high-frequency data: the
//! lead-lag absence test with its wild bootstrap, uniform confidence bands
//! for spot volatility, and moment/cumulant diagnostics for maxima of
//! Gaussian quadratic forms, plus a reproducible simulation study harness.

pub mod error;
pub mod lattice;
pub mod leadlag;
pub mod linalg;
pub mod qform;
pub mod seed;
mod serde_util;
pub mod sim;
pub mod spotvol;
pub mod stats;

pub mod experiments;
pub mod io;

pub use error::{Error, Result};
pub use seed::Seed;
