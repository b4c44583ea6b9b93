//! The simulation study harness: rejection-rate tables over scenario grids.
//!
//! Seeding discipline: the master seed spawns one substream per table cell
//! (scenario x rho), and each Monte Carlo iteration derives its own child
//! for the sampling scheme, the path and the bootstrap. Iterations are
//! therefore independent of scheduling and the whole table is reproducible
//! byte for byte.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::leadlag::{self, BootstrapConfig, ContrastOptions, LagGrid, Multiplier};
use crate::seed::Seed;
use crate::sim::{simulate_leadlag, LeadLagModel, SamplingScheme, Volatility};

/// Sampling scenario of one table block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scenario {
    /// Synchronous equidistant sampling with step `h`.
    Sync { h: f64 },
    /// Non-synchronous sampling: `m` points kept per asset from the base
    /// grid with the given step.
    Nonsync { m: usize, base_step: f64 },
}

impl Scenario {
    pub fn label(&self) -> String {
        match self {
            Scenario::Sync { h } => format!("sync(h={h})"),
            Scenario::Nonsync { m, base_step } => format!("nonsync(m={m},base={base_step})"),
        }
    }

    fn grid_step(&self) -> f64 {
        match self {
            Scenario::Sync { h } => *h,
            Scenario::Nonsync { base_step, .. } => *base_step,
        }
    }
}

/// Full experiment configuration; the defaults mirror the reference design
/// (T = 1, lag 0.1, unit volatilities, grid radius 0.3, levels 1/5/10%) at
/// desk scale (1000 iterations, 299 bootstrap replications).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub scenarios: Vec<Scenario>,
    pub rhos: Vec<f64>,
    pub theta: f64,
    pub horizon: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub grid_radius: f64,
    pub alphas: Vec<f64>,
    /// Monte Carlo iterations per cell.
    pub n_mc: usize,
    /// Bootstrap replications per iteration.
    pub replications: usize,
    pub multiplier: Multiplier,
    pub master_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: 1,
            scenarios: vec![
                Scenario::Sync { h: 1e-3 },
                Scenario::Sync { h: 3e-3 },
                Scenario::Sync { h: 6e-3 },
                Scenario::Nonsync { m: 300, base_step: 1e-3 },
            ],
            rhos: vec![0.0, 0.25, 0.5, 0.75],
            theta: 0.1,
            horizon: 1.0,
            sigma1: 1.0,
            sigma2: 1.0,
            grid_radius: 0.3,
            alphas: vec![0.01, 0.05, 0.10],
            n_mc: 1000,
            replications: 299,
            multiplier: Multiplier::Rademacher,
            master_seed: 20240901,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Config(format!(
                "unsupported experiment schema version {}",
                self.schema_version
            )));
        }
        if self.scenarios.is_empty() || self.rhos.is_empty() || self.alphas.is_empty() {
            return Err(Error::Config("scenarios, rhos and alphas must be nonempty".into()));
        }
        if self.n_mc == 0 || self.replications == 0 {
            return Err(Error::Config("n_mc and replications must be positive".into()));
        }
        if self.alphas.iter().any(|a| !(0.0 < *a && *a < 1.0)) {
            return Err(Error::Config("alphas must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// One row of the rejection table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRow {
    pub scenario: String,
    pub rho: f64,
    pub alpha: f64,
    /// Rejection rate: exactly (#rejections) / n_mc.
    pub rate: f64,
    /// Binomial standard error sqrt(rate (1 - rate) / n_mc).
    pub se: f64,
    pub n_mc: usize,
    pub replications: usize,
    pub master_seed: u64,
}

/// Rejection rates with the resolved configuration echoed alongside.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RejectionTable {
    pub config: ExperimentConfig,
    pub rows: Vec<RejectionRow>,
}

/// Run a single cell (scenario, rho): `n_mc` simulated datasets, each put
/// through the full test, counting rejections per level.
pub fn run_cell(cfg: &ExperimentConfig, scenario: Scenario, rho: f64, cell_seed: Seed) -> Result<Vec<RejectionRow>> {
    cfg.validate()?;
    let model = LeadLagModel {
        x0_1: 0.0,
        x0_2: 0.0,
        sigma1: Volatility::constant(cfg.sigma1),
        sigma2: Volatility::constant(cfg.sigma2),
        rho,
        theta: cfg.theta,
        horizon: cfg.horizon,
    };
    let grid = LagGrid::symmetric(scenario.grid_step(), cfg.grid_radius)?;
    let opts = ContrastOptions::default();

    let sync_scheme = match scenario {
        Scenario::Sync { h } => Some(SamplingScheme::equidistant(h, cfg.horizon)?),
        Scenario::Nonsync { .. } => None,
    };

    let p_values: Vec<f64> = (0..cfg.n_mc)
        .into_par_iter()
        .map(|it| -> Result<f64> {
            let iter_seed = cell_seed.child(it as u64);
            let scheme = match (&sync_scheme, scenario) {
                (Some(s), _) => s.clone(),
                (None, Scenario::Nonsync { m, base_step }) => {
                    SamplingScheme::subsample(m, base_step, cfg.horizon, iter_seed.child(0))?
                }
                _ => unreachable!(),
            };
            let path = simulate_leadlag(&model, &scheme, iter_seed.child(1))?;
            let boot_cfg = BootstrapConfig {
                replications: cfg.replications,
                multiplier: cfg.multiplier,
                seed: iter_seed.child(2),
                ..BootstrapConfig::default()
            };
            let contrast = leadlag::contrast(&path, &grid, &opts)?;
            let statistic = leadlag::test_statistic(&contrast.values, 0, false)?;
            let boot = leadlag::bootstrap_statistics(&path, &grid, &boot_cfg, &opts)?;
            Ok(leadlag::p_value(statistic, &boot))
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(cfg
        .alphas
        .iter()
        .map(|&alpha| {
            let rejections = p_values.iter().filter(|&&p| p <= alpha).count();
            let rate = rejections as f64 / cfg.n_mc as f64;
            RejectionRow {
                scenario: scenario.label(),
                rho,
                alpha,
                rate,
                se: (rate * (1.0 - rate) / cfg.n_mc as f64).sqrt(),
                n_mc: cfg.n_mc,
                replications: cfg.replications,
                master_seed: cfg.master_seed,
            }
        })
        .collect())
}

/// Run the whole table, invoking `on_rows` after each completed cell so
/// callers can flush partial results. On a cell failure the rows produced
/// so far remain flushed and the error propagates.
pub fn run_table1_streaming(
    cfg: &ExperimentConfig,
    mut on_rows: impl FnMut(&[RejectionRow]),
) -> Result<RejectionTable> {
    cfg.validate()?;
    let root = Seed::new(cfg.master_seed);
    let mut rows = Vec::new();
    let mut cell_idx = 0u64;
    for &scenario in &cfg.scenarios {
        for &rho in &cfg.rhos {
            let cell_rows = run_cell(cfg, scenario, rho, root.child(cell_idx))?;
            on_rows(&cell_rows);
            rows.extend(cell_rows);
            cell_idx += 1;
        }
    }
    Ok(RejectionTable {
        config: cfg.clone(),
        rows,
    })
}

/// Run the whole table.
pub fn run_table1(cfg: &ExperimentConfig) -> Result<RejectionTable> {
    run_table1_streaming(cfg, |_| {})
}
