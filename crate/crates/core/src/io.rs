//! CSV and JSON readers/writers for the external file formats.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::RejectionTable;
use crate::leadlag::TestReport;
use crate::seed::Seed;
use crate::sim::{LeadLagModel, PathPair, SamplingScheme, SchemeKind};
use crate::spotvol::{BandResult, SingleAssetPath};

/// JSON sidecar written next to simulated paths: scheme metadata, model and
/// seed, enough to reproduce the data bit for bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationMetadata {
    pub kind: SchemeKind,
    pub horizon: f64,
    pub model: LeadLagModel,
    pub seed: Seed,
}

/// Write a path pair as CSV with columns `asset,time,value`.
pub fn write_pathpair_csv<W: Write>(w: W, path: &PathPair) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["asset", "time", "value"])?;
    for (t, x) in path.scheme.times1.iter().zip(&path.x1) {
        wtr.write_record(["1".to_string(), format!("{t}"), format!("{x}")])?;
    }
    for (t, x) in path.scheme.times2.iter().zip(&path.x2) {
        wtr.write_record(["2".to_string(), format!("{t}"), format!("{x}")])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Read tick data with columns `asset,time,price` (header optional,
/// detected from the first row). Times must come out strictly increasing
/// per asset.
pub fn read_pathpair_csv<R: Read>(r: R, horizon: Option<f64>) -> Result<PathPair> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(false).from_reader(r);
    let mut t1 = Vec::new();
    let mut x1 = Vec::new();
    let mut t2 = Vec::new();
    let mut x2 = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() < 3 {
            return Err(Error::Data(format!("row {line}: expected 3 columns (asset,time,price)")));
        }
        let asset = record[0].trim();
        if line == 0 && asset.parse::<u8>().is_err() {
            continue; // header row
        }
        let time: f64 = record[1]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("row {line}: bad time '{}'", &record[1])))?;
        let price: f64 = record[2]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("row {line}: bad price '{}'", &record[2])))?;
        match asset {
            "1" => {
                t1.push(time);
                x1.push(price);
            }
            "2" => {
                t2.push(time);
                x2.push(price);
            }
            other => return Err(Error::Data(format!("row {line}: asset must be 1 or 2, got '{other}'"))),
        }
    }
    let horizon = horizon.unwrap_or_else(|| {
        let m1 = t1.last().copied().unwrap_or(0.0);
        let m2 = t2.last().copied().unwrap_or(0.0);
        m1.max(m2)
    });
    let scheme = SamplingScheme::from_times(t1, t2, horizon)?;
    let path = PathPair {
        scheme,
        x1,
        x2,
    };
    path.validate()?;
    Ok(path)
}

/// Read a single-asset equidistant path from `asset,time,price` CSV
/// (asset column tolerated but ignored) or two-column `time,price`.
pub fn read_single_asset_csv<R: Read>(r: R) -> Result<SingleAssetPath> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let (t_field, p_field) = match record.len() {
            2 => (0, 1),
            _ => (1, 2),
        };
        if line == 0 && record[t_field].trim().parse::<f64>().is_err() {
            continue; // header row
        }
        let time: f64 = record[t_field]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("row {line}: bad time '{}'", &record[t_field])))?;
        let price: f64 = record[p_field]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("row {line}: bad price '{}'", &record[p_field])))?;
        times.push(time);
        values.push(price);
    }
    SingleAssetPath::new(times, values)
}

/// Band output: columns `t,sigma2_hat,s_n,lower,upper,valid`. Invalid rows
/// are retained with `valid=false`.
pub fn write_band_csv<W: Write>(w: W, band: &BandResult) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["t", "sigma2_hat", "s_n", "lower", "upper", "valid"])?;
    for k in 0..band.eval_times.len() {
        wtr.write_record([
            format!("{}", band.eval_times[k]),
            format!("{}", band.sigma2_hat[k]),
            format!("{}", band.s_n[k]),
            format!("{}", band.lower[k]),
            format!("{}", band.upper[k]),
            format!("{}", band.valid[k]),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Contrast plot data: columns `theta,u,no_overlap`.
pub fn write_contrast_plot_csv<W: Write>(w: W, report: &TestReport) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["theta", "u", "no_overlap"])?;
    for k in 0..report.thetas.len() {
        wtr.write_record([
            format!("{}", report.thetas[k]),
            format!("{}", report.contrast[k]),
            format!("{}", report.no_overlap[k]),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Rejection table: one row per (scenario, rho, alpha) cell.
pub fn write_rejection_csv<W: Write>(w: W, table: &RejectionTable) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["scenario", "rho", "alpha", "rate", "se", "n_mc", "replications", "master_seed"])?;
    for row in &table.rows {
        wtr.write_record([
            row.scenario.clone(),
            format!("{}", row.rho),
            format!("{}", row.alpha),
            format!("{}", row.rate),
            format!("{}", row.se),
            format!("{}", row.n_mc),
            format!("{}", row.replications),
            format!("{}", row.master_seed),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Dense matrix CSV: one row per line, comma-separated numbers.
pub fn read_matrix_csv<R: Read>(r: R) -> Result<nalgebra::DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Data(format!("row {line}: bad number '{f}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Data(format!(
                    "row {line}: ragged matrix ({} vs {} columns)",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Data("empty matrix file".into()));
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    Ok(nalgebra::DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

/// Pretty-printed JSON to a writer.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value)?;
    w.write_all(s.as_bytes())?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<R: Read, T: DeserializeOwned>(r: R) -> Result<T> {
    Ok(serde_json::from_reader(r)?)
}

/// Plot-data source: either a test report or a band result, detected from
/// the JSON fields.
pub enum PlotSource {
    Test(Box<TestReport>),
    Band(Box<BandResult>),
}

impl PlotSource {
    pub fn from_json_str(s: &str) -> Result<PlotSource> {
        if let Ok(t) = serde_json::from_str::<TestReport>(s) {
            return Ok(PlotSource::Test(Box::new(t)));
        }
        match serde_json::from_str::<BandResult>(s) {
            Ok(b) => Ok(PlotSource::Band(Box::new(b))),
            Err(e) => Err(Error::Data(format!(
                "input is neither a test report nor a band result: {e}"
            ))),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        match self {
            PlotSource::Test(t) => write_contrast_plot_csv(w, t),
            PlotSource::Band(b) => write_band_csv(w, b),
        }
    }
}
