//! Numerical experiments on light cones, clustering of correlations, local
//! perturbations and area laws, with JSON and CSV reports.

mod experiments;
mod lightcone;

pub use experiments::*;
pub use lightcone::*;

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Values below this are treated as exact zeros and left out of log fits.
pub const ZERO_ROW: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExperimentKind {
    #[serde(rename = "clustering_C")]
    ClusteringC,
    #[serde(rename = "clustering_I")]
    ClusteringI,
    #[serde(rename = "lppl")]
    Lppl,
    #[serde(rename = "arealaw")]
    AreaLaw,
    #[serde(rename = "lightcone")]
    LightCone,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::ClusteringC => "clustering_C",
            ExperimentKind::ClusteringI => "clustering_I",
            ExperimentKind::Lppl => "lppl",
            ExperimentKind::AreaLaw => "arealaw",
            ExperimentKind::LightCone => "lightcone",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub model_id: String,
    pub seed: u64,
    /// column names; the first is the distance or block size
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// decay rate fitted from the second column, when at least three rows are positive
    pub fitted_rate: Option<f64>,
    pub theory_rate: Option<f64>,
    pub passed: bool,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl ExperimentReport {
    pub fn file_stem(&self) -> String {
        format!("{}.{}.{}", self.model_id, self.kind.as_str(), self.seed)
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.metadata.insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    /// Writes `{model_id}.{kind}.{seed}.json` and `.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.file_stem()));
        let csv_path = dir.join(format!("{}.csv", self.file_stem()));
        std::fs::write(&json, serde_json::to_string_pretty(self)?)?;
        let mut w = csv::Writer::from_path(&csv_path)?;
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok((json, csv_path))
    }
}

/// Least-squares line y = a + b x, with R².
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return Err(Error::InsufficientRows { found: n.min(y.len()), required: 2 });
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientRows { found: 1, required: 2 });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        intercept: my - slope * mx,
        slope,
        r_squared,
    })
}

/// Exponential decay rate −d ln(value)/dD from rows with value ≥ ZERO_ROW.
/// None when every row is zero; InsufficientRows when 1 or 2 rows are usable.
pub fn decay_rate(distances: &[f64], values: &[f64]) -> Result<Option<f64>> {
    let (x, y): (Vec<f64>, Vec<f64>) = distances
        .iter()
        .zip(values)
        .filter(|(_, &v)| v >= ZERO_ROW)
        .map(|(&d, &v)| (d, v.ln()))
        .unzip();
    match x.len() {
        0 => Ok(None),
        1 | 2 => Err(Error::InsufficientRows { found: x.len(), required: 3 }),
        _ => Ok(Some(-linear_fit(&x, &y)?.slope)),
    }
}

/// Strictly decreasing, treating values below ZERO_ROW as equal zeros.
pub fn is_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0] || (w[0] < ZERO_ROW && w[1] < ZERO_ROW))
}
