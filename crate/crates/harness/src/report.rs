//! report.json and the series CSV files.

use crate::config::ExperimentConfig;
use crate::error::{io_error, Result, Stage};
use crate::fit::DecayFit;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;
use strato_core::regime::RegimeParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeSummary {
    pub name: String,
    pub r: f64,
    pub beta: f64,
    pub g: f64,
    /// None without shear (B^2 = infinity).
    pub b2: Option<f64>,
}

impl RegimeSummary {
    pub fn new(p: &RegimeParams) -> Self {
        RegimeSummary {
            name: p.regime.name().to_string(),
            r: p.r,
            beta: p.beta,
            g: p.g,
            b2: p.b2.is_finite().then_some(p.b2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub norm: String,
    pub alpha: f64,
    pub gamma: Option<f64>,
    pub stderr: f64,
    pub r2: f64,
    pub window: [f64; 2],
    pub points: usize,
    /// Exponents of the corresponding decay estimate, where one applies.
    pub expected_alpha: Option<f64>,
    pub expected_gamma: Option<f64>,
}

impl FitRecord {
    pub fn new(norm: &str, fit: &DecayFit, expected: Option<(f64, Option<f64>)>) -> Self {
        FitRecord {
            norm: norm.to_string(),
            alpha: fit.alpha,
            gamma: fit.gamma,
            stderr: fit.stderr,
            r2: fit.r2,
            window: fit.window,
            points: fit.points,
            expected_alpha: expected.map(|e| e.0),
            expected_gamma: expected.and_then(|e| e.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitFailure {
    pub norm: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationRecord {
    pub name: String,
    pub max_rel_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Series {
    pub norm: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub k: i64,
    pub t: f64,
    pub y_max: f64,
    pub sup: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersiveSummary {
    pub n: f64,
    pub envelope: Vec<EnvelopePoint>,
    /// Least-squares constant of |I| = Cb * envelope (geometric mean of the ratios).
    pub envelope_constant: f64,
    /// max |ratio / Cb - 1| over the sweep.
    pub envelope_spread: f64,
    /// |I| on the ray y = c t against t, per k.
    pub ray_fits: Vec<FitRecord>,
    pub sharpness_amplitude: f64,
    pub sharpness_limit: f64,
    pub sharpness_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub k: i64,
    pub eta: f64,
    /// max relative deviation from the ODE oracle over the schedule.
    pub oracle_max_rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Option<ExperimentConfig>,
    pub regime: Option<RegimeSummary>,
    pub fits: Vec<FitRecord>,
    pub fit_errors: Vec<FitFailure>,
    pub conservation: Vec<ConservationRecord>,
    pub validation: Vec<ValidationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive: Option<DispersiveSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSummary>,
    #[serde(skip)]
    pub series: Vec<Series>,
}

impl Report {
    pub fn new(config: Option<ExperimentConfig>, regime: Option<RegimeSummary>) -> Self {
        Report {
            config,
            regime,
            fits: Vec::new(),
            fit_errors: Vec::new(),
            conservation: Vec::new(),
            validation: Vec::new(),
            dispersive: None,
            mode: None,
            series: Vec::new(),
        }
    }

    pub fn fit(&self, norm: &str) -> Option<&FitRecord> {
        self.fits.iter().find(|f| f.norm == norm)
    }

    pub fn series(&self, norm: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.norm == norm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// report.json plus one series_<norm>.csv per recorded norm.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| io_error(Stage::Output, dir, e))?;
        let path = dir.join("report.json");
        fs::write(&path, self.to_json() + "\n").map_err(|e| io_error(Stage::Output, &path, e))?;
        for s in &self.series {
            write_series(&dir.join(format!("series_{}.csv", s.norm)), "value", &s.times, &s.values)?;
        }
        Ok(())
    }
}

pub fn write_series(path: &Path, column: &str, times: &[f64], values: &[f64]) -> Result<()> {
    let err = |e: csv::Error| io_error(Stage::Output, path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["t", column]).map_err(err)?;
    for (t, v) in times.iter().zip(values) {
        w.write_record([t.to_string(), v.to_string()]).map_err(err)?;
    }
    w.flush().map_err(|e| io_error(Stage::Output, path, e))
}

/// Reads a (t, value) CSV with a header row.
pub fn read_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let err = |e: &dyn std::fmt::Display| io_error(Stage::Fit, path, e);
    let mut r = csv::Reader::from_path(path).map_err(|e| err(&e))?;
    let (mut ts, mut vs) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(|e| err(&e))?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| err(&format!("row has {} columns", rec.len())))?
                .trim()
                .parse::<f64>()
                .map_err(|e| err(&e))
        };
        ts.push(field(0)?);
        vs.push(field(1)?);
    }
    Ok((ts, vs))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_error(Stage::Output, path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io_error(Stage::Output, path, e))
}
