//! The unsheared experiments: envelope constant of the oscillatory
//! integral, |I| along the stationary ray, the sharpness construction and
//! (through the field runner) the L^2_x L^inf_y decay.

use crate::config::ExperimentConfig;
use crate::error::{AtStage, HarnessError, Result, Stage};
use crate::experiment::run_experiment;
use crate::fit::fit_decay;
use crate::report::{write_series, DispersiveSummary, EnvelopePoint, FitRecord, Report};
use rayon::prelude::*;
use std::path::Path;
use strato_core::dispersive::{
    oscillatory_envelope, oscillatory_integral, oscillatory_sup, sharpness_limit, SharpnessProfile,
};
use strato_core::regime::Regime;

/// sup_y |I| against the envelope on every (k, t) of the sweep.
pub fn envelope_sweep(ks: &[i64], times: &[f64], n_freq: f64, n: f64) -> Result<Vec<EnvelopePoint>> {
    let cells: Vec<(i64, f64)> = ks.iter().flat_map(|&k| times.iter().map(move |&t| (k, t))).collect();
    cells
        .par_iter()
        .map(|&(k, t)| {
            let (y_max, sup) = oscillatory_sup(k, n_freq, t, n)?;
            let envelope = oscillatory_envelope(k, n_freq, t, n);
            Ok(EnvelopePoint { k, t, y_max, sup, envelope, ratio: sup / envelope })
        })
        .collect::<strato_core::Result<_>>()
        .at(Stage::Evolve)
}

/// Single constant Cb of |I| = Cb * envelope, fitted in logs (the geometric
/// mean of the ratios), and the largest relative deviation from it.
pub fn envelope_constant(points: &[EnvelopePoint]) -> (f64, f64) {
    let cb = (points.iter().map(|p| p.ratio.ln()).sum::<f64>() / points.len() as f64).exp();
    let spread = points.iter().map(|p| (p.ratio / cb - 1.0).abs()).fold(0.0, f64::max);
    (cb, spread)
}

/// |I(t, y = c t)| with c = 2N / (3 sqrt 3 |k|), the third-order stationary ray.
pub fn ray_series(k: i64, n_freq: f64, times: &[f64], n: f64) -> Result<Vec<f64>> {
    let c = 2.0 * n_freq / (3.0 * 3f64.sqrt() * (k as f64).abs());
    times
        .par_iter()
        .map(|&t| oscillatory_integral(k, n_freq, t, c * t, n).map(|q| q.value.norm()))
        .collect::<strato_core::Result<_>>()
        .at(Stage::Evolve)
}

/// Field norms (if any) plus the oscillatory-integral studies; needs r = 0.
pub fn run_dispersive(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Report> {
    let p = cfg.model.regime_params()?;
    if p.regime != Regime::NoShear {
        return Err(HarnessError::Config("dispersive needs the unsheared model (r = 0)".into()));
    }
    let d = cfg.dispersive.clone().unwrap_or_default();
    let n_freq = p.buoyancy_frequency();
    let mut report = run_experiment(cfg, out)?;

    let envelope = envelope_sweep(&d.ks, &d.envelope_times, n_freq, d.n)?;
    let (cb, spread) = envelope_constant(&envelope);
    let mut ray_fits = Vec::new();
    for &k in &d.ks {
        let values = ray_series(k, n_freq, &d.ray_times, d.n)?;
        let window = [d.ray_times[0], *d.ray_times.last().expect("ray times")];
        let name = format!("ray_k{k}");
        let fit = fit_decay(&d.ray_times, &values, window, false)
            .map_err(|source| HarnessError::Fit { norm: name.clone(), source })?;
        ray_fits.push(FitRecord::new(&name, &fit, Some((-1.0 / 3.0, None))));
        if let Some(dir) = out {
            write_series(&dir.join(format!("series_{name}.csv")), "abs_integral", &d.ray_times, &values)?;
        }
    }
    let profile = SharpnessProfile::new(d.sharpness_k, n_freq, d.sharpness_delta).at(Stage::Evolve)?;
    let amplitude = profile.scaled_amplitude(d.sharpness_t).at(Stage::Evolve)?;
    let limit = sharpness_limit();
    report.dispersive = Some(DispersiveSummary {
        n: d.n,
        envelope,
        envelope_constant: cb,
        envelope_spread: spread,
        ray_fits,
        sharpness_amplitude: amplitude,
        sharpness_limit: limit,
        sharpness_ratio: amplitude / limit,
    });
    if let Some(dir) = out {
        report.write(dir)?;
    }
    Ok(report)
}
