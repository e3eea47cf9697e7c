//! Power-law decay fits: least squares of log N against log<t>, optionally
//! with log<log<t>> as a second regressor.

use crate::error::FitError;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub const MIN_POINTS: usize = 8;

/// Japanese bracket sqrt(1 + x^2).
pub fn bracket(x: f64) -> f64 {
    x.hypot(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Exponent of <t>.
    pub alpha: f64,
    /// Exponent of <log<t>>, when the log regressor was used.
    pub gamma: Option<f64>,
    /// Standard error of alpha.
    pub stderr: f64,
    pub r2: f64,
    pub window: [f64; 2],
    pub points: usize,
}

/// Fit N(t) ~ C <t>^alpha [<log<t>>^gamma] over the samples with t in `window`.
pub fn fit_decay(
    times: &[f64],
    values: &[f64],
    window: [f64; 2],
    with_log_correction: bool,
) -> Result<DecayFit, FitError> {
    let picked: Vec<(f64, f64)> =
        times.iter().zip(values).filter(|(t, _)| **t >= window[0] && **t <= window[1]).map(|(&t, &v)| (t, v)).collect();
    if picked.len() < MIN_POINTS {
        return Err(FitError::InsufficientData { need: MIN_POINTS, got: picked.len() });
    }
    if let Some(&(t, value)) = picked.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(FitError::NonPositiveValues { t, value });
    }
    let n = picked.len();
    let cols = if with_log_correction { 3 } else { 2 };
    let x = DMatrix::from_fn(n, cols, |i, j| {
        let lt = bracket(picked[i].0).ln();
        match j {
            0 => 1.0,
            1 => lt,
            _ => bracket(lt).ln(),
        }
    });
    let y = DVector::from_iterator(n, picked.iter().map(|(_, v)| v.ln()));
    let xtx = x.transpose() * &x;
    let inv = xtx
        .clone()
        .try_inverse()
        .ok_or_else(|| FitError::Singular("the regressors are collinear on this window".into()))?;
    let beta = &inv * (x.transpose() * &y);
    let resid = &y - &x * &beta;
    let rss = resid.norm_squared();
    let mean = y.mean();
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let dof = (n - cols) as f64;
    let sigma2 = if dof > 0.0 { rss / dof } else { 0.0 };
    Ok(DecayFit {
        alpha: beta[1],
        gamma: with_log_correction.then(|| beta[2]),
        stderr: (sigma2 * inv[(1, 1)]).max(0.0).sqrt(),
        // a constant series is fitted exactly
        r2: if tss > 0.0 { 1.0 - rss / tss } else { 1.0 },
        window: [picked[0].0, picked[n - 1].0],
        points: n,
    })
}

/// n points log-spaced on [a, b].
pub fn log_spaced(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| match i {
            0 => a,
            _ if i + 1 == n => b,
            _ => (la + (lb - la) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}
