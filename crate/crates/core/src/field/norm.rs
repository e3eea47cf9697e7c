//! Norms of fields given either as spectral amplitudes or as samples.

use super::{apply_weight, mixed_to_spectral, physical_to_mixed, spectral_row_to_mixed, spectral_to_mixed, GridSpec};
use crate::error::{Error, Result};
use ndarray::{Array2, Axis};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L2,
    /// (sum_k sup_y |f^(k, y)|^2)^{1/2}
    L2xLinfY,
    /// Weights (1+k^2)^{sx} (1+eta^2)^{sy}.
    SobolevHxHy {
        sx: f64,
        sy: f64,
    },
    /// (sum_k (1+k^2)^{sx} ||f^(k, .)||^2_{W^{sy,p}})^{1/2}, with
    /// ||g||_{W^{s,p}} = sum_{j <= s} ||d^j g||_{L^p}; integer sy only,
    /// p = infinity allowed.
    SobolevHxWy {
        sx: f64,
        sy: f64,
        p: f64,
    },
}

impl NormKind {
    pub fn name(&self) -> String {
        match self {
            NormKind::L2 => "L2".into(),
            NormKind::L2xLinfY => "L2xLinfY".into(),
            NormKind::SobolevHxHy { sx, sy } => format!("H{sx}xH{sy}y"),
            NormKind::SobolevHxWy { sx, sy, p } => format!("H{sx}xW{sy},{p}y"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projection {
    Full,
    /// Remove the x-average (the k = 0 modes).
    NonZero,
}

fn lp(values: impl Iterator<Item = f64>, p: f64, dy: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (dy * values.map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p)
    }
}

fn weighted_amplitudes(grid: &GridSpec, a: &Array2<Complex64>, beta: f64) -> Array2<Complex64> {
    let mut g = spectral_to_mixed(grid, a);
    for (j, mut col) in g.axis_iter_mut(Axis(1)).enumerate() {
        let w = (-0.5 * beta * grid.y(j)).exp();
        col.mapv_inplace(|v| v * w);
    }
    mixed_to_spectral(grid, &g)
}

/// Norm of spectral amplitudes `a` (sheared frame, lab frame when `shift`
/// is 0). `have_weight` records a weight already in the data; `weight`
/// asks for one, and is a no-op when it matches.
pub(crate) fn spectral_norm(
    grid: &GridSpec,
    a: &Array2<Complex64>,
    shift: f64,
    have_weight: Option<f64>,
    kind: NormKind,
    projection: Projection,
    weight: Option<f64>,
) -> Result<f64> {
    let reweighted;
    let a = match (weight, have_weight) {
        (None, _) => a,
        (Some(b), Some(h)) if (b - h).abs() <= 1e-12 * b.abs().max(1.0) => a,
        (Some(b), Some(h)) => {
            return Err(Error::InvalidParams(format!("data carries weight beta = {h}, asked for {b}")));
        }
        (Some(b), None) => {
            reweighted = weighted_amplitudes(grid, a, b);
            &reweighted
        }
    };
    let rows = (0..grid.nx).filter(|&i| !(projection == Projection::NonZero && grid.k(i) == 0));
    let deta = grid.deta();
    let lab_eta = |i: usize, m: usize| grid.eta(m) - grid.k(i) as f64 * shift;
    let total: f64 = match kind {
        NormKind::L2 => rows.map(|i| a.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>() * deta).sum(),
        NormKind::SobolevHxHy { sx, sy } => rows
            .map(|i| {
                let kx = (1.0 + (grid.k(i) as f64).powi(2)).powf(sx);
                let s: f64 = a
                    .row(i)
                    .iter()
                    .enumerate()
                    .map(|(m, v)| (1.0 + lab_eta(i, m).powi(2)).powf(sy) * v.norm_sqr())
                    .sum();
                kx * s * deta
            })
            .sum(),
        NormKind::L2xLinfY => {
            let g = spectral_to_mixed(grid, a);
            rows.map(|i| g.row(i).iter().fold(0.0f64, |m, v| m.max(v.norm())).powi(2)).sum()
        }
        NormKind::SobolevHxWy { sx, sy, p } => {
            if sy < 0.0 || sy.fract() != 0.0 {
                return Err(Error::UnsupportedCombination(format!("W^(s,p) needs integer s >= 0 (got {sy})")));
            }
            if !(p >= 1.0) {
                return Err(Error::InvalidParams(format!("L^p needs p >= 1 (got {p})")));
            }
            let mut total = 0.0;
            let mut buf = vec![Complex64::new(0.0, 0.0); grid.ny];
            for i in rows {
                let mut w = 0.0;
                for order in 0..=sy as i32 {
                    for (m, b) in buf.iter_mut().enumerate() {
                        *b = Complex64::new(0.0, lab_eta(i, m)).powi(order) * a[[i, m]];
                    }
                    spectral_row_to_mixed(grid, &mut buf);
                    w += lp(buf.iter().map(|v| v.norm()), p, grid.dy);
                }
                total += (1.0 + (grid.k(i) as f64).powi(2)).powf(sx) * w * w;
            }
            total
        }
    };
    Ok(total.sqrt())
}

/// Norm of physical samples in the (ny, nx) layout. Only L^2 and
/// L^2_x L^inf_y are available: Sobolev norms need spectral data.
pub fn physical_norm(
    grid: &GridSpec,
    f: &Array2<f64>,
    kind: NormKind,
    projection: Projection,
    weight: Option<f64>,
) -> Result<f64> {
    grid.check_physical(f, "samples")?;
    let mut f = f.clone();
    if let Some(b) = weight {
        apply_weight(grid, &mut f, b);
    }
    if projection == Projection::NonZero {
        for mut row in f.axis_iter_mut(Axis(0)) {
            let mean = row.mean().unwrap_or(0.0);
            row.mapv_inplace(|v| v - mean);
        }
    }
    match kind {
        NormKind::L2 => Ok((grid.dx() * grid.dy * f.iter().map(|v| v * v).sum::<f64>()).sqrt()),
        NormKind::L2xLinfY => {
            let g = physical_to_mixed(grid, &f);
            Ok(g.axis_iter(Axis(0))
                .enumerate()
                .filter(|(i, _)| !(projection == Projection::NonZero && *i == 0))
                .map(|(_, row)| row.iter().fold(0.0f64, |m, v| m.max(v.norm())).powi(2))
                .sum::<f64>()
                .sqrt())
        }
        other => Err(Error::UnsupportedCombination(format!(
            "{} of physical samples; ingest the data to get spectral amplitudes",
            other.name()
        ))),
    }
}

impl super::SpectralField {
    /// Norm of the initial stream function (`density = false`) or density.
    pub fn norm(&self, density: bool, kind: NormKind, projection: Projection, weight: Option<f64>) -> Result<f64> {
        let a = if density { &self.rho } else { &self.psi };
        let have = self.model.weight().filter(|_| self.weight_applied);
        spectral_norm(&self.grid, a, 0.0, have, kind, projection, weight)
    }
}
