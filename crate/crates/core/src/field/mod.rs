//! Two-dimensional fields on the x-periodic strip: grids, the Fourier
//! conventions, ingest of initial data, evolution of every mode and the
//! norms used in the decay estimates.
//!
//! Conventions (x-period 2 pi):
//!   f^(k, eta) = (1/2pi) int int e^{-ikx - i eta y} f dx dy
//!   f^(k, y)   = (1/sqrt(2pi)) int e^{-ikx} f dx
//! Both are unitary, so L^2 norms can be read off either representation.
//!
//! Array layouts: physical samples are (ny, nx), rows y and columns x;
//! mixed and spectral arrays are (nx, ny), rows k in FFT order and columns
//! y_j or eta_m (also FFT order).

mod evolve;
pub mod io;
mod norm;

pub use evolve::{evolve_field, evolve_spectral, Component, EvolvedField, Frame, PhysicalSnapshot};
pub use norm::{physical_norm, NormKind, Projection};

use crate::error::{Error, Result};
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Samples in x over one period; wavenumbers -nx/2 .. nx/2 - 1.
    pub nx: usize,
    /// Samples in y.
    pub ny: usize,
    /// y runs over [-ly, ly).
    pub ly: f64,
    pub dy: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, ly: f64) -> Result<Self> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() || nx < 2 || ny < 4 {
            return Err(Error::InvalidParams(format!("nx, ny must be powers of two >= 2, 4 (got {nx}, {ny})")));
        }
        if !(ly > 0.0 && ly.is_finite()) {
            return Err(Error::InvalidParams(format!("ly must be positive (got {ly})")));
        }
        Ok(GridSpec { nx, ny, ly, dy: 2.0 * ly / ny as f64 })
    }

    pub fn dx(&self) -> f64 {
        2.0 * PI / self.nx as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.ly + j as f64 * self.dy
    }

    /// Spacing of the eta grid.
    pub fn deta(&self) -> f64 {
        PI / self.ly
    }

    /// Wavenumber of spectral row `i`.
    pub fn k(&self, i: usize) -> i64 {
        fft_index(i, self.nx)
    }

    /// Frequency of spectral column `m`.
    pub fn eta(&self, m: usize) -> f64 {
        fft_index(m, self.ny) as f64 * self.deta()
    }

    pub fn is_nyquist(&self, i: usize, m: usize) -> bool {
        i == self.nx / 2 || m == self.ny / 2
    }

    fn check_physical(&self, a: &Array2<f64>, what: &str) -> Result<()> {
        if a.dim() != (self.ny, self.nx) {
            return Err(Error::InvalidParams(format!(
                "{what}: samples are {:?}, grid wants (ny, nx) = ({}, {})",
                a.dim(),
                self.ny,
                self.nx
            )));
        }
        Ok(())
    }

    fn check_spectral(&self, a: &Array2<Complex64>, what: &str) -> Result<()> {
        if a.dim() != (self.nx, self.ny) {
            return Err(Error::InvalidParams(format!(
                "{what}: amplitudes are {:?}, grid wants (nx, ny) = ({}, {})",
                a.dim(),
                self.nx,
                self.ny
            )));
        }
        Ok(())
    }
}

fn fft_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn parity(m: usize) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn physical_to_mixed(grid: &GridSpec, f: &Array2<f64>) -> Array2<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(grid.nx);
    let scale = grid.dx() / (2.0 * PI).sqrt();
    let mut out = Array2::zeros((grid.nx, grid.ny));
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.nx];
    for (j, row) in f.axis_iter(Axis(0)).enumerate() {
        for (b, v) in buf.iter_mut().zip(row) {
            *b = Complex64::new(*v, 0.0);
        }
        fft.process(&mut buf);
        for (i, b) in buf.iter().enumerate() {
            out[[i, j]] = b * scale;
        }
    }
    out
}

/// Real part of the inverse x transform; the imaginary part is dropped.
pub(crate) fn mixed_to_physical(grid: &GridSpec, g: &Array2<Complex64>) -> Array2<f64> {
    let ifft = FftPlanner::new().plan_fft_inverse(grid.nx);
    let scale = 1.0 / (2.0 * PI).sqrt();
    let mut out = Array2::zeros((grid.ny, grid.nx));
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.nx];
    for j in 0..grid.ny {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = g[[i, j]];
        }
        ifft.process(&mut buf);
        for (i, b) in buf.iter().enumerate() {
            out[[j, i]] = b.re * scale;
        }
    }
    out
}

pub(crate) fn mixed_to_spectral(grid: &GridSpec, g: &Array2<Complex64>) -> Array2<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(grid.ny);
    let scale = grid.dy / (2.0 * PI).sqrt();
    let mut out = g.clone();
    for mut row in out.axis_iter_mut(Axis(0)) {
        let slice = row.as_slice_mut().expect("standard layout");
        fft.process(slice);
        for (m, v) in slice.iter_mut().enumerate() {
            *v *= scale * parity(m);
        }
    }
    out
}

pub(crate) fn spectral_row_to_mixed(grid: &GridSpec, row: &mut [Complex64]) {
    let scale = grid.deta() / (2.0 * PI).sqrt();
    for (m, v) in row.iter_mut().enumerate() {
        *v *= scale * parity(m);
    }
    FftPlanner::new().plan_fft_inverse(grid.ny).process(row);
}

pub(crate) fn spectral_to_mixed(grid: &GridSpec, a: &Array2<Complex64>) -> Array2<Complex64> {
    let ifft = FftPlanner::new().plan_fft_inverse(grid.ny);
    let scale = grid.deta() / (2.0 * PI).sqrt();
    let mut out = a.clone();
    for mut row in out.axis_iter_mut(Axis(0)) {
        let slice = row.as_slice_mut().expect("standard layout");
        for (m, v) in slice.iter_mut().enumerate() {
            *v *= scale * parity(m);
        }
        ifft.process(slice);
    }
    out
}

pub fn physical_to_spectral(grid: &GridSpec, f: &Array2<f64>) -> Result<Array2<Complex64>> {
    grid.check_physical(f, "samples")?;
    Ok(mixed_to_spectral(grid, &physical_to_mixed(grid, f)))
}

pub fn spectral_to_physical(grid: &GridSpec, a: &Array2<Complex64>) -> Result<Array2<f64>> {
    grid.check_spectral(a, "amplitudes")?;
    Ok(mixed_to_physical(grid, &spectral_to_mixed(grid, a)))
}

/// e^{-beta y/2} on the rows of a physical array (or its inverse for
/// negative beta).
pub fn apply_weight(grid: &GridSpec, f: &mut Array2<f64>, beta: f64) {
    for (j, mut row) in f.axis_iter_mut(Axis(0)).enumerate() {
        let w = (-0.5 * beta * grid.y(j)).exp();
        row.mapv_inplace(|v| v * w);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldModel {
    Boussinesq,
    /// Full Euler with rho_0 = A e^{-beta y}; amplitudes carry the weight
    /// e^{-beta y/2}.
    FullEuler {
        beta: f64,
    },
}

impl FieldModel {
    pub fn weight(&self) -> Option<f64> {
        match self {
            FieldModel::Boussinesq => None,
            FieldModel::FullEuler { beta } => Some(*beta),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FieldModel::Boussinesq => "boussinesq",
            FieldModel::FullEuler { .. } => "full_euler",
        }
    }
}

/// Initial data as spectral amplitudes of the stream function and of the
/// density perturbation (rho/A, or e^{-beta y/2} rho/rho_0 under full Euler).
/// The relative density T of the evolution equations depends on (R, beta),
/// so the conversion happens at evolution time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub model: FieldModel,
    pub weight_applied: bool,
    pub psi: Array2<Complex64>,
    pub rho: Array2<Complex64>,
}

impl SpectralField {
    /// Amplitudes given directly; Nyquist entries are cleared.
    pub fn from_spectral(
        grid: GridSpec,
        model: FieldModel,
        mut psi: Array2<Complex64>,
        mut rho: Array2<Complex64>,
    ) -> Result<Self> {
        grid.check_spectral(&psi, "psi")?;
        grid.check_spectral(&rho, "rho")?;
        if let FieldModel::FullEuler { beta } = model {
            if !(beta >= 0.0 && beta.is_finite()) {
                return Err(Error::InvalidParams(format!("full Euler needs beta >= 0 (got {beta})")));
            }
        }
        clear_nyquist(&grid, &mut psi);
        clear_nyquist(&grid, &mut rho);
        Ok(SpectralField { grid, model, weight_applied: model.weight().is_some(), psi, rho })
    }

    /// Physical (psi, rho) samples, still weighted under full Euler.
    pub fn to_physical(&self) -> (Array2<f64>, Array2<f64>) {
        (mixed_to_physical(&self.grid, &spectral_to_mixed(&self.grid, &self.psi)), {
            mixed_to_physical(&self.grid, &spectral_to_mixed(&self.grid, &self.rho))
        })
    }

    /// Physical samples with any weight removed.
    pub fn to_physical_unweighted(&self) -> (Array2<f64>, Array2<f64>) {
        let (mut psi, mut rho) = self.to_physical();
        if let Some(beta) = self.model.weight() {
            apply_weight(&self.grid, &mut psi, -beta);
            apply_weight(&self.grid, &mut rho, -beta);
        }
        (psi, rho)
    }

    /// Hermitian defect max |f(k, eta) - conj f(-k, -eta)| over both fields.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.grid, &self.psi).max(hermitian_defect(&self.grid, &self.rho))
    }
}

fn clear_nyquist(grid: &GridSpec, a: &mut Array2<Complex64>) {
    a.row_mut(grid.nx / 2).fill(Complex64::new(0.0, 0.0));
    a.column_mut(grid.ny / 2).fill(Complex64::new(0.0, 0.0));
}

pub fn hermitian_defect(grid: &GridSpec, a: &Array2<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..grid.nx {
        for m in 0..grid.ny {
            let (ip, mp) = ((grid.nx - i) % grid.nx, (grid.ny - m) % grid.ny);
            worst = worst.max((a[[i, m]] - a[[ip, mp]].conj()).norm());
        }
    }
    worst
}

/// Forward transform of sampled initial data. Under full Euler the samples
/// (psi0 and rho0 = rho/rho_0 at t = 0) are multiplied by e^{-beta y/2}
/// first. Samples on the two boundary rows above `tol_trunc` in absolute
/// value (after weighting) are a truncation error.
pub fn ingest_initial_data(
    grid: &GridSpec,
    psi0: &Array2<f64>,
    rho0: &Array2<f64>,
    model: FieldModel,
    tol_trunc: f64,
) -> Result<SpectralField> {
    grid.check_physical(psi0, "psi0")?;
    grid.check_physical(rho0, "rho0")?;
    let prep = |f: &Array2<f64>| -> Result<Array2<Complex64>> {
        let mut f = f.clone();
        if let Some(beta) = model.weight() {
            apply_weight(grid, &mut f, beta);
        }
        let edge = f.row(0).iter().chain(f.row(grid.ny - 1).iter()).fold(0.0f64, |m, v| m.max(v.abs()));
        if !(edge <= tol_trunc) {
            return Err(Error::TruncationError(edge));
        }
        physical_to_spectral(grid, &f)
    };
    SpectralField::from_spectral(*grid, model, prep(psi0)?, prep(rho0)?)
}

/// Samples of `f(x, y)` on the grid, in the (ny, nx) layout.
pub fn sample<F: Fn(f64, f64) -> f64>(grid: &GridSpec, f: F) -> Array2<f64> {
    Array2::from_shape_fn((grid.ny, grid.nx), |(j, i)| f(grid.x(i), grid.y(j)))
}
