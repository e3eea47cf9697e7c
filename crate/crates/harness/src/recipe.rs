//! Initial data (psi0, rho0) as lab-frame samples in the (ny, nx) layout.

use crate::config::{DataRecipe, ExperimentConfig};
use crate::error::{io_error, AtStage, HarnessError, Result, Stage};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use strato_core::field::io::{read_binary, read_csv};
use strato_core::field::{sample, spectral_to_physical, GridSpec};

/// x-structure shared by the packet recipes.
fn stream_harmonics(x: f64) -> f64 {
    x.sin() + 0.5 * (2.0 * x + 0.3).cos() + 0.25 * (3.0 * x).sin()
}

pub fn build(cfg: &ExperimentConfig, grid: &GridSpec) -> Result<(Array2<f64>, Array2<f64>)> {
    match &cfg.data {
        DataRecipe::GaussianPacket { density, amplitude, width } => {
            let (a, w2) = (*amplitude, 2.0 * width * width);
            let psi = sample(grid, |x, y| a * stream_harmonics(x) * (-y * y / w2).exp());
            let rho = if *density {
                sample(grid, |x, y| 0.5 * a * (x + 0.7).cos() * (-(y - 0.3).powi(2) / w2).exp())
            } else {
                Array2::zeros((grid.ny, grid.nx))
            };
            Ok((psi, rho))
        }
        DataRecipe::RandomPacket { kmax, density, width } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut draw = |k: usize| -> (f64, f64, f64) {
                (rng.gen_range(0.2..1.0) / k as f64, rng.gen_range(0.0..2.0 * PI), rng.gen_range(-1.0..1.0))
            };
            let kmax = (*kmax).min(grid.nx / 2 - 1).max(1);
            let stream: Vec<_> = (1..=kmax).map(&mut draw).collect();
            let dens: Vec<_> = (1..=kmax).map(&mut draw).collect();
            let w2 = 2.0 * width * width;
            let packet = |terms: &[(f64, f64, f64)], x: f64, y: f64| -> f64 {
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, (a, ph, c))| a * ((i + 1) as f64 * x + ph).cos() * (-(y - c).powi(2) / w2).exp())
                    .sum()
            };
            let psi = sample(grid, |x, y| packet(&stream, x, y));
            let rho = if *density {
                sample(grid, |x, y| 0.5 * packet(&dens, x, y))
            } else {
                Array2::zeros((grid.ny, grid.nx))
            };
            Ok((psi, rho))
        }
        DataRecipe::RoughPacket { order, density } => {
            let profile = rough_profile(grid, *order)?;
            let psi = Array2::from_shape_fn((grid.ny, grid.nx), |(j, i)| stream_harmonics(grid.x(i)) * profile[j]);
            let rho = if *density {
                Array2::from_shape_fn((grid.ny, grid.nx), |(j, i)| 0.5 * (grid.x(i) + 0.7).cos() * profile[j])
            } else {
                Array2::zeros((grid.ny, grid.nx))
            };
            Ok((psi, rho))
        }
        DataRecipe::File { stream, density } => {
            let psi = read_samples(stream, grid)?;
            let rho = match density {
                Some(p) => read_samples(p, grid)?,
                None => Array2::zeros((grid.ny, grid.nx)),
            };
            Ok((psi, rho))
        }
    }
}

/// y-profile with spectrum <eta>^{-(order + 1/2)} on the grid, peak 1.
fn rough_profile(grid: &GridSpec, order: f64) -> Result<Vec<f64>> {
    let mut a = Array2::from_elem((grid.nx, grid.ny), Complex64::new(0.0, 0.0));
    for m in 0..grid.ny {
        if m != grid.ny / 2 {
            a[[0, m]] = Complex64::new(grid.eta(m).hypot(1.0).powf(-(order + 0.5)), 0.0);
        }
    }
    let f = spectral_to_physical(grid, &a).at(Stage::Ingest)?;
    let col: Vec<f64> = f.column(0).to_vec();
    let peak = col.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(col.into_iter().map(|v| v / peak).collect())
}

fn read_samples(path: &Path, grid: &GridSpec) -> Result<Array2<f64>> {
    let file = File::open(path).map_err(|e| io_error(Stage::Ingest, path, e))?;
    let reader = BufReader::new(file);
    let values = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv(reader).at(Stage::Ingest)?
    } else {
        let (h, values) = read_binary(reader).at(Stage::Ingest)?;
        if (h.nx, h.ny) != (grid.nx, grid.ny) || (h.ly - grid.ly).abs() > 1e-12 * grid.ly {
            return Err(HarnessError::Config(format!(
                "{}: file grid ({}, {}, {}) differs from [grid] ({}, {}, {})",
                path.display(),
                h.nx,
                h.ny,
                h.ly,
                grid.nx,
                grid.ny,
                grid.ly
            )));
        }
        values
    };
    if values.dim() != (grid.ny, grid.nx) {
        return Err(HarnessError::Config(format!(
            "{}: samples are {:?}, [grid] needs (ny, nx) = ({}, {})",
            path.display(),
            values.dim(),
            grid.ny,
            grid.nx
        )));
    }
    Ok(values)
}
