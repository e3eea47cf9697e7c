//! Evolution of a whole spectral field, one closed-form mode at a time.

use super::norm::{spectral_norm, NormKind, Projection};
use super::{mixed_to_physical, spectral_to_mixed, FieldModel, GridSpec, SpectralField};
use crate::boussinesq::{self, BoussinesqBasis, BoussinesqMode};
use crate::dispersive::{evolve_no_shear_mode, DispersionModel, DispersionParams};
use crate::error::{Error, Result};
use crate::euler::{self, EulerBasis, EulerMode, EulerModeParams};
use crate::hypergeometric::EvalConfig;
use crate::regime::{ModeIndex, Regime, RegimeParams};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Stream,
    Vx,
    Vy,
    Density,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::Stream, Component::Vx, Component::Vy, Component::Density];

    pub fn name(&self) -> &'static str {
        match self {
            Component::Stream => "stream",
            Component::Vx => "vx",
            Component::Vy => "vy",
            Component::Density => "density",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    /// Coordinates (z, y) = (x - t y, y) moving with the shear.
    Sheared,
}

/// One time slice: sheared-frame spectral amplitudes of every component.
/// Lab-frame samples differ by the unimodular factor e^{-ik shift y} in the
/// mixed representation; `shift` is the shear time (0 without shear).
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedField {
    pub grid: GridSpec,
    pub t: f64,
    pub shift: f64,
    /// Some(beta) when the components are e^{-beta y/2}-weighted.
    pub weight: Option<f64>,
    pub stream: Array2<Complex64>,
    pub vx: Array2<Complex64>,
    pub vy: Array2<Complex64>,
    pub density: Array2<Complex64>,
}

impl EvolvedField {
    pub fn component(&self, c: Component) -> &Array2<Complex64> {
        match c {
            Component::Stream => &self.stream,
            Component::Vx => &self.vx,
            Component::Vy => &self.vy,
            Component::Density => &self.density,
        }
    }

    /// Mixed (k, y) representation in the requested frame.
    pub fn mixed(&self, c: Component, frame: Frame) -> Array2<Complex64> {
        let mut g = spectral_to_mixed(&self.grid, self.component(c));
        if frame == Frame::Lab && self.shift != 0.0 {
            for ((i, j), v) in g.indexed_iter_mut() {
                let phase = -(self.grid.k(i) as f64) * self.shift * self.grid.y(j);
                *v *= Complex64::from_polar(1.0, phase);
            }
        }
        g
    }

    pub fn to_physical(&self, c: Component, frame: Frame) -> Array2<f64> {
        mixed_to_physical(&self.grid, &self.mixed(c, frame))
    }

    /// Norms are taken in the lab frame (Sobolev weights use the lab
    /// frequency eta - k t); L^2 and L^2_x L^inf_y are frame independent.
    pub fn norm(&self, c: Component, kind: NormKind, projection: Projection, weight: Option<f64>) -> Result<f64> {
        spectral_norm(&self.grid, self.component(c), self.shift, self.weight, kind, projection, weight)
    }
}

/// Lab-frame physical samples at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSnapshot {
    pub grid: GridSpec,
    pub t: f64,
    pub weight: Option<f64>,
    pub stream: Array2<f64>,
    pub vx: Array2<f64>,
    pub vy: Array2<f64>,
    pub density: Array2<f64>,
}

impl PhysicalSnapshot {
    pub fn component(&self, c: Component) -> &Array2<f64> {
        match c {
            Component::Stream => &self.stream,
            Component::Vx => &self.vx,
            Component::Vy => &self.vy,
            Component::Density => &self.density,
        }
    }
}

pub fn evolve_field(fld: &SpectralField, p: &RegimeParams, t: f64) -> Result<PhysicalSnapshot> {
    let e = evolve_spectral(fld, p, &[t])?.remove(0);
    Ok(PhysicalSnapshot {
        grid: e.grid,
        t,
        weight: e.weight,
        stream: e.to_physical(Component::Stream, Frame::Lab),
        vx: e.to_physical(Component::Vx, Frame::Lab),
        vy: e.to_physical(Component::Vy, Frame::Lab),
        density: e.to_physical(Component::Density, Frame::Lab),
    })
}

enum Route {
    /// B^2 = 0: the explicit unstratified solution, density frozen.
    Homogeneous,
    /// Shared hypergeometric basis, or None inside the degenerate band.
    Boussinesq(Option<BoussinesqBasis>),
    Euler {
        beta: f64,
    },
    NoShear(DispersionParams),
}

fn route(fld: &SpectralField, p: &RegimeParams) -> Result<Route> {
    if let FieldModel::FullEuler { beta } = fld.model {
        if (beta - p.beta).abs() > 1e-12 * beta.max(p.beta).max(1.0) {
            return Err(Error::InvalidParams(format!(
                "field was weighted with beta = {beta} but the parameters have beta = {}",
                p.beta
            )));
        }
    }
    Ok(match (p.regime, fld.model) {
        (Regime::Homogeneous, FieldModel::FullEuler { beta }) if beta > 0.0 => {
            return Err(Error::UnsupportedCombination(format!(
                "B^2 = 0 means beta = 0 in the full Euler model (got beta = {beta} with g = 0)"
            )));
        }
        (Regime::Homogeneous, _) => Route::Homogeneous,
        (Regime::NoShear, FieldModel::Boussinesq) => {
            Route::NoShear(DispersionParams::from_regime(p, DispersionModel::Boussinesq)?)
        }
        (Regime::NoShear, FieldModel::FullEuler { .. }) => {
            Route::NoShear(DispersionParams::from_regime(p, DispersionModel::FullEuler)?)
        }
        (_, FieldModel::Boussinesq) => {
            let gap = p.nu.norm();
            let degenerate = gap > 0.0 && gap < EvalConfig::default().tol_degenerate;
            Route::Boussinesq(if degenerate { None } else { Some(BoussinesqBasis::new(p.nu)?) })
        }
        (_, FieldModel::FullEuler { beta }) => Route::Euler { beta },
    })
}

/// Evolve every mode to each of `times` (ascending, >= 0). Sheared regimes
/// take the shear time R t; without shear `times` are physical times.
/// k = 0 modes do not evolve in any regime.
///
/// Outputs per mode, with T the relative density of the equations:
/// stream psi, v^x = i(kt - eta) psi (minus beta/2 psi when weighted),
/// v^y = ik psi and density (beta/R) T, beta T without shear.
pub fn evolve_spectral(fld: &SpectralField, p: &RegimeParams, times: &[f64]) -> Result<Vec<EvolvedField>> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("times must be finite, non-negative and ascending".into()));
    }
    let grid = fld.grid;
    let route = route(fld, p)?;
    let sheared = p.regime != Regime::NoShear;
    let wb = fld.model.weight().unwrap_or(0.0);

    // Euler bases depend on k only
    let euler_bases: Vec<Option<EulerBasis>> = match route {
        Route::Euler { beta } => (0..grid.nx)
            .map(|i| {
                let k = grid.k(i);
                if k == 0 || i == grid.nx / 2 {
                    return Ok(None);
                }
                let ep = EulerModeParams::new(k, 0.0, beta, p.b2)?;
                if ep.integer_gap() < EvalConfig::default().tol_degenerate {
                    Ok(None)
                } else {
                    EulerBasis::new(&ep).map(Some)
                }
            })
            .collect::<Result<_>>()?,
        _ => Vec::new(),
    };

    let modes: Vec<(usize, usize)> = (0..grid.nx).flat_map(|i| (0..grid.ny).map(move |m| (i, m))).collect();
    let per_mode: Vec<Vec<[Complex64; 4]>> = modes
        .par_iter()
        .map(|&(i, m)| {
            let (k, eta) = (grid.k(i), grid.eta(m));
            let (psi0, rho0) = (fld.psi[[i, m]], fld.rho[[i, m]]);
            if grid.is_nyquist(i, m) || (psi0 == ZERO && rho0 == ZERO) {
                return Ok(vec![[ZERO; 4]; times.len()]);
            }
            if k == 0 {
                let vx = (-I * eta - 0.5 * wb) * psi0;
                return Ok(vec![[psi0, vx, ZERO, rho0]; times.len()]);
            }
            let kf = k as f64;
            match &route {
                Route::Homogeneous => {
                    let mode = ModeIndex::new(k, eta)?;
                    let states = boussinesq::evolve_mode_series(&mode, p, times, psi0, rho0)?;
                    Ok(states.iter().map(|s| [s.phi, s.vx, s.vy, s.tau]).collect())
                }
                Route::Boussinesq(basis) => {
                    let mode = ModeIndex::new(k, eta)?;
                    let t0 = p.r / p.beta * rho0;
                    let scale = p.beta / p.r;
                    let states = match basis {
                        Some(b) => {
                            let bm = BoussinesqMode::with_basis(&mode, p.b2, b.clone(), psi0, t0)?;
                            times.iter().map(|&t| bm.state(t)).collect::<Result<Vec<_>>>()?
                        }
                        None => boussinesq::evolve_mode_series(&mode, p, times, psi0, t0)?,
                    };
                    Ok(states.iter().map(|s| [s.phi, s.vx, s.vy, scale * s.tau]).collect())
                }
                Route::Euler { beta } => {
                    let ep = EulerModeParams::new(k, eta, *beta, p.b2)?;
                    let up0 = p.r / beta * rho0;
                    let scale = beta / p.r;
                    let states = match &euler_bases[i] {
                        Some(b) => {
                            let em = EulerMode::with_basis(&ep, b.clone(), psi0, up0)?;
                            times.iter().map(|&t| em.state(t)).collect::<Result<Vec<_>>>()?
                        }
                        None => euler::evolve_euler_mode_series(&ep, times, psi0, up0)?,
                    };
                    Ok(states.iter().map(|s| [s.chi, s.wvx, s.wvy, scale * s.mu]).collect())
                }
                Route::NoShear(dp) => {
                    let t0 = rho0 / dp.beta;
                    times
                        .iter()
                        .map(|&t| {
                            let (psi, th) = evolve_no_shear_mode(k, eta, dp, t, psi0, t0)?;
                            Ok([psi, (-I * eta - 0.5 * wb) * psi, I * kf * psi, dp.beta * th])
                        })
                        .collect()
                }
            }
        })
        .collect::<Result<_>>()?;

    let weight = fld.model.weight().filter(|_| fld.weight_applied);
    Ok(times
        .iter()
        .enumerate()
        .map(|(n, &t)| {
            let pick = |c: usize| Array2::from_shape_fn((grid.nx, grid.ny), |(i, m)| per_mode[i * grid.ny + m][n][c]);
            EvolvedField {
                grid,
                t,
                shift: if sheared { t } else { 0.0 },
                weight,
                stream: pick(0),
                vx: pick(1),
                vy: pick(2),
                density: pick(3),
            }
        })
        .collect())
}
