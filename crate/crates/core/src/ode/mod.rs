//! Brute-force time integration of the per-mode ODEs, used as the oracle for
//! every closed-form solver.

mod dopri5;

pub use dopri5::{integrate_dense, integrate_fixed, Tolerances};

use crate::boussinesq::{self, initial_phi_rate};
use crate::error::{Error, Result};
use crate::euler::{self, EulerModeParams};
use crate::regime::{ModeIndex, Regime, RegimeParams};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub type State = [Complex64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeKind {
    /// (1+s^2) phi'' + 4 s phi' + (2+B^2) phi = 0, state (phi, phi_t).
    BoussinesqPhi,
    /// f_t = i k B^2 tau, tau_t = i k phi, phi = f / (k^2 (1+s^2)); state (f, tau).
    BoussinesqSystem,
    /// d_tt[(1+kappa^2 s^2) chi] - 2 i beta1 kappa chi_t + B^2 kappa^2 chi = 0,
    /// state (w, w_t) with w = (1+kappa^2 s^2) chi.
    EulerChi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeParams {
    /// `b2` is B^2, or the dimensional g when integrating the unstratified
    /// equation with density data.
    Boussinesq {
        mode: ModeIndex,
        b2: f64,
    },
    Euler(EulerModeParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSpec {
    pub kind: OdeKind,
    pub params: OdeParams,
    pub init: State,
}

impl OdeSpec {
    /// Stream-function form with phi(0) = psi0 and the matching phi_t(0).
    pub fn boussinesq_phi(mode: ModeIndex, b2: f64, psi0: Complex64, t0: Complex64) -> Self {
        OdeSpec {
            kind: OdeKind::BoussinesqPhi,
            params: OdeParams::Boussinesq { mode, b2 },
            init: [psi0, initial_phi_rate(&mode, b2, psi0, t0)],
        }
    }

    /// B^2 = 0 with density data: phi_t(0) = (i g rho0 / k - 2 s0 psi0)/(1+s0^2).
    pub fn boussinesq_homogeneous(mode: ModeIndex, g: f64, psi0: Complex64, rho0: Complex64) -> Self {
        OdeSpec {
            kind: OdeKind::BoussinesqPhi,
            params: OdeParams::Boussinesq { mode, b2: 0.0 },
            init: [psi0, initial_phi_rate(&mode, g, psi0, rho0)],
        }
    }

    pub fn boussinesq_system(mode: ModeIndex, b2: f64, psi0: Complex64, t0: Complex64) -> Self {
        let s0 = mode.s0();
        let k = mode.kf();
        OdeSpec {
            kind: OdeKind::BoussinesqSystem,
            params: OdeParams::Boussinesq { mode, b2 },
            init: [k * k * (1.0 + s0 * s0) * psi0, t0],
        }
    }

    pub fn euler_chi(p: EulerModeParams, psi0: Complex64, up0: Complex64) -> Self {
        let s0 = p.s0();
        let q = 1.0 + p.kappa * p.kappa * s0 * s0;
        let chi_t = euler::initial_chi_rate(&p, psi0, up0);
        OdeSpec {
            kind: OdeKind::EulerChi,
            params: OdeParams::Euler(p),
            init: [q * psi0, 2.0 * p.kappa * p.kappa * s0 * psi0 + q * chi_t],
        }
    }

    fn rhs(&self) -> Result<impl Fn(f64, &State) -> State + '_> {
        let kind = self.kind;
        let params = self.params;
        match (kind, params) {
            (OdeKind::EulerChi, OdeParams::Euler(_)) => {}
            (OdeKind::BoussinesqPhi | OdeKind::BoussinesqSystem, OdeParams::Boussinesq { .. }) => {}
            _ => return Err(Error::InvalidParams("ODE kind does not match its parameters".into())),
        }
        Ok(move |t: f64, y: &State| -> State {
            match params {
                OdeParams::Boussinesq { mode, b2 } => {
                    let s = mode.shear(t).s;
                    let q = 1.0 + s * s;
                    let k = mode.kf();
                    if kind == OdeKind::BoussinesqPhi {
                        [y[1], -(4.0 * s * y[1] + (2.0 + b2) * y[0]) / q]
                    } else {
                        let phi = y[0] / (k * k * q);
                        [I * k * b2 * y[1], I * k * phi]
                    }
                }
                OdeParams::Euler(p) => {
                    let s = p.s0() + t;
                    let k2 = p.kappa * p.kappa;
                    let q = 1.0 + k2 * s * s;
                    let chi = y[0] / q;
                    let chi_t = (y[1] - 2.0 * k2 * s * chi) / q;
                    [y[1], 2.0 * I * p.beta1 * p.kappa * chi_t - p.b2 * k2 * chi]
                }
            }
        })
    }
}

/// Raw oracle states at each time of `t_grid` (ascending, starting at 0).
pub fn integrate(spec: &OdeSpec, t_grid: &[f64], tol: &Tolerances) -> Result<Vec<State>> {
    if t_grid.first().is_some_and(|&t| t != 0.0) {
        return Err(Error::InvalidParams("oracle time grid must start at t = 0".into()));
    }
    integrate_dense(spec.rhs()?, 0.0, spec.init, t_grid, tol)
}

/// A time list made oracle-ready: ascending with a leading 0.
pub(crate) struct OriginGrid {
    pub times: Vec<f64>,
    offset: usize,
}

impl OriginGrid {
    /// Indices into `times` of the caller's original entries.
    pub fn pick(&self, n: usize) -> impl Iterator<Item = usize> {
        self.offset..self.offset + n
    }
}

pub(crate) fn with_origin(times: &[f64]) -> Result<OriginGrid> {
    if times.iter().any(|t| *t < 0.0 || !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("times must be finite, non-negative and ascending".into()));
    }
    if times.first() == Some(&0.0) {
        Ok(OriginGrid { times: times.to_vec(), offset: 0 })
    } else {
        let mut v = Vec::with_capacity(times.len() + 1);
        v.push(0.0);
        v.extend_from_slice(times);
        Ok(OriginGrid { times: v, offset: 1 })
    }
}

/// Oracle amplitudes (stream, density) derived from the raw states.
pub fn boussinesq_oracle(
    mode: &ModeIndex,
    p: &RegimeParams,
    t_grid: &[f64],
    psi0: Complex64,
    t0: Complex64,
    tol: &Tolerances,
) -> Result<Vec<(Complex64, Complex64)>> {
    if p.regime == Regime::Homogeneous {
        let phi = integrate(&OdeSpec::boussinesq_homogeneous(*mode, p.g / p.r, psi0, t0), t_grid, tol)?;
        return Ok(phi.iter().map(|y| (y[0], t0)).collect());
    }
    let phi = integrate(&OdeSpec::boussinesq_phi(*mode, p.b2, psi0, t0), t_grid, tol)?;
    let sys = integrate(&OdeSpec::boussinesq_system(*mode, p.b2, psi0, t0), t_grid, tol)?;
    Ok(phi.iter().zip(&sys).map(|(a, b)| (a[0], b[1])).collect())
}

/// Oracle amplitudes (chi, mu) for the weighted full-Euler mode.
pub fn euler_oracle(
    p: &EulerModeParams,
    t_grid: &[f64],
    psi0: Complex64,
    up0: Complex64,
    tol: &Tolerances,
) -> Result<Vec<(Complex64, Complex64)>> {
    let raw = integrate(&OdeSpec::euler_chi(*p, psi0, up0), t_grid, tol)?;
    let k = p.k as f64;
    let k2 = p.kappa * p.kappa;
    Ok(t_grid
        .iter()
        .zip(&raw)
        .map(|(&t, y)| {
            let s = p.s0() + t;
            let chi = y[0] / (1.0 + k2 * s * s);
            // (1+|s~|^2) chi_t + 2 s~ chi = w_t / kappa^2 - (i beta / k) chi
            let mu = -(I * k / p.b2) * (y[1] / k2 - I * p.beta / k * chi);
            (chi, mu)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeProblem {
    Boussinesq { mode: ModeIndex, params: RegimeParams, psi0: Complex64, t0: Complex64 },
    Euler { params: EulerModeParams, psi0: Complex64, up0: Complex64 },
}

pub const RELATIVE_FLOOR: f64 = 1e-14;

/// max over the grid of |closed - oracle| / max(|closed|, 1e-14), taken over
/// both the stream and the density amplitude.
pub fn compare_closed_form(problem: &ModeProblem, t_grid: &[f64], tol: &Tolerances) -> Result<f64> {
    let (closed, oracle): (Vec<(Complex64, Complex64)>, _) = match problem {
        ModeProblem::Boussinesq { mode, params, psi0, t0 } => {
            let closed = boussinesq::evolve_mode_series(mode, params, t_grid, *psi0, *t0)?
                .into_iter()
                .map(|st| (st.phi, st.tau))
                .collect();
            (closed, boussinesq_oracle(mode, params, t_grid, *psi0, *t0, tol)?)
        }
        ModeProblem::Euler { params, psi0, up0 } => {
            let closed = euler::evolve_euler_mode_series(params, t_grid, *psi0, *up0)?
                .into_iter()
                .map(|st| (st.chi, st.mu))
                .collect();
            (closed, euler_oracle(params, t_grid, *psi0, *up0, tol)?)
        }
    };
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(RELATIVE_FLOOR);
    Ok(closed.iter().zip(&oracle).map(|(c, o)| rel(c.0, o.0).max(rel(c.1, o.1))).fold(0.0, f64::max))
}
