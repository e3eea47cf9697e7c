//! Closed-form evolution of one Fourier mode of the linearized Boussinesq
//! system in sheared coordinates.
//!
//! With s = t - eta/k the stream-function amplitude solves
//! (1+s^2) phi'' + 4 s phi' + (2+B^2) phi = 0, whose solutions are
//! g1 = F(3/4-nu/2, 3/4+nu/2; 1/2; -s^2) and g2 = s F(5/4-nu/2, 5/4+nu/2; 3/2; -s^2).

use crate::error::{Error, Result};
use crate::hypergeometric::{EvalConfig, EvalDomain, HypPair, HypParams};
use crate::ode::{self, OdeSpec, Tolerances};
use crate::regime::{jb, ModeIndex, Regime, RegimeParams};
use crate::special::{digamma, gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    /// Stream-function amplitude.
    pub phi: Complex64,
    /// Relative-density amplitude.
    pub tau: Complex64,
    pub vx: Complex64,
    pub vy: Complex64,
}

impl ModeState {
    pub fn new(k: i64, s: f64, phi: Complex64, tau: Complex64) -> Self {
        let vy = I * k as f64 * phi;
        ModeState { phi, tau, vx: vy * s, vy }
    }
}

/// (g1, g2, g1', g2') at one value of s; primes are d/ds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialSolutions {
    pub g1: Complex64,
    pub g2: Complex64,
    pub dg1: Complex64,
    pub dg2: Complex64,
}

impl SpecialSolutions {
    pub fn wronskian(&self) -> Complex64 {
        self.g1 * self.dg2 - self.dg1 * self.g2
    }
}

/// Prepared hypergeometric evaluators for g1 and g2 at a fixed nu.
#[derive(Debug, Clone)]
pub struct BoussinesqBasis {
    nu: Complex64,
    f1: HypPair,
    f2: HypPair,
    log_case: bool,
}

impl BoussinesqBasis {
    pub fn new(nu: Complex64) -> Result<Self> {
        Self::with_config(nu, EvalConfig::default())
    }

    pub fn with_config(nu: Complex64, cfg: EvalConfig) -> Result<Self> {
        let h = nu / 2.0;
        let p1 = HypParams::new(0.75 - h, 0.75 + h, Complex64::new(0.5, 0.0))?;
        let p2 = HypParams::new(1.25 - h, 1.25 + h, Complex64::new(1.5, 0.0))?;
        Ok(BoussinesqBasis { nu, f1: HypPair::new(p1, cfg)?, f2: HypPair::new(p2, cfg)?, log_case: nu.norm() == 0.0 })
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    pub fn eval(&self, s: f64) -> Result<SpecialSolutions> {
        // -s^2 with a +0 imaginary part keeps us on the upper lip of the cut
        let u = Complex64::new(-(s * s), 0.0);
        let d = EvalDomain::NegativeRealAxis;
        let ((f1, df1), (f2, df2)) = if self.log_case {
            (self.f1.eval_log_aware(u, d)?, self.f2.eval_log_aware(u, d)?)
        } else {
            (self.f1.eval(u, d)?, self.f2.eval(u, d)?)
        };
        Ok(SpecialSolutions { g1: f1, g2: s * f2, dg1: -2.0 * s * df1, dg2: f2 - 2.0 * s * s * df2 })
    }
}

pub fn special_solutions(nu: Complex64, s: f64) -> Result<SpecialSolutions> {
    BoussinesqBasis::new(nu)?.eval(s)
}

fn require_stratified(p: &RegimeParams) -> Result<()> {
    match p.regime {
        Regime::Subcritical | Regime::Critical | Regime::Supercritical => Ok(()),
        other => Err(Error::InvalidParams(format!(
            "closed-form Boussinesq evolution needs 0 < B^2 < inf (regime {})",
            other.name()
        ))),
    }
}

/// Initial value of d(phi)/dt implied by (psi0, T0).
pub fn initial_phi_rate(m: &ModeIndex, b2: f64, psi0: Complex64, t0: Complex64) -> Complex64 {
    let s0 = m.s0();
    (I * b2 * t0 / m.kf() - 2.0 * s0 * psi0) / (1.0 + s0 * s0)
}

fn coefficients_from(
    m: &ModeIndex,
    b2: f64,
    at_s0: &SpecialSolutions,
    psi0: Complex64,
    t0: Complex64,
) -> (Complex64, Complex64) {
    let s0 = m.s0();
    let q = 1.0 + s0 * s0;
    let delta = 1.0 / (q * q);
    let SpecialSolutions { g1, g2, dg1, dg2 } = *at_s0;
    let rho = I * b2 * t0 / (m.kf() * q);
    let c1 = ((dg2 + 2.0 * s0 * g2 / q) * psi0 - rho * g2) / delta;
    let c2 = ((-dg1 - 2.0 * s0 * g1 / q) * psi0 + rho * g1) / delta;
    (c1, c2)
}

/// C1, C2 with the closed-form Wronskian (1+s0^2)^{-2}.
pub fn mode_coefficients(
    m: &ModeIndex,
    p: &RegimeParams,
    psi0: Complex64,
    t0: Complex64,
) -> Result<(Complex64, Complex64)> {
    require_stratified(p)?;
    let basis = BoussinesqBasis::new(p.nu)?;
    Ok(coefficients_from(m, p.b2, &basis.eval(m.s0())?, psi0, t0))
}

/// A mode with its coefficients fixed, ready to be sampled in time.
#[derive(Debug, Clone)]
pub struct BoussinesqMode {
    mode: ModeIndex,
    b2: f64,
    basis: BoussinesqBasis,
    c1: Complex64,
    c2: Complex64,
    data: (Complex64, Complex64),
}

impl BoussinesqMode {
    pub fn new(m: &ModeIndex, p: &RegimeParams, psi0: Complex64, t0: Complex64) -> Result<Self> {
        require_stratified(p)?;
        Self::with_basis(m, p.b2, BoussinesqBasis::new(p.nu)?, psi0, t0)
    }

    pub fn with_basis(m: &ModeIndex, b2: f64, basis: BoussinesqBasis, psi0: Complex64, t0: Complex64) -> Result<Self> {
        let (c1, c2) = coefficients_from(m, b2, &basis.eval(m.s0())?, psi0, t0);
        Ok(BoussinesqMode { mode: *m, b2, basis, c1, c2, data: (psi0, t0) })
    }

    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.c1, self.c2)
    }

    pub fn state(&self, t: f64) -> Result<ModeState> {
        let s = self.mode.shear(t).s;
        if t == 0.0 {
            return Ok(ModeState::new(self.mode.k, s, self.data.0, self.data.1));
        }
        let g = self.basis.eval(s)?;
        let phi = self.c1 * g.g1 + self.c2 * g.g2;
        let dphi = self.c1 * g.dg1 + self.c2 * g.dg2;
        let k = self.mode.kf();
        let tau = -(I * k / self.b2) * ((1.0 + s * s) * dphi + 2.0 * s * phi);
        Ok(ModeState::new(self.mode.k, s, phi, tau))
    }
}

pub fn evolve_mode(m: &ModeIndex, p: &RegimeParams, t: f64, psi0: Complex64, t0: Complex64) -> Result<ModeState> {
    Ok(evolve_mode_series(m, p, &[t], psi0, t0)?.remove(0))
}

/// Evolve one mode to every time in `times`. Homogeneous parameters use the
/// explicit B^2 = 0 solution (with `t0` read as the density amplitude rho/A,
/// and gravity entering as g/R since `times` are shear times R t); a
/// nu inside the degenerate band around 0 (but not exactly 0) falls back to
/// the ODE oracle.
pub fn evolve_mode_series(
    m: &ModeIndex,
    p: &RegimeParams,
    times: &[f64],
    psi0: Complex64,
    t0: Complex64,
) -> Result<Vec<ModeState>> {
    if p.regime == Regime::Homogeneous {
        return Ok(times.iter().map(|&t| homogeneous_state(m, p.g / p.r, t, psi0, t0)).collect());
    }
    require_stratified(p)?;
    let gap = p.nu.norm();
    if gap > 0.0 && gap < EvalConfig::default().tol_degenerate {
        return evolve_mode_by_ode(m, p.b2, times, psi0, t0);
    }
    let mode = BoussinesqMode::new(m, p, psi0, t0)?;
    times.iter().map(|&t| mode.state(t)).collect()
}

fn evolve_mode_by_ode(m: &ModeIndex, b2: f64, times: &[f64], psi0: Complex64, t0: Complex64) -> Result<Vec<ModeState>> {
    let grid = ode::with_origin(times)?;
    let tol = Tolerances::default();
    let phi = ode::integrate(&OdeSpec::boussinesq_phi(*m, b2, psi0, t0), &grid.times, &tol)?;
    let sys = ode::integrate(&OdeSpec::boussinesq_system(*m, b2, psi0, t0), &grid.times, &tol)?;
    Ok(grid.pick(times.len()).map(|i| ModeState::new(m.k, m.shear(grid.times[i]).s, phi[i][0], sys[i][1])).collect())
}

/// Explicit solution without stratification (B^2 = 0), `g` dimensional:
/// tau = rho0 and phi = [(1+s0^2) psi0 + (i t g / k) rho0] / (1+s^2).
pub fn evolve_mode_homogeneous(m: &ModeIndex, g: f64, t: f64, psi0: Complex64, rho0: Complex64) -> Result<ModeState> {
    Ok(homogeneous_state(m, g, t, psi0, rho0))
}

fn homogeneous_state(m: &ModeIndex, g: f64, t: f64, psi0: Complex64, rho0: Complex64) -> ModeState {
    let sv = m.shear(t);
    let phi = ((1.0 + sv.s0 * sv.s0) * psi0 + I * t * g / m.kf() * rho0) / (1.0 + sv.s * sv.s);
    ModeState::new(m.k, sv.s, phi, rho0)
}

/// max_t |phi(t)| / [<s>^{-3/2+Re nu} <s0>^{3/2+Re nu} (|psi0| + |T0|/(<s0>|k|))],
/// with an extra <log<s>><log<s0>> in the envelope at B^2 = 1/4.
pub fn envelope_bound_ratio(
    m: &ModeIndex,
    p: &RegimeParams,
    t_grid: &[f64],
    psi0: Complex64,
    t0: Complex64,
) -> Result<f64> {
    let s0 = m.s0();
    let data = psi0.norm() + t0.norm() / (jb(s0) * m.kf().abs());
    if data == 0.0 {
        return Ok(0.0);
    }
    let re_nu = p.nu.re;
    let states = evolve_mode_series(m, p, t_grid, psi0, t0)?;
    let mut worst: f64 = 0.0;
    for (&t, st) in t_grid.iter().zip(&states) {
        let s = t + s0;
        let mut env = jb(s).powf(-1.5 + re_nu) * jb(s0).powf(1.5 + re_nu) * data;
        if p.regime == Regime::Critical {
            env *= jb(jb(s).ln()) * jb(jb(s0).ln());
        }
        worst = worst.max(st.phi.norm() / env);
    }
    Ok(worst)
}

/// Leading large-s behaviour of (g1, g2, g1', g2') for s > 0, from the
/// 1/z connection formula (nu != 0) or its logarithmic limit (nu = 0).
pub fn asymptotic_leading(nu: Complex64, s: f64) -> SpecialSolutions {
    let sp = PI.sqrt();
    let ls = s.ln();
    if nu.norm() == 0.0 {
        let euler_gamma = -digamma(Complex64::new(1.0, 0.0));
        let q1 = 2.0 * sp / (gamma(Complex64::new(-0.25, 0.0)) * gamma(Complex64::new(0.75, 0.0)));
        let q2 = sp / (gamma(Complex64::new(0.25, 0.0)) * gamma(Complex64::new(1.25, 0.0)));
        let k1 = euler_gamma + digamma(Complex64::new(0.75, 0.0)) + 2.0;
        let k2 = euler_gamma + digamma(Complex64::new(0.25, 0.0)) + 2.0;
        let p32 = s.powf(-1.5);
        let p52 = s.powf(-2.5);
        // d/ds [s^{-3/2}(ln s - K)] = s^{-5/2}(1 - 3/2 (ln s - K))
        return SpecialSolutions {
            g1: q1 * p32 * (ls - k1),
            g2: q2 * p32 * (ls - k2),
            dg1: q1 * p52 * (1.0 - 1.5 * (ls - k1)),
            dg2: q2 * p52 * (1.0 - 1.5 * (ls - k2)),
        };
    }
    let pw = |e: Complex64| (e * ls).exp();
    let g = gamma;
    let c = |x: f64| Complex64::new(x, 0.0);
    let (h, mh) = (nu / 2.0, -nu / 2.0);
    let a_plus = sp * g(nu) / (g(c(-0.25) + h) * g(c(0.75) + h));
    let a_minus = sp * g(-nu) / (g(c(-0.25) + mh) * g(c(0.75) + mh));
    let b_plus = 0.5 * sp * g(nu) / (g(c(0.25) + h) * g(c(1.25) + h));
    let b_minus = 0.5 * sp * g(-nu) / (g(c(0.25) + mh) * g(c(1.25) + mh));
    let (ep, em) = (-1.5 + nu, -1.5 - nu);
    SpecialSolutions {
        g1: a_plus * pw(ep) + a_minus * pw(em),
        g2: b_plus * pw(ep) + b_minus * pw(em),
        dg1: a_plus * ep * pw(ep - 1.0) + a_minus * em * pw(em - 1.0),
        dg2: b_plus * ep * pw(ep - 1.0) + b_minus * em * pw(em - 1.0),
    }
}

#[cfg(test)]
mod tests;
