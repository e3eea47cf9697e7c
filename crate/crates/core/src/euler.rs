//! Closed-form evolution of one mode of the full linearized Euler system in
//! the weighted variables chi = e^{-beta y/2} phi, mu = e^{-beta y/2} tau.
//!
//! With v = (1 + i kappa s)/2 the two solutions are
//! g3 = F(3/2-nu, 3/2+nu; 2-beta1; v) and
//! g4 = v^{beta1-1} F(1/2+beta1-nu, 1/2+beta1+nu; beta1; v),
//! both evaluated on the line Re v = 1/2.

use crate::error::{Error, Result};
use crate::hypergeometric::{EvalConfig, EvalDomain, HypPair, HypParams};
use crate::ode::{self, Tolerances};
use crate::regime::{jb, RegimeParams, CRITICAL_TOL};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerModeParams {
    pub k: i64,
    pub eta: f64,
    pub beta: f64,
    pub b2: f64,
    /// sqrt(beta^2/4 + k^2)
    pub m: f64,
    /// k / m
    pub kappa: f64,
    /// beta / (2m)
    pub beta1: f64,
    pub nu: Complex64,
    /// s0 - i beta / (2k)
    pub s_tilde0: Complex64,
}

impl EulerModeParams {
    pub fn new(k: i64, eta: f64, beta: f64, b2: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMode("k = 0 modes do not evolve under shear".into()));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidMode(format!(
                "full Euler mode needs beta > 0 (got {beta}); beta = 0 is the unstratified Boussinesq case"
            )));
        }
        if !(b2 > 0.0 && b2.is_finite()) || !eta.is_finite() {
            return Err(Error::InvalidParams(format!("need finite eta and B^2 > 0 (got {eta}, {b2})")));
        }
        let kf = k as f64;
        let m = (0.25 * beta * beta + kf * kf).sqrt();
        let b2 = if (b2 - 0.25).abs() <= CRITICAL_TOL { 0.25 } else { b2 };
        let nu = RegimeParams::from_b2(b2)?.nu;
        Ok(EulerModeParams {
            k,
            eta,
            beta,
            b2,
            m,
            kappa: kf / m,
            beta1: beta / (2.0 * m),
            nu,
            s_tilde0: Complex64::new(-eta / kf, -beta / (2.0 * kf)),
        })
    }

    pub fn s0(&self) -> f64 {
        -self.eta / self.k as f64
    }

    pub fn s_tilde(&self, s: f64) -> Complex64 {
        Complex64::new(s, -self.beta / (2.0 * self.k as f64))
    }

    /// Distance of a - b = -2 nu from the integers.
    pub fn integer_gap(&self) -> f64 {
        let d = 2.0 * self.nu;
        ((d.re - d.re.round()).powi(2) + d.im * d.im).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedModeState {
    pub chi: Complex64,
    pub mu: Complex64,
    /// e^{-beta y/2} v^x amplitude: (i k s - beta/2) chi.
    pub wvx: Complex64,
    /// e^{-beta y/2} v^y amplitude: i k chi.
    pub wvy: Complex64,
}

impl WeightedModeState {
    pub fn new(p: &EulerModeParams, s: f64, chi: Complex64, mu: Complex64) -> Self {
        let k = p.k as f64;
        WeightedModeState { chi, mu, wvx: (I * k * s - 0.5 * p.beta) * chi, wvy: I * k * chi }
    }
}

/// (g3, g4, g3', g4') at one s; primes are d/ds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerSolutions {
    pub g3: Complex64,
    pub g4: Complex64,
    pub dg3: Complex64,
    pub dg4: Complex64,
}

impl EulerSolutions {
    pub fn wronskian(&self) -> Complex64 {
        self.g3 * self.dg4 - self.dg3 * self.g4
    }
}

#[derive(Debug, Clone)]
pub struct EulerBasis {
    kappa: f64,
    beta1: f64,
    f3: HypPair,
    f4: HypPair,
}

impl EulerBasis {
    pub fn new(p: &EulerModeParams) -> Result<Self> {
        Self::with_config(p, EvalConfig::default())
    }

    pub fn with_config(p: &EulerModeParams, cfg: EvalConfig) -> Result<Self> {
        let (nu, b1) = (p.nu, p.beta1);
        let p3 = HypParams::new(1.5 - nu, 1.5 + nu, Complex64::new(2.0 - b1, 0.0))?;
        let p4 = HypParams::new(0.5 + b1 - nu, 0.5 + b1 + nu, Complex64::new(b1, 0.0))?;
        Ok(EulerBasis { kappa: p.kappa, beta1: b1, f3: HypPair::new(p3, cfg)?, f4: HypPair::new(p4, cfg)? })
    }

    pub fn eval(&self, s: f64) -> Result<EulerSolutions> {
        let v = Complex64::new(0.5, 0.5 * self.kappa * s);
        let dv = 0.5 * I * self.kappa;
        let d = EvalDomain::HalfLine;
        let (f3, df3) = self.f3.eval(v, d)?;
        let (f4, df4) = self.f4.eval(v, d)?;
        let lv = v.ln();
        let e = self.beta1 - 1.0;
        let pw = (e * lv).exp();
        let g4 = pw * f4;
        Ok(EulerSolutions { g3: f3, g4, dg3: df3 * dv, dg4: (e * g4 / v + pw * df4) * dv })
    }
}

pub fn euler_special_solutions(p: &EulerModeParams, s: f64) -> Result<EulerSolutions> {
    EulerBasis::new(p)?.eval(s)
}

/// (kappa i/2)(beta1-1)(1/2 + kappa s0 i/2)^{-2+beta1}(1/2 - kappa s0 i/2)^{-2-beta1}
pub fn euler_delta(p: &EulerModeParams, s0: f64) -> Complex64 {
    let vp = Complex64::new(0.5, 0.5 * p.kappa * s0);
    let vm = Complex64::new(0.5, -0.5 * p.kappa * s0);
    0.5 * I * p.kappa * (p.beta1 - 1.0) * ((p.beta1 - 2.0) * vp.ln()).exp() * ((-2.0 - p.beta1) * vm.ln()).exp()
}

/// chi_t(0) = (i B^2 Upsilon0 / k - 2 s~0 Psi0) / (1 + |s~0|^2)
pub fn initial_chi_rate(p: &EulerModeParams, psi0: Complex64, up0: Complex64) -> Complex64 {
    (I * p.b2 * up0 / p.k as f64 - 2.0 * p.s_tilde0 * psi0) / (1.0 + p.s_tilde0.norm_sqr())
}

fn coefficients_from(
    p: &EulerModeParams,
    at_s0: &EulerSolutions,
    psi0: Complex64,
    up0: Complex64,
) -> (Complex64, Complex64) {
    let st0 = p.s_tilde0;
    let q = 1.0 + st0.norm_sqr();
    let delta = euler_delta(p, p.s0());
    let EulerSolutions { g3, g4, dg3, dg4 } = *at_s0;
    let rho = I * p.b2 * up0 / (p.k as f64 * q);
    let c3 = ((dg4 + 2.0 * st0 * g4 / q) * psi0 - rho * g4) / delta;
    let c4 = ((-dg3 - 2.0 * st0 * g3 / q) * psi0 + rho * g3) / delta;
    (c3, c4)
}

pub fn euler_mode_coefficients(p: &EulerModeParams, psi0: Complex64, up0: Complex64) -> Result<(Complex64, Complex64)> {
    let basis = EulerBasis::new(p)?;
    Ok(coefficients_from(p, &basis.eval(p.s0())?, psi0, up0))
}

#[derive(Debug, Clone)]
pub struct EulerMode {
    p: EulerModeParams,
    basis: EulerBasis,
    c3: Complex64,
    c4: Complex64,
    data: (Complex64, Complex64),
}

impl EulerMode {
    pub fn new(p: &EulerModeParams, psi0: Complex64, up0: Complex64) -> Result<Self> {
        Self::with_basis(p, EulerBasis::new(p)?, psi0, up0)
    }

    /// `basis` depends on (nu, kappa, beta1) only, so one serves every eta of a given k.
    pub fn with_basis(p: &EulerModeParams, basis: EulerBasis, psi0: Complex64, up0: Complex64) -> Result<Self> {
        let (c3, c4) = coefficients_from(p, &basis.eval(p.s0())?, psi0, up0);
        Ok(EulerMode { p: *p, basis, c3, c4, data: (psi0, up0) })
    }

    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (self.c3, self.c4)
    }

    pub fn state(&self, t: f64) -> Result<WeightedModeState> {
        let p = &self.p;
        let s = p.s0() + t;
        if t == 0.0 {
            return Ok(WeightedModeState::new(p, s, self.data.0, self.data.1));
        }
        let g = self.basis.eval(s)?;
        let chi = self.c3 * g.g3 + self.c4 * g.g4;
        let chi_t = self.c3 * g.dg3 + self.c4 * g.dg4;
        let st = p.s_tilde(s);
        let mu = -(I * p.k as f64 / p.b2) * ((1.0 + st.norm_sqr()) * chi_t + 2.0 * st * chi);
        Ok(WeightedModeState::new(p, s, chi, mu))
    }
}

pub fn evolve_euler_mode(p: &EulerModeParams, t: f64, psi0: Complex64, up0: Complex64) -> Result<WeightedModeState> {
    Ok(evolve_euler_mode_series(p, &[t], psi0, up0)?.remove(0))
}

/// Closed form away from the degenerate band around B^2 = 1/4 (and B^2 -> 0);
/// inside it the ODE oracle supplies the solution.
pub fn evolve_euler_mode_series(
    p: &EulerModeParams,
    times: &[f64],
    psi0: Complex64,
    up0: Complex64,
) -> Result<Vec<WeightedModeState>> {
    if p.integer_gap() < EvalConfig::default().tol_degenerate {
        return evolve_euler_mode_by_ode(p, times, psi0, up0);
    }
    let mode = EulerMode::new(p, psi0, up0)?;
    times.iter().map(|&t| mode.state(t)).collect()
}

fn evolve_euler_mode_by_ode(
    p: &EulerModeParams,
    times: &[f64],
    psi0: Complex64,
    up0: Complex64,
) -> Result<Vec<WeightedModeState>> {
    let grid = ode::with_origin(times)?;
    let amps = ode::euler_oracle(p, &grid.times, psi0, up0, &Tolerances::default())?;
    Ok(grid
        .pick(times.len())
        .map(|i| WeightedModeState::new(p, p.s0() + grid.times[i], amps[i].0, amps[i].1))
        .collect())
}

/// |chi(t)| against <s>^{-3/2+Re nu} <s0>^{3/2+Re nu} (|Psi0| + |Upsilon0|/(<s0>|k|)),
/// maximised over the grid.
pub fn euler_envelope_ratio(p: &EulerModeParams, t_grid: &[f64], psi0: Complex64, up0: Complex64) -> Result<f64> {
    let s0 = p.s0();
    let data = psi0.norm() + up0.norm() / (jb(s0) * (p.k as f64).abs());
    if data == 0.0 {
        return Ok(0.0);
    }
    let re_nu = p.nu.re;
    let critical = p.nu.norm() == 0.0;
    let states = evolve_euler_mode_series(p, t_grid, psi0, up0)?;
    let mut worst: f64 = 0.0;
    for (&t, st) in t_grid.iter().zip(&states) {
        let s = s0 + t;
        let mut env = jb(s).powf(-1.5 + re_nu) * jb(s0).powf(1.5 + re_nu) * data;
        if critical {
            env *= jb(jb(s).ln()) * jb(jb(s0).ln());
        }
        worst = worst.max(st.chi.norm() / env);
    }
    Ok(worst)
}

/// Leading large-s forms of (g3, g4) for B^2 != 1/4, as Euler-transform /
/// connection-formula leading terms in powers of (-i kappa s/2).
pub fn euler_asymptotic_leading(p: &EulerModeParams, s: f64) -> (Complex64, Complex64) {
    use crate::special::gamma;
    let (nu, b1) = (p.nu, p.beta1);
    let c = |x: f64| Complex64::new(x, 0.0);
    let w = Complex64::new(0.0, -0.5 * p.kappa * s);
    let lw = w.ln();
    let pw = |e: Complex64| (e * lw).exp();
    let g2b = gamma(c(2.0 - b1));
    let gb = gamma(c(b1));
    let one_minus_v = Complex64::new(0.5, -0.5 * p.kappa * s);
    let v = Complex64::new(0.5, 0.5 * p.kappa * s);
    let g3 = ((-1.0 - b1) * one_minus_v.ln()).exp()
        * (g2b * gamma(-2.0 * nu) / (gamma(1.5 - nu) * gamma(0.5 - b1 - nu)) * pw(-0.5 + b1 - nu)
            + g2b * gamma(2.0 * nu) / (gamma(1.5 + nu) * gamma(0.5 - b1 + nu)) * pw(-0.5 + b1 + nu));
    let g4 = ((b1 - 1.0) * v.ln()).exp()
        * (gb * gamma(-2.0 * nu) / (gamma(-0.5 - nu) * gamma(0.5 + b1 - nu)) * pw(-0.5 - b1 - nu)
            + gb * gamma(2.0 * nu) / (gamma(-0.5 + nu) * gamma(0.5 + b1 + nu)) * pw(-0.5 - b1 + nu));
    (g3, g4)
}
