//! Physical parameters, Richardson-number regimes and single-mode bookkeeping.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Japanese bracket `sqrt(1 + x^2)`.
pub fn jb(x: f64) -> f64 {
    x.hypot(1.0)
}

/// B^2 within this distance of 1/4 is treated as exactly critical.
pub const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Homogeneous,
    Subcritical,
    Critical,
    Supercritical,
    NoShear,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Homogeneous => "homogeneous",
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
            Regime::NoShear => "no_shear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeParams {
    /// Shear rate.
    pub r: f64,
    /// Stratification rate.
    pub beta: f64,
    /// Gravity.
    pub g: f64,
    /// Richardson number beta g / R^2 (infinite without shear).
    pub b2: f64,
    /// sqrt(1/4 - B^2), real, zero or purely imaginary.
    pub nu: Complex64,
    pub regime: Regime,
}

impl RegimeParams {
    pub fn from_physical(r: f64, beta: f64, g: f64) -> Result<Self> {
        if !(r.is_finite() && beta.is_finite() && g.is_finite()) || r < 0.0 || beta < 0.0 || g < 0.0 {
            return Err(Error::InvalidParams(format!("need finite R, beta, g >= 0 (got {r}, {beta}, {g})")));
        }
        if r == 0.0 {
            if beta * g == 0.0 {
                return Err(Error::InvalidParams("no shear and no stratification: nothing evolves".into()));
            }
            return Ok(RegimeParams {
                r,
                beta,
                g,
                b2: f64::INFINITY,
                nu: Complex64::new(0.0, f64::INFINITY),
                regime: Regime::NoShear,
            });
        }
        let b2 = beta * g / (r * r);
        let mut p = Self::from_b2(b2)?;
        p.r = r;
        p.beta = beta;
        p.g = g;
        Ok(p)
    }

    /// Nondimensional parameters with R = 1, g = 1, beta = B^2.
    pub fn from_b2(b2: f64) -> Result<Self> {
        if !b2.is_finite() || b2 < 0.0 {
            return Err(Error::InvalidParams(format!("B^2 must be finite and >= 0 (got {b2})")));
        }
        let (nu, regime) = if b2 == 0.0 {
            (Complex64::new(0.5, 0.0), Regime::Homogeneous)
        } else if (b2 - 0.25).abs() <= CRITICAL_TOL {
            (Complex64::new(0.0, 0.0), Regime::Critical)
        } else if b2 < 0.25 {
            (Complex64::new((0.25 - b2).sqrt(), 0.0), Regime::Subcritical)
        } else {
            (Complex64::new(0.0, (b2 - 0.25).sqrt()), Regime::Supercritical)
        };
        let b2 = if regime == Regime::Critical { 0.25 } else { b2 };
        Ok(RegimeParams { r: 1.0, beta: b2, g: 1.0, b2, nu, regime })
    }

    /// Brunt-Vaisala frequency sqrt(beta g).
    pub fn buoyancy_frequency(&self) -> f64 {
        (self.beta * self.g).sqrt()
    }

    /// Physical time to the nondimensional shear time t' = R t.
    pub fn nondimensional_time(&self, t: f64) -> f64 {
        self.r * t
    }
}

/// One Fourier mode (k, eta), x-period 2 pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub k: i64,
    pub eta: f64,
}

impl ModeIndex {
    pub fn new(k: i64, eta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMode("k = 0 modes do not evolve under shear".into()));
        }
        if !eta.is_finite() {
            return Err(Error::InvalidMode(format!("eta = {eta}")));
        }
        Ok(ModeIndex { k, eta })
    }

    pub fn kf(&self) -> f64 {
        self.k as f64
    }

    pub fn s0(&self) -> f64 {
        -self.eta / self.kf()
    }

    pub fn shear(&self, t: f64) -> ShearVariables {
        let s0 = self.s0();
        ShearVariables { s: t + s0, s0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearVariables {
    /// t - eta/k
    pub s: f64,
    /// -eta/k
    pub s0: f64,
}
