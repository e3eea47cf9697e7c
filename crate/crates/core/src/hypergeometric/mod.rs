//! Gauss hypergeometric function 2F1(a, b; c; z) on the two curves the mode
//! solutions need: the negative real axis and the vertical line Re z = 1/2.
//!
//! Routing:
//! * |z| <= r_series: direct series.
//! * negative axis, |z| <= r/(1-r): Pfaff transform z -> z/(z-1).
//! * |1/z| <= r_series: 1/z connection formula (log form when a = b).
//! * Re z = 1/2 between the two disks: Taylor re-expansion of the
//!   hypergeometric ODE, started from the series region. The direct series
//!   cannot be used there because |z| reaches 1 at z = exp(+-i pi/3) and the
//!   parameter sets of interest have Re(c - a - b) < 0.

mod connection;
mod dd;
mod series;

use crate::error::{Error, Result};
use crate::special::{gamma, rgamma};
use connection::InfinityConnection;
use num_complex::Complex64;
use series::{gauss_series, taylor_continue};

pub use series::CONDITION_SWITCH;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

fn is_nonpositive_integer(x: Complex64) -> bool {
    x.im == 0.0 && x.re <= 0.0 && (x.re - x.re.round()).abs() < 1e-14
}

impl HypParams {
    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if is_nonpositive_integer(c) {
            return Err(Error::InvalidParams(format!("c = {c} is a non-positive integer")));
        }
        if ![a, b, c].iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        Ok(HypParams { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    /// Parameters of the derivative: F' = (ab/c) F(a+1, b+1; c+1; z).
    pub fn shifted(&self) -> Self {
        HypParams { a: self.a + 1.0, b: self.b + 1.0, c: self.c + 1.0 }
    }

    /// Parameters of the second solution z^{1-c} F(1+a-c, 1+b-c; 2-c; z).
    pub fn second_solution(&self) -> Result<Self> {
        Self::new(1.0 + self.a - self.c, 1.0 + self.b - self.c, 2.0 - self.c)
    }

    /// Distance of a - b from the nearest integer (zero imaginary part needed
    /// for degeneracy).
    pub fn integer_gap(&self) -> f64 {
        let d = self.a - self.b;
        ((d.re - d.re.round()).powi(2) + d.im * d.im).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalDomain {
    NegativeRealAxis,
    HalfLine,
    UnitPoint,
    ConvergenceDisk,
}

impl EvalDomain {
    /// Pick the domain a point lies on, preferring the two special curves.
    pub fn classify(z: Complex64) -> EvalDomain {
        if z.im == 0.0 && z.re <= 0.0 {
            EvalDomain::NegativeRealAxis
        } else if z == Complex64::new(1.0, 0.0) {
            EvalDomain::UnitPoint
        } else if (z.re - 0.5).abs() <= 1e-12 {
            EvalDomain::HalfLine
        } else {
            EvalDomain::ConvergenceDisk
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub r_series: f64,
    pub tol_series: f64,
    pub max_terms: usize,
    pub tol_degenerate: f64,
    /// Relative perturbation applied to the connection-formula prefactors.
    /// Zero in normal use; tests set it to check that the validation suites
    /// notice a wrong prefactor.
    pub prefactor_perturbation: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            r_series: 0.7,
            tol_series: 1e-14,
            max_terms: 10_000,
            tol_degenerate: 1e-3,
            prefactor_perturbation: 0.0,
        }
    }
}

/// Direct Gauss series. Rejects |z| > r_series.
pub fn f21_series(p: &HypParams, z: Complex64) -> Result<Complex64> {
    f21_series_with(p, z, &EvalConfig::default())
}

pub fn f21_series_with(p: &HypParams, z: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    if z.norm() > cfg.r_series {
        return Err(Error::DomainError {
            z: format!("{z}"),
            reason: format!("|z| exceeds the series radius {}", cfg.r_series),
        });
    }
    Ok(gauss_series(p.a, p.b, p.c, z, cfg.tol_series, cfg.max_terms)?.value)
}

/// Series value together with the cancellation estimate sum|t_n|/|sum t_n| and
/// whether the double-double fallback was used.
pub fn f21_series_diagnostics(p: &HypParams, z: Complex64) -> Result<(Complex64, f64, bool)> {
    let cfg = EvalConfig::default();
    let s = gauss_series(p.a, p.b, p.c, z, cfg.tol_series, cfg.max_terms)?;
    Ok((s.value, s.condition, s.extended))
}

/// Pfaff transform as used on the negative axis:
/// F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1)).
pub fn f21_pfaff(p: &HypParams, z: Complex64) -> Result<Complex64> {
    let cfg = EvalConfig::default();
    let w = z / (z - 1.0);
    let inner = gauss_series(p.c - p.a, p.b, p.c, w, cfg.tol_series, cfg.max_terms)?.value;
    Ok((-p.b * (1.0 - z).ln()).exp() * inner)
}

/// The other Pfaff form: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)).
pub fn f21_pfaff_alt(p: &HypParams, z: Complex64) -> Result<Complex64> {
    let cfg = EvalConfig::default();
    let w = z / (z - 1.0);
    let inner = gauss_series(p.a, p.c - p.b, p.c, w, cfg.tol_series, cfg.max_terms)?.value;
    Ok((-p.a * (1.0 - z).ln()).exp() * inner)
}

pub fn f21(p: &HypParams, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
    Hyp2F1::new(*p, EvalConfig::default()).eval(z, domain)
}

pub fn f21_with(p: &HypParams, z: Complex64, domain: EvalDomain, cfg: &EvalConfig) -> Result<Complex64> {
    Hyp2F1::new(*p, *cfg).eval(z, domain)
}

/// F(a,a;c;z) including the logarithmic connection for large |z|.
pub fn f21_log_case(p: &HypParams, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
    Hyp2F1::new(*p, EvalConfig::default()).eval_log_aware(z, domain)
}

/// dF/dz = (ab/c) F(a+1, b+1; c+1; z).
pub fn f21_derivative(p: &HypParams, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
    let shifted = p.shifted();
    Ok(p.a * p.b / p.c * f21(&shifted, z, domain)?)
}

/// dF/dz = (c-1)/z [F(a,b;c-1;z) - F(a,b;c;z)].
pub fn f21_derivative_lowered_c(p: &HypParams, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
    let lowered = HypParams::new(p.a, p.b, p.c - 1.0)?;
    Ok((p.c - 1.0) / z * (f21(&lowered, z, domain)? - f21(p, z, domain)?))
}

/// dF/dz = [(c-a)(c-b) F(a,b;c+1;z) + c(a+b-c) F(a,b;c;z)] / (c(1-z)).
pub fn f21_derivative_raised_c(p: &HypParams, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
    let raised = HypParams::new(p.a, p.b, p.c + 1.0)?;
    let (a, b, c) = (p.a, p.b, p.c);
    Ok(((c - a) * (c - b) * f21(&raised, z, domain)? + c * (a + b - c) * f21(p, z, domain)?) / (c * (1.0 - z)))
}

/// Gauss summation F(a,b;c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)).
pub fn f21_at_one(p: &HypParams) -> Result<Complex64> {
    let s = p.c - p.a - p.b;
    if s.re <= 0.0 {
        return Err(Error::Divergent(s.re));
    }
    Ok(gamma(p.c) * gamma(s) * rgamma(p.c - p.a) * rgamma(p.c - p.b))
}

/// Relative deviation of the numerical Wronskian of
/// f1 = F(a,b;c;z), f2 = z^{1-c} F(1+a-c, 1+b-c; 2-c; z)
/// from (1-c) z^{-c} (1-z)^{c-1-a-b}.
pub fn wronskian_residual(p: &HypParams, z: Complex64) -> Result<f64> {
    wronskian_residual_with(p, z, &EvalConfig::default())
}

pub fn wronskian_residual_with(p: &HypParams, z: Complex64, cfg: &EvalConfig) -> Result<f64> {
    let domain = EvalDomain::classify(z);
    let q = p.second_solution()?;
    let (f1, df1) = HypPair::new(*p, *cfg)?.eval(z, domain)?;
    let (g, dg) = HypPair::new(q, *cfg)?.eval(z, domain)?;
    let (a, b, c) = (p.a, p.b, p.c);
    let lz = z.ln();
    let zp = ((1.0 - c) * lz).exp();
    let f2 = zp * g;
    let df2 = (1.0 - c) * (-c * lz).exp() * g + zp * dg;
    let w = f1 * df2 - df1 * f2;
    let exact = (1.0 - c) * (-c * lz).exp() * ((c - 1.0 - a - b) * (1.0 - z).ln()).exp();
    Ok((w - exact).norm() / exact.norm())
}

/// Evaluator with the connection-formula prefactors computed once.
#[derive(Debug, Clone)]
pub struct Hyp2F1 {
    p: HypParams,
    cfg: EvalConfig,
    connection: Option<InfinityConnection>,
    degenerate: bool,
}

impl Hyp2F1 {
    pub fn new(p: HypParams, cfg: EvalConfig) -> Self {
        let degenerate = p.integer_gap() < cfg.tol_degenerate;
        let connection = (!degenerate).then(|| InfinityConnection::new(p.a, p.b, p.c, cfg.prefactor_perturbation));
        Hyp2F1 { p, cfg, connection, degenerate }
    }

    pub fn params(&self) -> &HypParams {
        &self.p
    }

    /// True when a - b is too close to an integer for the connection formula.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn eval(&self, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
        self.eval_inner(z, domain, false)
    }

    /// Like [`Hyp2F1::eval`], but when a = b exactly the large-|z| branch uses
    /// the logarithmic connection instead of reporting degeneracy.
    pub fn eval_log_aware(&self, z: Complex64, domain: EvalDomain) -> Result<Complex64> {
        self.eval_inner(z, domain, true)
    }

    fn eval_inner(&self, z: Complex64, domain: EvalDomain, allow_log: bool) -> Result<Complex64> {
        let r = self.cfg.r_series;
        let p = &self.p;
        match domain {
            EvalDomain::UnitPoint => {
                if z != Complex64::new(1.0, 0.0) {
                    return Err(domain_error(z, "UnitPoint requires z = 1"));
                }
                f21_at_one(p)
            }
            EvalDomain::ConvergenceDisk => {
                if z.norm() >= 1.0 {
                    return Err(domain_error(z, "ConvergenceDisk requires |z| < 1"));
                }
                if z.norm() <= r {
                    return self.series(z);
                }
                let w = z / (z - 1.0);
                if w.norm() <= r {
                    return f21_pfaff(p, z);
                }
                self.continue_from_series(z)
            }
            EvalDomain::NegativeRealAxis => {
                if z.im != 0.0 || z.re > 0.0 {
                    return Err(domain_error(z, "NegativeRealAxis requires real z <= 0"));
                }
                if z.norm() <= r {
                    return self.series(z);
                }
                if z.norm() <= r / (1.0 - r) {
                    return f21_pfaff(p, z);
                }
                self.at_infinity(z, allow_log)
            }
            EvalDomain::HalfLine => {
                if (z.re - 0.5).abs() > 1e-12 {
                    return Err(domain_error(z, "HalfLine requires Re z = 1/2"));
                }
                if z.norm() <= r {
                    return self.series(z);
                }
                if z.norm() * r >= 1.0 {
                    return self.at_infinity(z, allow_log);
                }
                self.continue_from_series(z)
            }
        }
    }

    fn series(&self, z: Complex64) -> Result<Complex64> {
        Ok(gauss_series(self.p.a, self.p.b, self.p.c, z, self.cfg.tol_series, self.cfg.max_terms)?.value)
    }

    fn at_infinity(&self, z: Complex64, allow_log: bool) -> Result<Complex64> {
        match &self.connection {
            Some(conn) => conn.eval(z, self.cfg.tol_series, self.cfg.max_terms),
            None => {
                let d = self.p.a - self.p.b;
                if allow_log && d.norm() == 0.0 {
                    return connection::log_case(self.p.a, self.p.c, z, self.cfg.tol_series, self.cfg.max_terms);
                }
                Err(Error::DegenerateConnection { a_minus_b: d.re, tol: self.cfg.tol_degenerate })
            }
        }
    }

    /// Start on the series circle at the point nearest to z and integrate the
    /// ODE out to z.
    fn continue_from_series(&self, z: Complex64) -> Result<Complex64> {
        let p = &self.p;
        let z0 = self.series_start(z);
        let f0 = self.series(z0)?;
        let sh = p.shifted();
        let df0 = p.a * p.b / p.c * gauss_series(sh.a, sh.b, sh.c, z0, self.cfg.tol_series, self.cfg.max_terms)?.value;
        Ok(taylor_continue(p.a, p.b, p.c, z0, f0, df0, z)?.0)
    }

    fn series_start(&self, z: Complex64) -> Complex64 {
        let r = self.cfg.r_series;
        if (z.re - 0.5).abs() <= 1e-12 {
            // stay on the line Re z = 1/2, which keeps clear of z = 1
            let y = (r * r - 0.25).max(0.0).sqrt();
            Complex64::new(0.5, y.copysign(z.im))
        } else {
            z * (r / z.norm())
        }
    }

    fn continue_pair(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let p = &self.p;
        let z0 = self.series_start(z);
        let f0 = self.series(z0)?;
        let sh = p.shifted();
        let df0 = p.a * p.b / p.c * gauss_series(sh.a, sh.b, sh.c, z0, self.cfg.tol_series, self.cfg.max_terms)?.value;
        taylor_continue(p.a, p.b, p.c, z0, f0, df0, z)
    }

    fn in_continuation_band(&self, z: Complex64, domain: EvalDomain) -> bool {
        let r = self.cfg.r_series;
        match domain {
            EvalDomain::HalfLine => z.norm() > r && z.norm() * r < 1.0,
            EvalDomain::ConvergenceDisk => z.norm() > r && (z / (z - 1.0)).norm() > r,
            _ => false,
        }
    }
}

/// Value and z-derivative of F(a,b;c;z) sharing one set of prepared evaluators.
#[derive(Debug, Clone)]
pub struct HypPair {
    f: Hyp2F1,
    df: Hyp2F1,
    scale: Complex64,
}

impl HypPair {
    pub fn new(p: HypParams, cfg: EvalConfig) -> Result<Self> {
        let sh = p.shifted();
        Ok(HypPair {
            f: Hyp2F1::new(p, cfg),
            df: Hyp2F1::new(HypParams::new(sh.a, sh.b, sh.c)?, cfg),
            scale: p.a * p.b / p.c,
        })
    }

    pub fn params(&self) -> &HypParams {
        self.f.params()
    }

    pub fn eval(&self, z: Complex64, domain: EvalDomain) -> Result<(Complex64, Complex64)> {
        self.eval_inner(z, domain, false)
    }

    pub fn eval_log_aware(&self, z: Complex64, domain: EvalDomain) -> Result<(Complex64, Complex64)> {
        self.eval_inner(z, domain, true)
    }

    fn eval_inner(&self, z: Complex64, domain: EvalDomain, allow_log: bool) -> Result<(Complex64, Complex64)> {
        if self.f.in_continuation_band(z, domain) {
            return self.f.continue_pair(z);
        }
        let f = self.f.eval_inner(z, domain, allow_log)?;
        let df = self.scale * self.df.eval_inner(z, domain, allow_log)?;
        Ok((f, df))
    }
}

fn domain_error(z: Complex64, reason: &str) -> Error {
    Error::DomainError { z: format!("{z}"), reason: reason.into() }
}
