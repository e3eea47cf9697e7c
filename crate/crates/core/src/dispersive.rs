//! The unsheared (R = 0) problem: exact internal-wave mode evolution,
//! energy invariants, the oscillatory integral behind the t^{-1/3} L^inf
//! decay, Van der Corput checks and the sharpness construction.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, phase_limited_breaks, Quadrature};
use crate::regime::RegimeParams;
use crate::special::gamma;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DispersionModel {
    Boussinesq,
    /// Weighted unknowns e^{-beta y/2}(psi, T); beta^2/4 joins the wavenumber.
    FullEuler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams {
    /// Brunt-Vaisala frequency sqrt(beta g).
    pub n: f64,
    pub beta: f64,
    pub model: DispersionModel,
}

impl DispersionParams {
    pub fn new(n: f64, beta: f64, model: DispersionModel) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) || !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("need N > 0 and beta >= 0 (got {n}, {beta})")));
        }
        Ok(DispersionParams { n, beta, model })
    }

    pub fn from_regime(p: &RegimeParams, model: DispersionModel) -> Result<Self> {
        Self::new(p.buoyancy_frequency(), p.beta, model)
    }

    /// k^2 + eta^2 (+ beta^2/4 for the weighted full-Euler unknowns).
    pub fn wavenumber_sq(&self, k: f64, eta: f64) -> f64 {
        let base = k * k + eta * eta;
        match self.model {
            DispersionModel::Boussinesq => base,
            DispersionModel::FullEuler => base + 0.25 * self.beta * self.beta,
        }
    }
}

fn nonzero(k: i64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidMode("k = 0 modes are stationary without shear".into()));
    }
    Ok(k as f64)
}

/// lambda(k, eta) = |k| N / sqrt(k^2 + eta^2 [+ beta^2/4]).
pub fn dispersion(k: i64, eta: f64, p: &DispersionParams) -> Result<f64> {
    let kf = nonzero(k)?;
    Ok(kf.abs() * p.n / p.wavenumber_sq(kf, eta).sqrt())
}

/// (psi_hat, T_hat) at time t from psi = C1 e^{i lambda t} + C2 e^{-i lambda t},
/// C_{1,2} = (psi0 +- lambda T0 / k)/2 and T = (k/lambda)(C1 e^{i lambda t} - C2 e^{-i lambda t}).
pub fn evolve_no_shear_mode(
    k: i64,
    eta: f64,
    p: &DispersionParams,
    t: f64,
    psi0: Complex64,
    t0: Complex64,
) -> Result<(Complex64, Complex64)> {
    let kf = nonzero(k)?;
    let lambda = dispersion(k, eta, p)?;
    if t == 0.0 {
        return Ok((psi0, t0));
    }
    let c1 = 0.5 * (psi0 + lambda / kf * t0);
    let c2 = 0.5 * (psi0 - lambda / kf * t0);
    let e = (I * lambda * t).exp();
    let ec = e.conj();
    Ok((c1 * e + c2 * ec, kf / lambda * (c1 * e - c2 * ec)))
}

/// N^2 |T|^2 + (k^2 + eta^2 [+ beta^2/4]) |psi|^2, conserved by each mode.
pub fn mode_energy(k: i64, eta: f64, p: &DispersionParams, psi: Complex64, t_hat: Complex64) -> f64 {
    p.n * p.n * t_hat.norm_sqr() + p.wavenumber_sq(k as f64, eta) * psi.norm_sqr()
}

/// |k|^{3/2} |N t|^{-1/3} + |N t|^{-1/2} |k|^{-1/2} n^{3/2}
pub fn oscillatory_envelope(k: i64, n_freq: f64, t: f64, n: f64) -> f64 {
    let ka = (k as f64).abs();
    let nt = (n_freq * t).abs();
    ka.powf(1.5) * nt.powf(-1.0 / 3.0) + nt.powf(-0.5) * ka.powf(-0.5) * n.powf(1.5)
}

/// Bound on |lambda'| over [x0, x1] for lambda = |k| N / sqrt(k^2 + eta^2).
fn max_lambda_slope(k: f64, n_freq: f64, x0: f64, x1: f64) -> f64 {
    let slope = |e: f64| k.abs() * n_freq * e.abs() * (k * k + e * e).powf(-1.5);
    let peak = k.abs() / SQRT_2;
    let mut m = slope(x0).max(slope(x1));
    for p in [peak, -peak] {
        if p > x0 && p < x1 {
            m = m.max(slope(p));
        }
    }
    m
}

/// int_{-n}^{n} e^{i(lambda(k,eta) t + eta y)} d eta, with panels cut at the
/// inflection points +-|k|/sqrt 2 and narrow enough that the phase turns by
/// at most pi/4 on each; absolute error target 1e-8.
pub fn oscillatory_integral(k: i64, n_freq: f64, t: f64, y: f64, n: f64) -> Result<Quadrature> {
    let kf = nonzero(k)?;
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParams("oscillatory integral needs a finite t != 0".into()));
    }
    let inflection = kf.abs() / SQRT_2;
    if !(n > inflection) {
        return Err(Error::InvalidParams(format!("n = {n} must exceed |k|/sqrt 2 = {inflection}")));
    }
    let lambda = |eta: f64| kf.abs() * n_freq / (kf * kf + eta * eta).sqrt();
    let phase = |eta: f64| Complex64::new(0.0, lambda(eta) * t + eta * y).exp();
    let breaks = phase_limited_breaks(
        -n,
        n,
        &[-inflection, inflection],
        |a, b| t.abs() * max_lambda_slope(kf, n_freq, a, b) + y.abs(),
        FRAC_PI_4,
    );
    let max_panels = 4 * breaks.len() + 10_000;
    integrate_panels(&phase, &breaks, 1e-8, max_panels)
}

/// sup over y >= 0 of |oscillatory_integral| (the integral is even in y).
/// The maximum sits near the third-order stationary ray |y| = c t,
/// c = 2N/(3 sqrt 3 |k|). A trapezoid sum evaluated for a whole y grid by
/// one FFT locates the candidates on [0, c t + width]; the best few are
/// polished by golden-section search on the adaptive quadrature.
pub fn oscillatory_sup(k: i64, n_freq: f64, t: f64, n: f64) -> Result<(f64, f64)> {
    let kf = nonzero(k)?;
    oscillatory_integral(k, n_freq, t, 0.0, n)?;
    let c = 2.0 * n_freq / (3.0 * 3f64.sqrt() * kf.abs());
    // Airy width of the ray in y, plus a margin for the endpoint terms
    let width = 6.0 * (t.abs() * n_freq).cbrt() / kf.abs().sqrt().max(1.0) + 4.0;
    let hi = c * t.abs() + width;
    let dy = 0.25 / n;

    // 0.2 rad of phase per sample
    let rate = t.abs() * max_lambda_slope(kf, n_freq, -n, n) + hi;
    let samples = ((2.0 * n * rate / 0.2).ceil() as usize).max(64);
    let h = 2.0 * n / samples as f64;
    let len = ((2.0 * PI / (h * dy)).ceil() as usize).next_power_of_two();
    let dy = 2.0 * PI / (len as f64 * h);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (j, b) in buf.iter_mut().enumerate().take(samples + 1) {
        let eta = -n + j as f64 * h;
        let w = if j == 0 || j == samples { 0.5 * h } else { h };
        *b = w * Complex64::new(0.0, kf.abs() * n_freq / (kf * kf + eta * eta).sqrt() * t).exp();
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    // |I(m dy)| = |sum_j w_j f_j e^{i j h m dy}|; the e^{-i n y} factor drops out
    let cells = ((hi / dy).ceil() as usize + 1).min(len / 2);
    let coarse: Vec<f64> = buf[..cells].iter().map(|v| v.norm()).collect();
    let mut peaks: Vec<usize> = (0..cells)
        .filter(|&m| (m == 0 || coarse[m] >= coarse[m - 1]) && (m + 1 == cells || coarse[m] >= coarse[m + 1]))
        .collect();
    peaks.sort_by(|&a, &b| coarse[b].total_cmp(&coarse[a]));
    peaks.truncate(3);

    let eval = |y: f64| oscillatory_integral(k, n_freq, t, y, n).map(|q| q.value.norm());
    let mut best = (0.0, eval(0.0)?);
    for m in peaks {
        let y0 = m as f64 * dy;
        let (y, v) = golden_max(&eval, (y0 - dy).max(0.0), y0 + dy)?;
        if v > best.1 {
            best = (y, v);
        }
    }
    Ok(best)
}

fn golden_max(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > 1e-7 * (1.0 + b.abs()) {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdcKind {
    /// |int e^{ih}| <= 2 / min|h'|
    First,
    /// |int e^{ih}| <= 4 / sqrt(min|h''|)
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdcCheck {
    pub integral: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Van der Corput check for a phase that is convex or concave on [a, b].
/// Derivative minima and convexity come from `samples` uniform samples of h;
/// the left side is an adaptive quadrature of e^{ih}.
pub fn vdc_bound_check<H: Fn(f64) -> f64>(h: H, a: f64, b: f64, which: VdcKind, samples: usize) -> Result<VdcCheck> {
    if !(b > a) || samples < 5 {
        return Err(Error::InvalidParams("need a < b and at least 5 samples".into()));
    }
    let dx = (b - a) / (samples - 1) as f64;
    let vals: Vec<f64> = (0..samples).map(|i| h(a + i as f64 * dx)).collect();
    let d2: Vec<f64> = vals.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / (dx * dx)).collect();
    let scale = d2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-6 * scale + 1e-9;
    let up = d2.iter().any(|&v| v > tol);
    let down = d2.iter().any(|&v| v < -tol);
    if up && down {
        return Err(Error::NotConvex);
    }
    // h' is monotone, so |h'| is extremal at the ends (one-sided second-order
    // differences, exact for quadratic phases)
    let m = samples - 1;
    let da = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * dx);
    let db = (3.0 * vals[m] - 4.0 * vals[m - 1] + vals[m - 2]) / (2.0 * dx);
    let bound = match which {
        VdcKind::First if da * db <= 0.0 => f64::INFINITY,
        VdcKind::First => 2.0 / da.abs().min(db.abs()),
        VdcKind::Second => 4.0 / d2.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())).sqrt(),
    };
    let max_rate = da.abs().max(db.abs()) + 1e-300;
    let f = |x: f64| Complex64::new(0.0, h(x)).exp();
    let breaks = phase_limited_breaks(a, b, &[], |_, _| max_rate, FRAC_PI_4);
    let q = integrate_panels(&f, &breaks, 1e-10, 4 * breaks.len() + 10_000)?;
    let integral = q.value.norm();
    Ok(VdcCheck { integral, bound, holds: integral <= bound * (1.0 + 1e-9) })
}

/// The profile f(eta) = g'(eta)/|g(eta) - u*|^{2/3} on I = (eta* - delta, eta* + delta)
/// with g = lambda + c eta, eta* = |k|/sqrt 2 and c = 2N/(3 sqrt 3 |k|): along
/// y = c t its stream amplitude decays exactly like t^{-1/3}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessProfile {
    pub k: f64,
    pub n_freq: f64,
    pub delta: f64,
    pub eta_star: f64,
    pub c: f64,
    pub u_star: f64,
}

impl SharpnessProfile {
    pub fn new(k: i64, n_freq: f64, delta: f64) -> Result<Self> {
        let kf = nonzero(k)?.abs();
        if !(n_freq > 0.0) {
            return Err(Error::InvalidParams(format!("N must be positive (got {n_freq})")));
        }
        let eta_star = kf / SQRT_2;
        if !(delta > 0.0 && delta < eta_star) {
            return Err(Error::BadWindow(format!("delta = {delta} must lie in (0, {eta_star})")));
        }
        let c = 2.0 * n_freq / (3.0 * 3f64.sqrt() * kf);
        let u_star = 4.0 * SQRT_2 * n_freq / (3.0 * 3f64.sqrt());
        let prof = SharpnessProfile { k: kf, n_freq, delta, eta_star, c, u_star };
        let n = 2000;
        for i in 0..=n {
            let eta = eta_star - delta + 2.0 * delta * i as f64 / n as f64;
            if (eta - eta_star).abs() > 1e-9 * kf && prof.dg(eta) <= 0.0 {
                return Err(Error::BadWindow(format!("g' = {} <= 0 at eta = {eta}; shrink delta", prof.dg(eta))));
            }
        }
        Ok(prof)
    }

    fn x(&self, eta: f64) -> f64 {
        eta / self.k
    }

    pub fn g(&self, eta: f64) -> f64 {
        self.n_freq / (1.0 + self.x(eta).powi(2)).sqrt() + self.c * eta
    }

    pub fn dg(&self, eta: f64) -> f64 {
        let x = self.x(eta);
        self.c - self.n_freq / self.k * x * (1.0 + x * x).powf(-1.5)
    }

    pub fn d2g(&self, eta: f64) -> f64 {
        let x = self.x(eta);
        self.n_freq / (self.k * self.k) * (2.0 * x * x - 1.0) * (1.0 + x * x).powf(-2.5)
    }

    pub fn d3g(&self, eta: f64) -> f64 {
        let x = self.x(eta);
        self.n_freq / self.k.powi(3) * (9.0 * x - 6.0 * x.powi(3)) * (1.0 + x * x).powf(-3.5)
    }

    fn d4g_star(&self) -> f64 {
        -21.0 * (2.0f64 / 3.0).powf(4.5) * self.n_freq / self.k.powi(4)
    }

    /// f on I (zero outside). Within 1e-3 |k| of eta* the quotient is replaced
    /// by its expansion f* (1 + g''''(eta*) h / (6 g'''(eta*))) to avoid 0/0.
    pub fn profile(&self, eta: f64) -> f64 {
        let h = eta - self.eta_star;
        if h.abs() >= self.delta {
            return 0.0;
        }
        if h.abs() < 1e-3 * self.k {
            let g3 = self.d3g(self.eta_star);
            let f_star = 3.0 * (g3 / 6.0).cbrt();
            return f_star * (1.0 + self.d4g_star() * h / (6.0 * g3));
        }
        self.dg(eta) / (self.g(eta) - self.u_star).abs().powf(2.0 / 3.0)
    }

    /// |int_I f e^{i g t} d eta| t^{1/3}, i.e. t^{1/3} |2 pi psi_hat(t; k, c t)|.
    pub fn scaled_amplitude(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidParams("sharpness profile needs t > 0".into()));
        }
        let (a, b) = (self.eta_star - self.delta, self.eta_star + self.delta);
        let max_rate = t * self.dg(a).abs().max(self.dg(b).abs()) + 1e-300;
        let f = |eta: f64| self.profile(eta) * Complex64::new(0.0, self.g(eta) * t).exp();
        let breaks = phase_limited_breaks(a, b, &[self.eta_star], |_, _| max_rate, FRAC_PI_4);
        let q = integrate_panels(&f, &breaks, 1e-10, 4 * breaks.len() + 10_000)?;
        Ok(q.value.norm() * t.cbrt())
    }

    /// (g(eta* - delta) - u*, g(eta* + delta) - u*)
    pub fn window_ends(&self) -> (f64, f64) {
        (self.g(self.eta_star - self.delta) - self.u_star, self.g(self.eta_star + self.delta) - self.u_star)
    }
}

/// |int_R |x|^{-2/3} e^{ix} dx| = sqrt 3 Gamma(1/3).
pub fn sharpness_limit() -> f64 {
    3f64.sqrt() * gamma(Complex64::new(1.0 / 3.0, 0.0)).re
}

#[cfg(test)]
mod tests;
