//! Analytic continuation to large |z| through the 1/z connection formula,
//! and its logarithmic limit when a = b.

use super::series::gauss_series;
use crate::error::{Error, Result};
use crate::special::{digamma, gamma, rgamma};
use num_complex::Complex64;

/// Gamma prefactors of
/// F(a,b;c;z) = A1 (-z)^{-a} F(a, a-c+1; a-b+1; 1/z) + A2 (-z)^{-b} F(b, b-c+1; b-a+1; 1/z),
/// valid for |arg(-z)| < pi.
#[derive(Debug, Clone, Copy)]
pub(crate) struct InfinityConnection {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    pub(crate) a1: Complex64,
    pub(crate) a2: Complex64,
}

impl InfinityConnection {
    pub(crate) fn new(a: Complex64, b: Complex64, c: Complex64, perturbation: f64) -> Self {
        let gc = gamma(c);
        let a1 = gc * gamma(b - a) * rgamma(b) * rgamma(c - a);
        let a2 = gc * gamma(a - b) * rgamma(a) * rgamma(c - b);
        let scale = 1.0 + perturbation;
        InfinityConnection { a, b, c, a1: a1 * scale, a2: a2 * scale }
    }

    pub(crate) fn eval(&self, z: Complex64, tol: f64, max_terms: usize) -> Result<Complex64> {
        let (a, b, c) = (self.a, self.b, self.c);
        let w = 1.0 / z;
        let lmz = neg_log(z);
        let s1 = gauss_series(a, a - c + 1.0, a - b + 1.0, w, tol, max_terms)?.value;
        let s2 = gauss_series(b, b - c + 1.0, b - a + 1.0, w, tol, max_terms)?.value;
        Ok(self.a1 * (-a * lmz).exp() * s1 + self.a2 * (-b * lmz).exp() * s2)
    }
}

/// `ln(-z)` on the principal branch, treating a negative real `z` as lying
/// exactly on the cut's positive side (arg(-z) = 0 regardless of the sign of
/// the zero imaginary part).
pub(crate) fn neg_log(z: Complex64) -> Complex64 {
    let mz = -z;
    if mz.im == 0.0 && mz.re > 0.0 {
        Complex64::new(mz.re.ln(), 0.0)
    } else {
        mz.ln()
    }
}

/// F(a,a;c;z) for large |z| (the m = 0 logarithmic connection):
/// Gamma(c)(-z)^{-a}/(Gamma(a)Gamma(c-a)) sum_k (a)_k(1-c+a)_k/(k!)^2 z^{-k}
///   [ln(-z) + 2 psi(k+1) - psi(a+k) - psi(c-a-k)].
pub(crate) fn log_case(a: Complex64, c: Complex64, z: Complex64, tol: f64, max_terms: usize) -> Result<Complex64> {
    let cma = c - a;
    if (cma.re - cma.re.round()).abs() < 1e-12 && cma.im == 0.0 {
        return Err(Error::InvalidParams("logarithmic connection needs c - a off the integers".into()));
    }
    let lmz = neg_log(z);
    let w = 1.0 / z;
    let pref = gamma(c) * rgamma(a) * rgamma(cma) * (-a * lmz).exp();

    let mut u = Complex64::new(1.0, 0.0);
    let mut psi_k1 = digamma(Complex64::new(1.0, 0.0));
    let mut psi_ak = digamma(a);
    let mut psi_cak = digamma(cma);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for k in 0..max_terms {
        let kf = k as f64;
        let term = u * (lmz + 2.0 * psi_k1 - psi_ak - psi_cak);
        sum += term;
        if term.norm() <= tol * sum.norm() {
            small += 1;
            if small >= 3 {
                return Ok(pref * sum);
            }
        } else {
            small = 0;
        }
        u *= (a + kf) * (1.0 - c + a + kf) / ((kf + 1.0) * (kf + 1.0)) * w;
        psi_k1 += 1.0 / (kf + 1.0);
        psi_ak += 1.0 / (a + kf);
        // psi(x - 1) = psi(x) - 1/(x - 1)
        psi_cak -= 1.0 / (cma - kf - 1.0);
    }
    Err(Error::NonConvergence { terms: max_terms, last_term: u.norm() })
}
