//! Direct Gauss series and Taylor re-expansion of the hypergeometric ODE.

use super::dd::CDd;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Cancellation ratio sum|t_n| / |sum t_n| above which the series is redone
/// in double-double arithmetic.
pub const CONDITION_SWITCH: f64 = 1e6;

const CONSECUTIVE_SMALL: usize = 3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: Complex64,
    pub condition: f64,
    pub extended: bool,
}

pub(crate) fn gauss_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesSum> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut small = 0;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        n += 1;
        sum += term;
        let t = term.norm();
        abs_sum += t;
        if t <= tol * sum.norm() {
            small += 1;
            if small >= CONSECUTIVE_SMALL {
                break;
            }
        } else {
            small = 0;
        }
        if n >= max_terms {
            return Err(Error::NonConvergence { terms: n, last_term: t });
        }
    }
    let condition = if sum.norm() > 0.0 { abs_sum / sum.norm() } else { f64::INFINITY };
    if condition > CONDITION_SWITCH {
        let (value, _) = gauss_series_dd(a, b, c, z, tol, max_terms)?;
        return Ok(SeriesSum { value, condition, extended: true });
    }
    Ok(SeriesSum { value: sum, condition, extended: false })
}

fn gauss_series_dd(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<(Complex64, usize)> {
    let (a, b, c, z) = (CDd::from_c64(a), CDd::from_c64(b), CDd::from_c64(c), CDd::from_c64(z));
    let one = CDd::from_c64(Complex64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    let mut small = 0;
    // the f64 stopping point is unreliable here since the f64 sum is mostly
    // rounding noise, so the stopping rule is re-applied to the accurate sum
    for n in 0..max_terms {
        let nf = CDd::from_c64(Complex64::new(n as f64, 0.0));
        let np1 = CDd::from_c64(Complex64::new(n as f64 + 1.0, 0.0));
        term = term * (a + nf) * (b + nf) / ((c + nf) * np1) * z;
        sum = sum + term;
        if term.norm_f64() <= 1e-3 * tol * sum.norm_f64() {
            small += 1;
            if small >= CONSECUTIVE_SMALL {
                return Ok((sum.to_c64(), n + 1));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { terms: max_terms, last_term: term.norm_f64() })
}

/// Carry `(F, F')` from `z0` to `z1` along the straight segment by summing the
/// Taylor expansion of `z(1-z)F'' + [c - (a+b+1)z]F' - abF = 0` about a
/// sequence of centres, each step at most half the distance to {0, 1}.
pub(crate) fn taylor_continue(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z0: Complex64,
    f0: Complex64,
    df0: Complex64,
    z1: Complex64,
) -> Result<(Complex64, Complex64)> {
    let mut z = z0;
    let mut f = f0;
    let mut df = df0;
    for _ in 0..10_000 {
        let remaining = z1 - z;
        if remaining.norm() == 0.0 {
            return Ok((f, df));
        }
        let radius = z.norm().min((1.0 - z).norm());
        if radius < 1e-3 {
            return Err(Error::DomainError {
                z: format!("{z}"),
                reason: "continuation path passes too close to a singular point".into(),
            });
        }
        let max_step = 0.5 * radius;
        let h = if remaining.norm() <= max_step { remaining } else { remaining * (max_step / remaining.norm()) };
        let (nf, ndf) = taylor_step(a, b, c, z, f, df, h)?;
        f = nf;
        df = ndf;
        z = if h == remaining { z1 } else { z + h };
    }
    Err(Error::NonConvergence { terms: 10_000, last_term: f64::NAN })
}

fn taylor_step(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z0: Complex64,
    f0: Complex64,
    df0: Complex64,
    h: Complex64,
) -> Result<(Complex64, Complex64)> {
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let q0 = c - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let r = -(a * b);

    // coefficients c_n of F(z0 + h) = sum c_n h^n
    let mut c_prev = f0;
    let mut c_cur = df0;
    let mut hp = h; // h^n for the current coefficient index n = 1
    let mut value = f0 + df0 * h;
    let mut deriv = df0;
    let mut small = 0;
    for n in 0..2_000usize {
        let nf = n as f64;
        // coefficient index n+2
        let num = (p1 * nf * (nf + 1.0) + q0 * (nf + 1.0)) * c_cur + (-(nf * (nf - 1.0)) + q1 * nf + r) * c_prev;
        let c_next = -num / (p0 * (nf + 2.0) * (nf + 1.0));
        let dterm = c_next * hp * (nf + 2.0);
        hp *= h;
        let term = c_next * hp;
        value += term;
        deriv += dterm;
        if term.norm() <= 1e-17 * value.norm() && dterm.norm() <= 1e-17 * deriv.norm() {
            small += 1;
            if small >= CONSECUTIVE_SMALL {
                return Ok((value, deriv));
            }
        } else {
            small = 0;
        }
        c_prev = c_cur;
        c_cur = c_next;
    }
    Err(Error::NonConvergence { terms: 2_000, last_term: f64::NAN })
}
