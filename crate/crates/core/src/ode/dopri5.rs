//! Dormand-Prince 5(4) with PI step-size control and the standard
//! fourth-order continuous extension, for small complex systems.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000 }
    }
}

const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type V<const D: usize> = [Complex64; D];

fn lin<const D: usize>(y: &V<D>, h: f64, terms: &[(f64, &V<D>)]) -> V<D> {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..D {
                out[i] += k[i] * (h * c);
            }
        }
    }
    out
}

struct Stages<const D: usize> {
    k1: V<D>,
    k3: V<D>,
    k4: V<D>,
    k5: V<D>,
    k6: V<D>,
    k7: V<D>,
    y_new: V<D>,
}

fn step<const D: usize, F>(f: &F, t: f64, y: &V<D>, k1: &V<D>, h: f64) -> Stages<D>
where
    F: Fn(f64, &V<D>) -> V<D>,
{
    let k2 = f(t + C2 * h, &lin(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &lin(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(t + C4 * h, &lin(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(t + C5 * h, &lin(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(t + h, &lin(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y_new = lin(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(t + h, &y_new);
    Stages { k1: *k1, k3, k4, k5, k6, k7, y_new }
}

fn error_norm<const D: usize>(y: &V<D>, s: &Stages<D>, h: f64, tol: &Tolerances) -> f64 {
    let mut acc = 0.0;
    for i in 0..D {
        let e = (s.k1[i] * E1 + s.k3[i] * E3 + s.k4[i] * E4 + s.k5[i] * E5 + s.k6[i] * E6 + s.k7[i] * E7) * h;
        let sc = tol.atol + tol.rtol * y[i].norm().max(s.y_new[i].norm());
        acc += (e.norm() / sc).powi(2);
    }
    (acc / D as f64).sqrt()
}

fn initial_step<const D: usize, F>(f: &F, t: f64, y: &V<D>, k1: &V<D>, tol: &Tolerances, span: f64) -> f64
where
    F: Fn(f64, &V<D>) -> V<D>,
{
    let sc: Vec<f64> = y.iter().map(|v| tol.atol + tol.rtol * v.norm()).collect();
    let rms = |v: &V<D>| (v.iter().zip(&sc).map(|(x, s)| (x.norm() / s).powi(2)).sum::<f64>() / D as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(k1);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(span);
    let y1 = lin(y, h0, &[(1.0, k1)]);
    let k2 = f(t + h0, &y1);
    let mut diff = *k1;
    for i in 0..D {
        diff[i] = k2[i] - k1[i];
    }
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(span)
}

/// Integrate `y' = f(t, y)` from `(t0, y0)` and report the solution at every
/// point of the ascending `t_grid` (all >= t0) through dense output.
pub fn integrate_dense<const D: usize, F>(
    f: F,
    t0: f64,
    y0: V<D>,
    t_grid: &[f64],
    tol: &Tolerances,
) -> Result<Vec<V<D>>>
where
    F: Fn(f64, &V<D>) -> V<D>,
{
    if t_grid.windows(2).any(|w| w[1] < w[0]) || t_grid.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidParams("time grid must be ascending and start at or after t0".into()));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut next = 0;
    while next < t_grid.len() && t_grid[next] == t0 {
        out.push(y0);
        next += 1;
    }
    let Some(&t_end) = t_grid.last() else { return Ok(out) };
    if next == t_grid.len() {
        return Ok(out);
    }

    // Hairer's PI controller constants
    let (beta, expo1, safe, fac_min, fac_max) = (0.04, 0.2 - 0.04 * 0.75, 0.9, 0.2, 10.0);
    let mut fac_old: f64 = 1e-4;

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t, &y, &k1, tol, t_end - t0);
    let mut steps = 0usize;
    let mut rejected_last = false;
    while next < t_grid.len() {
        if steps >= tol.max_steps {
            return Err(Error::StepBudget { t, max_steps: tol.max_steps });
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        let h_min = 16.0 * f64::EPSILON * t.abs().max(1.0);
        if h < h_min {
            return Err(Error::StepFailure { t, h });
        }
        let st = step(&f, t, &y, &k1, h);
        let err = error_norm(&y, &st, h, tol);
        if !err.is_finite() {
            h *= 0.1;
            rejected_last = true;
            continue;
        }
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let t_new = if h == t_end - t { t_end } else { t + h };
            // dense output on (t, t_new]
            while next < t_grid.len() && t_grid[next] <= t_new {
                let theta = (t_grid[next] - t) / h;
                out.push(dense(&y, &st, h, theta));
                next += 1;
            }
            let mut fac = fac11 / fac_old.powf(beta);
            fac = (fac / safe).clamp(1.0 / fac_max, 1.0 / fac_min);
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            t = t_new;
            y = st.y_new;
            k1 = st.k7;
            h = h_new;
            rejected_last = false;
        } else {
            h /= (fac11 / safe).min(1.0 / fac_min);
            rejected_last = true;
        }
    }
    Ok(out)
}

fn dense<const D: usize>(y: &V<D>, s: &Stages<D>, h: f64, theta: f64) -> V<D> {
    if theta >= 1.0 {
        return s.y_new;
    }
    let th1 = 1.0 - theta;
    let mut out = *y;
    for i in 0..D {
        let ydiff = s.y_new[i] - y[i];
        let bspl = s.k1[i] * h - ydiff;
        let r3 = bspl;
        let r4 = ydiff - s.k7[i] * h - bspl;
        let r5 = (s.k1[i] * D1 + s.k3[i] * D3 + s.k4[i] * D4 + s.k5[i] * D5 + s.k6[i] * D6 + s.k7[i] * D7) * h;
        out[i] = y[i] + (ydiff + (r3 + (r4 + r5 * th1) * theta) * th1) * theta;
    }
    out
}

/// Fixed-step fifth-order integration (no error control), for order checks.
pub fn integrate_fixed<const D: usize, F>(f: F, t0: f64, y0: V<D>, t_end: f64, n_steps: usize) -> V<D>
where
    F: Fn(f64, &V<D>) -> V<D>,
{
    let h = (t_end - t0) / n_steps as f64;
    let mut y = y0;
    let mut t = t0;
    for _ in 0..n_steps {
        let k1 = f(t, &y);
        y = step(&f, t, &y, &k1, h).y_new;
        t += h;
    }
    y
}
