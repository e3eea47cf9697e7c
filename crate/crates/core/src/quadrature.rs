//! Adaptive Gauss-Kronrod (7/15) quadrature for complex integrands on a
//! caller-supplied panel partition.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Sum of the per-panel |Kronrod - Gauss| estimates.
    pub error: f64,
    pub panels: usize,
}

/// One 15-point Kronrod sum with its embedded 7-point Gauss error estimate.
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate over the union of `breaks[i]..breaks[i+1]`, bisecting the panel
/// with the largest error estimate until the total estimate is below
/// `abs_tol` or `max_panels` is reached.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidParams("panel breaks must be finite and strictly ascending".into()));
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len());
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (value, error) = gk15(f, w[0], w[1]);
        total += value;
        err += error;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    while err > abs_tol {
        if heap.len() >= max_panels {
            let worst = heap.peek().expect("non-empty");
            return Err(Error::QuadratureFailure(format!(
                "error estimate {err:.3e} above {abs_tol:.1e} after {} panels; worst panel [{}, {}] with {:.3e}",
                heap.len(),
                worst.a,
                worst.b,
                worst.error
            )));
        }
        let p = heap.pop().expect("non-empty");
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            return Err(Error::QuadratureFailure(format!("panel [{}, {}] cannot be split further", p.a, p.b)));
        }
        let (v1, e1) = gk15(f, p.a, mid);
        let (v2, e2) = gk15(f, mid, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Quadrature { value, error, panels: heap.len() })
}

pub fn integrate<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    integrate_panels(f, &[a, b], abs_tol, 100_000)
}

/// Breakpoints for an oscillatory integrand: the fixed `points` inside
/// (a, b) are kept, and each gap is cut so that `max_rate` times the panel
/// width is at most `max_phase`. `max_rate(x0, x1)` bounds |phase'| on [x0, x1].
pub fn phase_limited_breaks<R: Fn(f64, f64) -> f64>(
    a: f64,
    b: f64,
    points: &[f64],
    max_rate: R,
    max_phase: f64,
) -> Vec<f64> {
    let mut fixed: Vec<f64> = points.iter().copied().filter(|&p| p > a && p < b).collect();
    fixed.push(a);
    fixed.push(b);
    fixed.sort_by(f64::total_cmp);
    fixed.dedup();
    let mut out = vec![a];
    for w in fixed.windows(2) {
        let (mut x, end) = (w[0], w[1]);
        while x < end {
            // shrink a trial step until the phase bound on it holds
            let mut h = end - x;
            while h * max_rate(x, (x + h).min(end)) > max_phase && h > 1e-12 * (end - x) {
                h *= 0.5;
            }
            x = (x + h).min(end);
            if end - x < 1e-14 * (1.0 + end.abs()) {
                x = end;
            }
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let (v, e) = gk15(&|x: f64| Complex64::new(x.powi(10), 0.0), -1.0, 1.0);
        assert!((v.re - 2.0 / 11.0).abs() < 1e-15);
        assert!(e < 1e-14);
    }

    #[test]
    fn oscillatory_exponential() {
        // int_0^10 e^{i 50 x} dx = (e^{500 i} - 1) / (50 i)
        let f = |x: f64| Complex64::new(0.0, 50.0 * x).exp();
        let exact = (Complex64::new(0.0, 500.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        let q = integrate(&f, 0.0, 10.0, 1e-12).unwrap();
        assert!((q.value - exact).norm() < 1e-12);
        let breaks = phase_limited_breaks(0.0, 10.0, &[3.0], |_, _| 50.0, std::f64::consts::FRAC_PI_4);
        assert!(breaks.contains(&3.0));
        assert!(breaks.windows(2).all(|w| (w[1] - w[0]) * 50.0 <= std::f64::consts::FRAC_PI_4 + 1e-12));
        let q = integrate_panels(&f, &breaks, 1e-12, 10_000).unwrap();
        assert!((q.value - exact).norm() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // int_0^1 x^{-1/2} dx = 2
        let q = integrate(&|x: f64| Complex64::new(x.powf(-0.5), 0.0), 0.0, 1.0, 1e-9).unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-8);
    }

    #[test]
    fn failure_reports_worst_panel() {
        let err = integrate_panels(&|x: f64| Complex64::new(1.0 / x, 0.0), &[0.0, 1.0], 1e-12, 20).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure(ref s) if s.contains("worst panel")));
        assert!(integrate_panels(&|_| Complex64::new(1.0, 0.0), &[1.0, 1.0], 1e-9, 10).is_err());
    }
}
