use super::*;
use crate::ode::{integrate_dense, Tolerances};
use crate::quadrature::integrate_panels;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bous(n: f64) -> DispersionParams {
    DispersionParams::new(n, 0.0, DispersionModel::Boussinesq).unwrap()
}

#[test]
fn dispersion_relation() {
    assert_eq!(dispersion(1, 0.0, &bous(1.0)).unwrap(), 1.0);
    assert!((dispersion(1, 1.0, &bous(1.0)).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    let e = DispersionParams::new(1.0, 2.0, DispersionModel::FullEuler).unwrap();
    assert!((dispersion(1, 0.0, &e).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(matches!(dispersion(0, 1.0, &e), Err(Error::InvalidMode(_))));
    for (k, eta) in [(3, -2.0), (-1, 10.0), (7, 0.0)] {
        let l = dispersion(k, eta, &e).unwrap();
        assert!(l > 0.0 && l <= e.n);
    }
}

#[test]
fn pure_phase_rotation_and_initial_data() {
    let p = bous(1.3);
    let (k, eta) = (2, -0.7);
    let lambda = dispersion(k, eta, &p).unwrap();
    let psi0 = c(0.4, -0.9);
    let t0 = k as f64 / lambda * psi0;
    for t in [0.5, 17.0, 900.0] {
        let (psi, _) = evolve_no_shear_mode(k, eta, &p, t, psi0, t0).unwrap();
        assert!((psi.norm() - psi0.norm()).abs() < 1e-14);
        assert!((psi - psi0 * c(0.0, lambda * t).exp()).norm() < 1e-13);
    }
    assert_eq!(evolve_no_shear_mode(k, eta, &p, 0.0, psi0, c(1.0, 2.0)).unwrap(), (psi0, c(1.0, 2.0)));
}

#[test]
fn mode_energy_is_conserved() {
    for model in [DispersionModel::Boussinesq, DispersionModel::FullEuler] {
        let p = DispersionParams::new(0.8, 0.5, model).unwrap();
        let (k, eta) = (-3, 1.7);
        let (psi0, t0) = (c(1.0, 0.2), c(-0.3, 0.6));
        let e0 = mode_energy(k, eta, &p, psi0, t0);
        for i in 0..=100 {
            let t = 10.0 * i as f64;
            let (psi, th) = evolve_no_shear_mode(k, eta, &p, t, psi0, t0).unwrap();
            assert!((mode_energy(k, eta, &p, psi, th) - e0).abs() < 1e-12 * e0);
        }
    }
}

#[test]
fn modes_solve_the_wave_system() {
    // psi_t = i lambda^2 T / k, T_t = i k psi, integrated independently
    let p = DispersionParams::new(1.1, 0.6, DispersionModel::FullEuler).unwrap();
    let (k, eta) = (2, 0.9);
    let lambda = dispersion(k, eta, &p).unwrap();
    let kf = k as f64;
    let rhs = |_t: f64, y: &[Complex64; 2]| [c(0.0, lambda * lambda / kf) * y[1], c(0.0, kf) * y[0]];
    let y0 = [c(0.3, 0.1), c(1.0, -0.5)];
    let tol = Tolerances { rtol: 1e-12, atol: 1e-14, ..Tolerances::default() };
    let out = integrate_dense(rhs, 0.0, y0, &[25.0], &tol).unwrap()[0];
    let (psi, th) = evolve_no_shear_mode(k, eta, &p, 25.0, y0[0], y0[1]).unwrap();
    assert!((psi - out[0]).norm() < 1e-9 && (th - out[1]).norm() < 1e-9);
}

#[test]
fn envelope_formula() {
    assert!((oscillatory_envelope(1, 1.0, 8.0, 1.0) - (0.5 + 8f64.powf(-0.5))).abs() < 1e-15);
}

#[test]
fn oscillatory_integral_small_time_limit() {
    let q = oscillatory_integral(1, 1.0, 1e-7, 0.0, 1.0).unwrap();
    assert!((q.value - 2.0).norm() < 1e-6);
    assert!(oscillatory_integral(1, 1.0, 1.0, 0.0, 0.5).is_err());
    assert!(oscillatory_integral(1, 1.0, 0.0, 0.0, 2.0).is_err());
}

#[test]
fn oscillatory_integral_matches_fine_simpson() {
    let (k, t, y, n) = (2, 30.0, -7.0, 3.0);
    let f = |eta: f64| c(0.0, 2.0 / (4.0 + eta * eta).sqrt() * t + eta * y).exp();
    let m = 200_000;
    let h = 2.0 * n / m as f64;
    let mut s = f(-n) + f(n);
    for i in 1..m {
        s += f(-n + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let simpson = s * h / 3.0;
    let q = oscillatory_integral(k, 1.0, t, y, n).unwrap();
    assert!((q.value - simpson).norm() < 1e-9, "{} vs {simpson}", q.value);
    assert!(q.error < 1e-8);
}

#[test]
fn stationary_ray_decays_like_cube_root() {
    // |I(t, c t)| t^{1/3} settles to a constant
    let k = 1;
    let cr = 2.0 / (3.0 * 3f64.sqrt());
    let scaled = |t: f64| oscillatory_integral(k, 1.0, t, -cr * t, 3.0).unwrap().value.norm() * t.cbrt();
    let (a, b) = (scaled(1e3), scaled(1e4));
    assert!((a / b - 1.0).abs() < 0.1, "{a} {b}");
    // off the rays the decay is at least t^{-1/2}
    let off = |t: f64| oscillatory_integral(k, 1.0, t, 0.9 * t, 3.0).unwrap().value.norm();
    assert!(off(1e4) * 1e4f64.sqrt() < 1.2 * off(1e3) * 1e3f64.sqrt());
}

#[test]
fn sup_over_y_sits_on_the_ray() {
    let t = 2000.0;
    let (y, v) = oscillatory_sup(1, 1.0, t, 3.0).unwrap();
    let ray = 2.0 / (3.0 * 3f64.sqrt()) * t;
    assert!((y - ray).abs() < 25.0, "{y} vs {ray}");
    // nothing on a coarse scan of the whole half line beats it
    let coarse = (0..=1600)
        .map(|i| oscillatory_integral(1, 1.0, t, 0.5 * i as f64, 3.0).unwrap().value.norm())
        .fold(0.0, f64::max);
    assert!(v >= coarse, "{v} < {coarse}");
}

#[test]
fn van_der_corput_examples() {
    for m in [3.0, 10.0, 100.0] {
        let chk = vdc_bound_check(|x| m * x, 0.0, 1.0, VdcKind::First, 101).unwrap();
        let exact = ((c(0.0, m).exp() - 1.0) / m).norm();
        assert!((chk.integral - exact).abs() < 1e-10);
        assert!((chk.bound - 2.0 / m).abs() < 1e-9 && chk.holds);
    }
    for m in [10.0, 100.0] {
        let chk = vdc_bound_check(|x| m * x * x, -1.0, 1.0, VdcKind::Second, 201).unwrap();
        assert!((chk.bound - 4.0 / (2.0 * m).sqrt()).abs() < 1e-9);
        assert!(chk.holds, "{chk:?}");
        let first = vdc_bound_check(|x| m * x * x, -1.0, 1.0, VdcKind::First, 201).unwrap();
        assert!(first.bound.is_infinite());
    }
    assert_eq!(vdc_bound_check(|x| x.powi(3), -1.0, 1.0, VdcKind::Second, 101).unwrap_err(), Error::NotConvex);
}

#[test]
fn sharpness_construction() {
    let prof = SharpnessProfile::new(1, 1.0, 0.2).unwrap();
    assert!(prof.dg(prof.eta_star).abs() < 1e-10);
    assert!(prof.d2g(prof.eta_star).abs() < 1e-10);
    assert!((prof.d3g(prof.eta_star) - 16.0 / 27.0 * 3f64.sqrt()).abs() < 1e-12);
    assert!((prof.g(prof.eta_star) - prof.u_star).abs() < 1e-15);
    let k2 = SharpnessProfile::new(2, 3.0, 0.2).unwrap();
    assert!((k2.d3g(k2.eta_star) - 3.0 / 8.0 * 16.0 / 27.0 * 3f64.sqrt()).abs() < 1e-12);
    // the Taylor patch near eta* joins the quotient smoothly
    let h = 1e-3;
    let inside = prof.profile(prof.eta_star + 0.999 * h);
    let outside = prof.profile(prof.eta_star + 1.001 * h);
    assert!((inside - outside).abs() < 1e-5 * outside);
    assert!(matches!(SharpnessProfile::new(1, 1.0, 0.9), Err(Error::BadWindow(_))));
    assert!((sharpness_limit() - 4.640_055).abs() < 1e-5);
}

#[test]
fn sharpness_amplitude_matches_substituted_integral() {
    // t^{1/3} |int_{a- t}^{a+ t} |x|^{-2/3} e^{ix} dx| with x = +-w^3
    let prof = SharpnessProfile::new(1, 1.0, 0.2).unwrap();
    let (am, ap) = prof.window_ends();
    for t in [1e2, 1e3, 1e4] {
        let piece = |end: f64, sign: f64| {
            let wmax = end.cbrt();
            let f = |w: f64| 3.0 * c(0.0, sign * w.powi(3)).exp();
            let breaks = phase_limited_breaks(0.0, wmax, &[], |_, b| 3.0 * b * b, FRAC_PI_4);
            integrate_panels(&f, &breaks, 1e-11, 100_000).unwrap().value
        };
        let exact = (piece(ap * t, 1.0) + piece(-am * t, -1.0)).norm();
        let got = prof.scaled_amplitude(t).unwrap();
        assert!((got - exact).abs() < 1e-6 * exact, "t {t}: {got} vs {exact}");
    }
    let late = prof.scaled_amplitude(1e4).unwrap();
    assert!((late / sharpness_limit() - 1.0).abs() < 0.05, "{late}");
}
