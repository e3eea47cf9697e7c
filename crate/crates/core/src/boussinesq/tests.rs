use super::*;
use crate::ode::{compare_closed_form, integrate_dense, ModeProblem};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn regime(b2: f64) -> RegimeParams {
    RegimeParams::from_b2(b2).unwrap()
}

#[test]
fn values_at_origin() {
    for nu in [c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.5)] {
        let g = special_solutions(nu, 0.0).unwrap();
        assert_eq!((g.g1, g.g2, g.dg1, g.dg2), (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)));
    }
}

#[test]
fn wronskian_is_inverse_square_of_bracket() {
    let g = special_solutions(c(0.25, 0.0), 1.0).unwrap();
    assert!((g.wronskian() - 0.25).norm() < 1e-13);
    for nu in [c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.5), c(0.45, 0.0)] {
        let basis = BoussinesqBasis::new(nu).unwrap();
        for s in [-300.0, -7.0, -0.9, 0.3, 1.2, 2.5, 40.0, 1e3] {
            let w = basis.eval(s).unwrap().wronskian();
            let exact = (1.0 + s * s).powi(-2);
            assert!((w - exact).norm() < 1e-10 * exact, "nu {nu} s {s}: {w} vs {exact}");
        }
    }
}

#[test]
fn large_s_matches_leading_asymptotics() {
    let nu = c(0.3, 0.0);
    let s = 50.0;
    let g = special_solutions(nu, s).unwrap();
    let a = asymptotic_leading(nu, s);
    for (x, y) in [(g.g1, a.g1), (g.g2, a.g2), (g.dg1, a.dg1), (g.dg2, a.dg2)] {
        assert!((x - y).norm() <= 0.02 * x.norm(), "{x} vs {y}");
    }
    // the critical log expansions converge more slowly but do converge
    for (s, tol) in [(1e2, 1e-3), (1e4, 1e-7)] {
        let g = special_solutions(c(0.0, 0.0), s).unwrap();
        let a = asymptotic_leading(c(0.0, 0.0), s);
        for (x, y) in [(g.g1, a.g1), (g.g2, a.g2), (g.dg1, a.dg1), (g.dg2, a.dg2)] {
            assert!((x - y).norm() <= tol * x.norm(), "s {s}: {x} vs {y}");
        }
    }
    // and the leading exponents are -3/2 + nu and -5/2 + nu
    let s = 1e6;
    let g = special_solutions(c(0.25, 0.0), s).unwrap();
    let g2x = special_solutions(c(0.25, 0.0), 2.0 * s).unwrap();
    let slope = |a: Complex64, b: Complex64| (b.norm() / a.norm()).log2();
    assert!((slope(g.g1, g2x.g1) + 1.25).abs() < 1e-2);
    assert!((slope(g.dg2, g2x.dg2) + 2.25).abs() < 1e-2);
}

#[test]
fn coefficients_at_zero_eta() {
    let p = regime(3.0 / 16.0);
    let m = ModeIndex::new(2, 0.0).unwrap();
    let (psi0, t0) = (c(0.3, -1.0), c(2.0, 0.5));
    let (c1, c2) = mode_coefficients(&m, &p, psi0, t0).unwrap();
    assert!((c1 - psi0).norm() < 1e-15);
    assert!((c2 - I * p.b2 * t0 / 2.0).norm() < 1e-15);
}

#[test]
fn coefficients_reconstruct_initial_data() {
    let p = regime(3.0 / 16.0);
    let m = ModeIndex::new(1, 2.0).unwrap();
    let (psi0, t0) = (c(1.0, 1.0), c(2.0, 0.0));
    let (c1, c2) = mode_coefficients(&m, &p, psi0, t0).unwrap();
    let g = special_solutions(p.nu, m.s0()).unwrap();
    assert!((c1 * g.g1 + c2 * g.g2 - psi0).norm() < 1e-12);
    let rate = initial_phi_rate(&m, p.b2, psi0, t0);
    assert!((c1 * g.dg1 + c2 * g.dg2 - rate).norm() < 1e-12);
}

#[test]
fn coefficients_match_direct_solve_with_integrated_basis() {
    // g1, g2 at s0 = -2 obtained by integrating the mode ODE in s from the
    // origin, where they are fixed by their series (1, 0) and (0, 1)
    let p = regime(3.0 / 16.0);
    let m = ModeIndex::new(1, 2.0).unwrap();
    let s0 = m.s0();
    let b2 = p.b2;
    let f = |sig: f64, y: &[Complex64; 2]| {
        let s = -sig;
        // y = (g, dg/ds); dg/dsigma = -dg/ds, d(dg/ds)/dsigma = -g''(s)
        let gpp = -(4.0 * s * y[1] + (2.0 + b2) * y[0]) / (1.0 + s * s);
        [-y[1], -gpp]
    };
    let tol = Tolerances { rtol: 1e-13, atol: 1e-15, ..Tolerances::default() };
    let g1 = integrate_dense(f, 0.0, [c(1.0, 0.0), c(0.0, 0.0)], &[-s0], &tol).unwrap()[0];
    let g2 = integrate_dense(f, 0.0, [c(0.0, 0.0), c(1.0, 0.0)], &[-s0], &tol).unwrap()[0];
    let (psi0, t0) = (c(1.0, 0.0), c(0.0, 0.0));
    let rate = initial_phi_rate(&m, b2, psi0, t0);
    let det = g1[0] * g2[1] - g1[1] * g2[0];
    let c1 = (psi0 * g2[1] - rate * g2[0]) / det;
    let c2 = (g1[0] * rate - g1[1] * psi0) / det;
    let (e1, e2) = mode_coefficients(&m, &p, psi0, t0).unwrap();
    assert!((e1 - c1).norm() < 1e-10 * c1.norm(), "{e1} vs {c1}");
    assert!((e2 - c2).norm() < 1e-10 * c2.norm(), "{e2} vs {c2}");
    assert!((det - 1.0 / 25.0).norm() < 1e-11);
}

#[test]
fn initial_state_is_reproduced() {
    for b2 in [3.0 / 16.0, 0.25, 0.5, 2.0] {
        let p = regime(b2);
        for (k, eta) in [(1, 0.0), (-2, 3.5), (3, -7.0)] {
            let m = ModeIndex::new(k, eta).unwrap();
            let (psi0, t0) = (c(0.4, -1.1), c(-0.2, 0.9));
            let st = evolve_mode(&m, &p, 0.0, psi0, t0).unwrap();
            assert!((st.phi - psi0).norm() < 1e-12, "B2 {b2} k {k}");
            assert!((st.tau - t0).norm() < 1e-12, "B2 {b2} k {k}: {} vs {t0}", st.tau);
            assert_eq!(st.vy, I * k as f64 * st.phi);
            assert_eq!(st.vx, st.vy * m.s0());
        }
    }
}

#[test]
fn supercritical_trajectory_matches_oracle() {
    let problem = ModeProblem::Boussinesq {
        mode: ModeIndex::new(1, 0.0).unwrap(),
        params: regime(0.5),
        psi0: c(1.0, 0.0),
        t0: c(0.0, 0.0),
    };
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.5).collect();
    assert!(compare_closed_form(&problem, &grid, &Tolerances::default()).unwrap() < 1e-6);
}

#[test]
fn critical_and_near_critical_agree() {
    // nu = 1e-4 sits in the degenerate band and goes through the ODE path
    let m = ModeIndex::new(1, 1.5).unwrap();
    let grid = [0.0, 1.0, 10.0, 50.0];
    let exact = evolve_mode_series(&m, &regime(0.25), &grid, c(1.0, 0.2), c(0.3, 0.0)).unwrap();
    let near = evolve_mode_series(&m, &regime(0.25 - 1e-8), &grid, c(1.0, 0.2), c(0.3, 0.0)).unwrap();
    for (a, b) in exact.iter().zip(&near) {
        assert!((a.phi - b.phi).norm() < 1e-5 * a.phi.norm());
    }
}

#[test]
fn envelope_ratio_is_stable_under_longer_horizons() {
    // nested grids with a common spacing, so the ratio can only grow with the horizon
    let grid = |t_max: f64| -> Vec<f64> { (0..=(4.0 * t_max) as usize).map(|i| 0.25 * i as f64).collect() };
    let cases = [
        (ModeIndex::new(1, 3.0).unwrap(), regime(3.0 / 16.0)),
        (ModeIndex::new(1, 2.0).unwrap(), regime(3.0 / 16.0)),
        (ModeIndex::new(2, -5.0).unwrap(), regime(0.5)),
        (ModeIndex::new(1, 1.0).unwrap(), regime(0.25)),
    ];
    for (m, p) in cases {
        let r1 = envelope_bound_ratio(&m, &p, &grid(100.0), c(1.0, 0.0), c(0.5, 0.5)).unwrap();
        let r2 = envelope_bound_ratio(&m, &p, &grid(200.0), c(1.0, 0.0), c(0.5, 0.5)).unwrap();
        let r4 = envelope_bound_ratio(&m, &p, &grid(400.0), c(1.0, 0.0), c(0.5, 0.5)).unwrap();
        assert!(r1.is_finite() && r1 > 0.0);
        assert!(r2 >= r1 && r4 <= 1.05 * r2, "{:?}: {r1} {r2} {r4}", p.regime);
    }
    let m = ModeIndex::new(1, 3.0).unwrap();
    assert_eq!(envelope_bound_ratio(&m, &regime(0.5), &grid(10.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap(), 0.0);
}

#[test]
fn supercritical_amplitude_bounded_by_three_halves_power() {
    let p = regime(0.5);
    let m = ModeIndex::new(1, 0.5).unwrap();
    let times: Vec<f64> = (0..=1000).map(|i| i as f64).collect();
    let states = evolve_mode_series(&m, &p, &times, c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    let scaled: Vec<f64> = times.iter().zip(&states).map(|(t, st)| st.phi.norm() * jb(t + m.s0()).powf(1.5)).collect();
    let late = scaled[500..].iter().cloned().fold(0.0, f64::max);
    let early = scaled[..500].iter().cloned().fold(0.0, f64::max);
    assert!(late <= 1.5 * early, "{early} {late}");
}

#[test]
fn homogeneous_branch() {
    let m = ModeIndex::new(1, 0.0).unwrap();
    let st = evolve_mode_homogeneous(&m, 1.0, 1.0, c(2.0, -1.0), c(0.0, 0.0)).unwrap();
    assert!((st.phi - c(1.0, -0.5)).norm() < 1e-15);
    let rho0 = c(0.7, 0.1);
    let st = evolve_mode_homogeneous(&m, 9.81, 4.0, c(2.0, -1.0), rho0).unwrap();
    assert_eq!(st.tau, rho0);

    // velocity laws with rho0 = 0
    let m = ModeIndex::new(3, -2.0).unwrap();
    let psi0 = c(0.5, 0.5);
    for t in [0.0, 1.0, 10.0, 100.0] {
        let st = evolve_mode_homogeneous(&m, 1.0, t, psi0, c(0.0, 0.0)).unwrap();
        let sv = m.shear(t);
        let base = 3.0 * jb(sv.s0).powi(2) * psi0.norm() / jb(sv.s).powi(2);
        assert!((st.vy.norm() - base).abs() < 1e-13 * base);
        assert!((st.vx.norm() - base * sv.s.abs()).abs() < 1e-12 * base.max(1.0));
    }
}

#[test]
fn homogeneous_matches_oracle() {
    let m = ModeIndex::new(1, 1.0).unwrap();
    let st = evolve_mode_homogeneous(&m, 1.0, 3.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let spec = OdeSpec::boussinesq_homogeneous(m, 1.0, c(1.0, 0.0), c(1.0, 0.0));
    let y = ode::integrate(&spec, &[0.0, 3.0], &Tolerances::default()).unwrap();
    assert!((y[1][0] - st.phi).norm() < 1e-9);
    // and the routed regime call agrees
    let routed = evolve_mode(&m, &regime(0.0), 3.0, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    assert_eq!(routed, st);
}

#[test]
fn hermitian_partner_evolves_to_conjugate() {
    for b2 in [3.0 / 16.0, 0.25, 0.5] {
        let p = regime(b2);
        let (psi0, t0) = (c(0.3, 0.8), c(-1.0, 0.25));
        let a = evolve_mode(&ModeIndex::new(2, 1.3).unwrap(), &p, 17.0, psi0, t0).unwrap();
        let b = evolve_mode(&ModeIndex::new(-2, -1.3).unwrap(), &p, 17.0, psi0.conj(), t0.conj()).unwrap();
        for (x, y) in [(a.phi, b.phi), (a.tau, b.tau), (a.vx, b.vx), (a.vy, b.vy)] {
            assert!((x.conj() - y).norm() < 1e-12 * x.norm().max(1e-3), "B2 {b2}: {x} {y}");
        }
    }
}

#[test]
fn no_shear_and_zero_mode_are_rejected() {
    let m = ModeIndex::new(1, 0.0).unwrap();
    let p = RegimeParams::from_physical(0.0, 1.0, 1.0).unwrap();
    assert!(evolve_mode(&m, &p, 1.0, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    assert!(mode_coefficients(&m, &regime(0.0), c(1.0, 0.0), c(0.0, 0.0)).is_err());
}
