use num_complex::Complex64;
use proptest::prelude::*;
use strato_core::boussinesq::BoussinesqBasis;
use strato_core::dispersive::{
    evolve_no_shear_mode, mode_energy, oscillatory_integral, DispersionModel, DispersionParams,
};
use strato_core::euler::{euler_delta, EulerBasis, EulerModeParams};
use strato_core::hypergeometric::{
    f21, f21_derivative, f21_derivative_lowered_c, f21_derivative_raised_c, f21_pfaff, f21_series, EvalDomain,
    HypParams,
};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn params() -> impl Strategy<Value = HypParams> {
    (-1.5..2.0f64, -1.0..1.0f64, -1.5..2.0f64, -1.0..1.0f64, prop_oneof![0.3..0.9f64, 1.2..2.5f64])
        .prop_map(|(ar, ai, br, bi, c)| {
            HypParams::new(Complex64::new(ar, ai), Complex64::new(br, bi), Complex64::new(c, 0.0)).unwrap()
        })
        .prop_filter("away from integer c - a - b", |p| p.integer_gap() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_forms_agree(p in params(), r in 0.05..0.65f64, th in -3.1..3.1f64) {
        let z = Complex64::from_polar(r, th);
        let d = EvalDomain::classify(z);
        let a = f21_derivative(&p, z, d).unwrap();
        prop_assert!(rel(a, f21_derivative_lowered_c(&p, z, d).unwrap()) < 1e-9);
        prop_assert!(rel(a, f21_derivative_raised_c(&p, z, d).unwrap()) < 1e-9);
    }

    #[test]
    fn pfaff_matches_the_series(p in params(), x in -0.7..-0.01f64) {
        let z = Complex64::new(x, 0.0);
        prop_assert!(rel(f21_series(&p, z).unwrap(), f21_pfaff(&p, z).unwrap()) < 1e-10);
    }

    #[test]
    fn euler_transform_on_the_negative_axis(p in params(), lx in -2.0..2.0f64) {
        let z = Complex64::new(-(10f64.powf(lx)), 0.0);
        let q = HypParams::new(p.c - p.a, p.c - p.b, p.c).unwrap();
        let d = EvalDomain::NegativeRealAxis;
        let lhs = f21(&p, z, d).unwrap();
        let rhs = ((p.c - p.a - p.b) * (1.0 - z).ln()).exp() * f21(&q, z, d).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-10);
    }

    #[test]
    fn conjugate_parameters_give_real_values(ar in -1.0..2.0f64, ai in 0.1..1.5f64, c in 0.3..2.5f64, x in -50.0..0.6f64) {
        let a = Complex64::new(ar, ai);
        let p = HypParams::new(a, a.conj(), Complex64::new(c, 0.0)).unwrap();
        let z = Complex64::new(x, 0.0);
        let f = f21(&p, z, EvalDomain::classify(z)).unwrap();
        prop_assert!(f.im.abs() <= 1e-12 * f.norm().max(1.0));
    }

    #[test]
    fn boussinesq_wronskian(nu_re in 0.0..0.49f64, nu_im in 0.0..1.5f64, real in any::<bool>(), ls in -3.0..3.0f64, neg in any::<bool>()) {
        let nu = if real { Complex64::new(nu_re, 0.0) } else { Complex64::new(0.0, nu_im) };
        let s = if neg { -(10f64.powf(ls)) } else { 10f64.powf(ls) };
        let w = BoussinesqBasis::new(nu).unwrap().eval(s).unwrap().wronskian();
        let exact = (1.0 + s * s).powi(-2);
        prop_assert!((w - exact).norm() <= 1e-10 * exact);
    }

    #[test]
    fn euler_wronskian(b2 in prop_oneof![0.05..0.24f64, 0.26..3.0f64], beta in 0.1..1.0f64, eta in -5.0..5.0f64, s in -100.0..100.0f64) {
        let p = EulerModeParams::new(1, eta, beta, b2).unwrap();
        prop_assume!(p.integer_gap() > 0.05);
        let w = EulerBasis::new(&p).unwrap().eval(s).unwrap().wronskian();
        let d = euler_delta(&p, s);
        prop_assert!((w - d).norm() <= 1e-9 * d.norm());
    }

    #[test]
    fn unsheared_mode_energy_is_conserved(k in 1i64..6, eta in -8.0..8.0f64, t in 0.0..1e4f64, beta in 0.0..1.0f64, euler in any::<bool>()) {
        let model = if euler { DispersionModel::FullEuler } else { DispersionModel::Boussinesq };
        let p = DispersionParams::new(0.8, beta, model).unwrap();
        let (psi0, t0) = (Complex64::new(0.3, -1.0), Complex64::new(0.5, 0.2));
        let e0 = mode_energy(k, eta, &p, psi0, t0);
        let (psi, th) = evolve_no_shear_mode(k, eta, &p, t, psi0, t0).unwrap();
        prop_assert!((mode_energy(k, eta, &p, psi, th) - e0).abs() <= 1e-12 * e0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // eta = k eta' maps I(k, N, t, y, n) onto k I(1, N, t, k y, n / k)
    #[test]
    fn oscillatory_integral_k_scaling(k in 2i64..5, t in 1.0..300.0f64, y in -50.0..50.0f64, n in 4.0..12.0f64) {
        let a = oscillatory_integral(k, 1.0, t, y, n).unwrap().value;
        let b = oscillatory_integral(1, 1.0, t, k as f64 * y, n / k as f64).unwrap().value * k as f64;
        prop_assert!((a - b).norm() < 1e-7 * k as f64, "{a} vs {b}");
    }
}
