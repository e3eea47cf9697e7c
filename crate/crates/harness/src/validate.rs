//! Validation suites: identity, oracle and invariant checks at fixed seeds.
//! Each check reports an error measure against its limit.

use crate::config::{ComponentName, ExperimentConfig, ModelConfig, ModelKind, NormConfig, NormName};
use crate::dispersive::ray_series;
use crate::error::{AtStage, Result, Stage};
use crate::experiment::run_experiment;
use crate::fit::{fit_decay, log_spaced};
use crate::report::{CheckRecord, ValidationRecord};
use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use strato_core::boussinesq::{
    asymptotic_leading, envelope_bound_ratio, evolve_mode, evolve_mode_series, BoussinesqBasis,
};
use strato_core::dispersive::{
    dispersion, evolve_no_shear_mode, mode_energy, oscillatory_integral, sharpness_limit, vdc_bound_check,
    DispersionModel, DispersionParams, SharpnessProfile, VdcKind,
};
use strato_core::euler::{
    euler_delta, euler_envelope_ratio, evolve_euler_mode, evolve_euler_mode_series, EulerBasis, EulerModeParams,
};
use strato_core::field::{
    evolve_spectral, hermitian_defect, ingest_initial_data, physical_norm, sample, Component, FieldModel, Frame,
    GridSpec, NormKind, Projection,
};
use strato_core::hypergeometric::{
    f21, f21_derivative, f21_derivative_lowered_c, f21_derivative_raised_c, f21_pfaff, f21_pfaff_alt, f21_series,
    wronskian_residual_with, EvalConfig, EvalDomain, HypParams,
};
use strato_core::ode::{compare_closed_form, integrate, ModeProblem, OdeSpec, Tolerances};
use strato_core::regime::{ModeIndex, RegimeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hyp,
    Ode,
    Boussinesq,
    Euler,
    Dispersive,
    Field,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Hyp, Suite::Ode, Suite::Boussinesq, Suite::Euler, Suite::Dispersive, Suite::Field];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Hyp => "hyp",
            Suite::Ode => "ode",
            Suite::Boussinesq => "boussinesq",
            Suite::Euler => "euler",
            Suite::Dispersive => "dispersive",
            Suite::Field => "field",
        }
    }

    /// "all" expands to every suite.
    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Relative error injected into the connection-formula prefactors; a
    /// correct build must then fail the Wronskian checks.
    pub prefactor_perturbation: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { seed: 0, prefactor_perturbation: 0.0 }
    }
}

fn check(name: impl Into<String>, value: f64, limit: f64) -> CheckRecord {
    CheckRecord { name: name.into(), value, limit, pass: value.is_finite() && value <= limit }
}

/// Worst value of fallible measurements; an error counts as infinitely bad.
fn worst(values: impl IntoIterator<Item = strato_core::Result<f64>>) -> f64 {
    values.into_iter().map(|v| v.unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(opts: &ValidateOptions, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    r.set_stream(stream);
    r
}

pub fn run_suite(suite: Suite, opts: &ValidateOptions) -> Result<ValidationRecord> {
    let checks = match suite {
        Suite::Hyp => hyp_suite(opts),
        Suite::Ode => ode_suite(opts),
        Suite::Boussinesq => boussinesq_suite(opts),
        Suite::Euler => euler_suite(opts),
        Suite::Dispersive => dispersive_suite(opts)?,
        Suite::Field => field_suite(opts)?,
    };
    Ok(ValidationRecord { suite: suite.name().to_string(), pass: checks.iter().all(|c| c.pass), checks })
}

pub fn validate(suites: &[Suite], opts: &ValidateOptions) -> Result<Vec<ValidationRecord>> {
    suites.iter().map(|s| run_suite(*s, opts)).collect()
}

/// Random (a, b, c) away from the degenerate configurations.
fn draw_params(r: &mut ChaCha8Rng) -> HypParams {
    loop {
        let a = c(r.gen_range(-1.5..2.0), r.gen_range(-1.0..1.0));
        let b = c(r.gen_range(-1.5..2.0), r.gen_range(-1.0..1.0));
        let cc = if r.gen_bool(0.5) { r.gen_range(0.3..0.9) } else { r.gen_range(1.2..2.5) };
        let p = HypParams::new(a, b, c(cc, 0.0)).expect("admissible");
        if p.integer_gap() > 0.05 {
            return p;
        }
    }
}

/// nu of the Boussinesq families used in the Wronskian sweep.
pub const WRONSKIAN_NUS: [(f64, f64); 4] = [(0.25, 0.0), (0.45, 0.0), (0.0, 0.5), (0.0, 1.0)];

pub fn hyp_suite(opts: &ValidateOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut r = rng(opts, 1);

    // the three forms of dF/dz inside the disk
    let mut contiguous: f64 = 0.0;
    for _ in 0..100 {
        let p = draw_params(&mut r);
        let z = Complex64::from_polar(r.gen_range(0.05..0.65), r.gen_range(-PI..PI));
        let d = EvalDomain::classify(z);
        let forms = [f21_derivative(&p, z, d), f21_derivative_lowered_c(&p, z, d), f21_derivative_raised_c(&p, z, d)];
        contiguous = contiguous.max(match forms {
            [Ok(a), Ok(b), Ok(cc)] => rel(a, b).max(rel(a, cc)),
            _ => f64::INFINITY,
        });
    }
    out.push(check("contiguous_relation", contiguous, 1e-9));

    // Pfaff forms where the mapped series converges
    let mut pfaff: f64 = 0.0;
    for _ in 0..100 {
        let p = draw_params(&mut r);
        let z = c(r.gen_range(-0.7..-0.01), 0.0);
        pfaff = pfaff.max(match (f21_series(&p, z), f21_pfaff(&p, z), f21_pfaff_alt(&p, z)) {
            (Ok(s), Ok(a), Ok(b)) => rel(s, a).max(rel(s, b)),
            _ => f64::INFINITY,
        });
    }
    out.push(check("pfaff_consistency", pfaff, 1e-10));

    // Euler transform along the negative axis
    let mut euler: f64 = 0.0;
    for _ in 0..100 {
        let p = draw_params(&mut r);
        let z = c(-(10f64.powf(r.gen_range(-2.0..2.0))), 0.0);
        let q = HypParams::new(p.c - p.a, p.c - p.b, p.c).expect("same c");
        let d = EvalDomain::NegativeRealAxis;
        euler = euler.max(match (f21(&p, z, d), f21(&q, z, d)) {
            (Ok(f), Ok(g)) => rel(f, ((p.c - p.a - p.b) * (1.0 - z).ln()).exp() * g),
            _ => f64::INFINITY,
        });
    }
    out.push(check("euler_transform", euler, 1e-10));

    // b = conj(a), real c and z: F is real
    let mut imag: f64 = 0.0;
    for _ in 0..100 {
        let a = c(r.gen_range(-1.0..2.0), r.gen_range(0.1..1.5));
        let p = HypParams::new(a, a.conj(), c(r.gen_range(0.3..2.5), 0.0)).expect("admissible");
        let z = c(r.gen_range(-50.0..0.6), 0.0);
        imag = imag.max(match f21(&p, z, EvalDomain::classify(z)) {
            Ok(f) => f.im.abs() / f.norm().max(1.0),
            Err(_) => f64::INFINITY,
        });
    }
    out.push(check("conjugate_symmetry", imag, 1e-12));

    let p = HypParams::real(0.5, 0.5, 2.0).expect("admissible");
    let gauss = f21(&p, c(1.0, 0.0), EvalDomain::UnitPoint).map(|v| (v - 4.0 / PI).norm());
    out.push(check("gauss_formula", gauss.unwrap_or(f64::INFINITY), 1e-12));

    // Wronskian of the Boussinesq pairs on z = -s^2
    let cfg = EvalConfig { prefactor_perturbation: opts.prefactor_perturbation, ..EvalConfig::default() };
    let grid = log_spaced(1e-3, 1e3, 61);
    for (re, im) in WRONSKIAN_NUS {
        let h = c(re, im) / 2.0;
        let p = HypParams::new(0.75 - h, 0.75 + h, c(0.5, 0.0)).expect("admissible");
        let w = worst(grid.iter().map(|s| wronskian_residual_with(&p, c(-s * s, 0.0), &cfg)));
        out.push(check(format!("wronskian_residual nu={}", c(re, im)), w, 1e-8));
    }
    out
}

/// Random mode (k, eta) and data.
fn draw_mode(r: &mut ChaCha8Rng) -> (i64, f64, Complex64, Complex64) {
    let k = r.gen_range(1..=4) * if r.gen_bool(0.5) { 1 } else { -1 };
    let eta = r.gen_range(-4.0..4.0);
    let z = |r: &mut ChaCha8Rng| Complex64::from_polar(r.gen_range(0.1..1.0), r.gen_range(-PI..PI));
    (k, eta, z(r), z(r))
}

pub const ORACLE_MODES: usize = 20;

/// Closed form against the ODE oracle on t in [0, 100] for random modes.
pub fn oracle_checks(opts: &ValidateOptions) -> Vec<CheckRecord> {
    let grid: Vec<f64> = (0..=100).map(|i| i as f64).collect();
    let tol = Tolerances::default();
    let mut out = Vec::new();
    for (i, b2) in [3.0 / 16.0, 0.25, 0.5].into_iter().enumerate() {
        let mut r = rng(opts, 10 + i as u64);
        let p = RegimeParams::from_b2(b2).expect("valid");
        let err = worst((0..ORACLE_MODES).map(|_| {
            let (k, eta, psi0, t0) = draw_mode(&mut r);
            let mode = ModeIndex::new(k, eta)?;
            compare_closed_form(&ModeProblem::Boussinesq { mode, params: p, psi0, t0 }, &grid, &tol)
        }));
        out.push(check(format!("oracle boussinesq {}", p.regime.name()), err, 1e-6));
    }
    for (i, b2) in [3.0 / 16.0, 0.5].into_iter().enumerate() {
        let mut r = rng(opts, 20 + i as u64);
        let err = worst((0..ORACLE_MODES).map(|_| {
            let (k, eta, psi0, up0) = draw_mode(&mut r);
            let params = EulerModeParams::new(k, eta, 0.5, b2)?;
            compare_closed_form(&ModeProblem::Euler { params, psi0, up0 }, &grid, &tol)
        }));
        let name = RegimeParams::from_b2(b2).expect("valid").regime.name();
        out.push(check(format!("oracle full_euler {name}"), err, 1e-6));
    }
    out
}

pub fn ode_suite(opts: &ValidateOptions) -> Vec<CheckRecord> {
    let mut out = oracle_checks(opts);
    // tightening rtol by 1e2 moves the answer by < 10x the stated tolerance
    let m = ModeIndex::new(1, -1.0).expect("valid");
    let spec = OdeSpec::boussinesq_phi(m, 0.5, c(1.0, 0.0), c(0.0, 0.0));
    let base = Tolerances::default();
    let tight = Tolerances { rtol: base.rtol * 1e-2, atol: base.atol * 1e-2, ..base };
    let change = match (integrate(&spec, &[0.0, 30.0], &base), integrate(&spec, &[0.0, 30.0], &tight)) {
        (Ok(a), Ok(b)) => rel(a[1][0], b[1][0]) / base.rtol,
        _ => f64::INFINITY,
    };
    out.push(check("self_convergence (change / rtol)", change, 10.0));
    out
}

pub fn boussinesq_suite(opts: &ValidateOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut r = rng(opts, 30);
    let nus = [c(0.25, 0.0), c(0.0, 0.0), c(0.0, 0.5), c(0.45, 0.0)];
    let wr = worst(nus.iter().flat_map(|&nu| {
        let basis = BoussinesqBasis::new(nu);
        [-300.0, -7.0, -0.9, 0.3, 1.2, 2.5, 40.0, 1e3].map(|s| {
            let w = basis.as_ref().map_err(Clone::clone)?.eval(s)?.wronskian();
            let exact = (1.0 + s * s).powi(-2);
            Ok((w - exact).norm() / exact)
        })
    }));
    out.push(check("wronskian = <s>^-4", wr, 1e-10));

    let init = worst([3.0 / 16.0, 0.25, 0.5, 2.0].into_iter().flat_map(|b2| {
        let p = RegimeParams::from_b2(b2).expect("valid");
        (0..5).map(|_| draw_mode(&mut r)).collect::<Vec<_>>().into_iter().map(move |(k, eta, psi0, t0)| {
            let st = evolve_mode(&ModeIndex::new(k, eta)?, &p, 0.0, psi0, t0)?;
            Ok((st.phi - psi0).norm().max((st.tau - t0).norm()))
        })
    }));
    out.push(check("initial_data_reproduced", init, 1e-11));

    let asym = {
        let nu = c(0.3, 0.0);
        match BoussinesqBasis::new(nu).and_then(|b| b.eval(50.0)) {
            Ok(g) => {
                let a = asymptotic_leading(nu, 50.0);
                [(g.g1, a.g1), (g.g2, a.g2), (g.dg1, a.dg1), (g.dg2, a.dg2)]
                    .iter()
                    .map(|(x, y)| (x - y).norm() / x.norm())
                    .fold(0.0, f64::max)
            }
            Err(_) => f64::INFINITY,
        }
    };
    out.push(check("large_s_leading_terms (s = 50)", asym, 0.02));

    // the mode envelope constant does not drift as the horizon doubles
    let grid = |t_max: f64| -> Vec<f64> { (0..=(4.0 * t_max) as usize).map(|i| 0.25 * i as f64).collect() };
    let drift = worst([(1, 3.0, 3.0 / 16.0), (2, -5.0, 0.5), (1, 1.0, 0.25)].map(|(k, eta, b2)| {
        let m = ModeIndex::new(k, eta)?;
        let p = RegimeParams::from_b2(b2)?;
        let r2 = envelope_bound_ratio(&m, &p, &grid(200.0), c(1.0, 0.0), c(0.5, 0.5))?;
        let r4 = envelope_bound_ratio(&m, &p, &grid(400.0), c(1.0, 0.0), c(0.5, 0.5))?;
        Ok(r4 / r2 - 1.0)
    }));
    out.push(check("mode_envelope_growth (t 200 -> 400)", drift, 0.05));

    let herm = worst([3.0 / 16.0, 0.25, 0.5].map(|b2| {
        let p = RegimeParams::from_b2(b2)?;
        let (psi0, t0) = (c(0.3, 0.8), c(-1.0, 0.25));
        let a = evolve_mode(&ModeIndex::new(2, 1.3)?, &p, 17.0, psi0, t0)?;
        let b = evolve_mode(&ModeIndex::new(-2, -1.3)?, &p, 17.0, psi0.conj(), t0.conj())?;
        Ok([(a.phi, b.phi), (a.tau, b.tau)].iter().map(|(x, y)| rel(x.conj(), *y)).fold(0.0, f64::max))
    }));
    out.push(check("hermitian_partner", herm, 1e-12));

    let crit = {
        let m = ModeIndex::new(1, 1.5).expect("valid");
        let grid = [0.0, 1.0, 10.0, 50.0];
        let run = |b2: f64| evolve_mode_series(&m, &RegimeParams::from_b2(b2)?, &grid, c(1.0, 0.2), c(0.3, 0.0));
        match (run(0.25), run(0.25 - 1e-8)) {
            (Ok(a), Ok(b)) => a.iter().zip(&b).map(|(x, y)| rel(x.phi, y.phi)).fold(0.0, f64::max),
            _ => f64::INFINITY,
        }
    };
    out.push(check("critical_continuity", crit, 1e-5));
    out
}

pub fn euler_suite(opts: &ValidateOptions) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut r = rng(opts, 40);
    let wr = worst([3.0 / 16.0, 0.5, 2.0].into_iter().flat_map(|b2| {
        [-60.0, -3.0, -0.4, 0.7, 2.0, 15.0, 200.0].map(move |s| {
            let p = EulerModeParams::new(1, 0.0, 0.5, b2)?;
            let w = EulerBasis::new(&p)?.eval(s)?.wronskian();
            let d = euler_delta(&p, s);
            Ok((w - d).norm() / d.norm())
        })
    }));
    out.push(check("wronskian_closed_form", wr, 1e-10));

    let init = worst((0..12).map(|i| {
        let (k, eta, psi0, up0) = draw_mode(&mut r);
        let b2 = [3.0 / 16.0, 0.5, 2.0][i % 3];
        let p = EulerModeParams::new(k, eta, 0.7, b2)?;
        let st = evolve_euler_mode(&p, 0.0, psi0, up0)?;
        Ok((st.chi - psi0).norm().max((st.mu - up0).norm()))
    }));
    out.push(check("initial_data_reproduced", init, 1e-10));

    out.push(check("beta_continuity (beta = 1e-3)", beta_continuity(1e-3), 1e-3));

    let env = worst([(3.0 / 16.0, 2.0), (0.5, -3.0), (2.0, 0.0)].map(|(b2, eta)| {
        let grid: Vec<f64> = (0..=300).map(|i| i as f64).collect();
        let p = EulerModeParams::new(1, eta, 0.5, b2)?;
        euler_envelope_ratio(&p, &grid, c(1.0, 0.0), c(0.5, 0.0))
    }));
    out.push(check("mode_envelope_bounded", env, 50.0));
    out
}

/// max over modes of max_t |chi - phi| / max_t |phi| between the full Euler
/// mode at small beta and the Boussinesq mode.
pub fn beta_continuity(beta: f64) -> f64 {
    let times: Vec<f64> = (0..=400).map(|i| 0.05 * i as f64).collect();
    worst([3.0 / 16.0, 0.5].into_iter().flat_map(|b2| {
        let times = times.clone();
        [(1, 0.0), (1, 1.0), (2, -3.0), (4, 1.0)].map(move |(k, eta)| {
            let p = EulerModeParams::new(k, eta, beta, b2)?;
            let m = ModeIndex::new(k, eta)?;
            let (psi0, t0) = (c(1.0, 0.0), c(0.2, 0.0));
            let e = evolve_euler_mode_series(&p, &times, psi0, t0)?;
            let b = evolve_mode_series(&m, &RegimeParams::from_b2(b2)?, &times, psi0, t0)?;
            let gap = e.iter().zip(&b).map(|(x, y)| (x.chi - y.phi).norm()).fold(0.0, f64::max);
            let scale = b.iter().map(|y| y.phi.norm()).fold(0.0, f64::max);
            Ok(gap / scale)
        })
    }))
}

pub fn dispersive_suite(opts: &ValidateOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut r = rng(opts, 50);
    let mode_drift = worst((0..20).flat_map(|i| {
        let (k, eta, psi0, t0) = draw_mode(&mut r);
        let model = if i % 2 == 0 { DispersionModel::Boussinesq } else { DispersionModel::FullEuler };
        [1.0, 10.0, 100.0, 1000.0].map(move |t| {
            let p = DispersionParams::new(0.7, 0.5, model)?;
            let e0 = mode_energy(k, eta, &p, psi0, t0);
            let (psi, th) = evolve_no_shear_mode(k, eta, &p, t, psi0, t0)?;
            Ok((mode_energy(k, eta, &p, psi, th) - e0).abs() / e0)
        })
    }));
    out.push(check("mode_energy_drift", mode_drift, 1e-12));

    out.push(check("field_energy_drift (t <= 1e3)", field_energy_drift().at(Stage::Validate)?, 1e-10));

    let pure = {
        // T0 = (k/lambda) psi0 leaves only the e^{i lambda t} wave
        let p = DispersionParams::new(1.0, 0.0, DispersionModel::Boussinesq).at(Stage::Validate)?;
        let lambda = dispersion(2, 1.0, &p).at(Stage::Validate)?;
        let psi0 = c(0.6, -0.2);
        worst([0.5, 7.0, 300.0].map(|t| {
            let (psi, _) = evolve_no_shear_mode(2, 1.0, &p, t, psi0, 2.0 / lambda * psi0)?;
            Ok(rel(psi, psi0 * Complex64::new(0.0, lambda * t).exp()))
        }))
    };
    out.push(check("pure_phase_rotation", pure, 1e-12));

    let vdc1 = vdc_bound_check(|x| 30.0 * x, 0.0, 1.0, VdcKind::First, 200);
    let vdc2 = vdc_bound_check(|x| 100.0 * x * x, -1.0, 1.0, VdcKind::Second, 400);
    let vdc = worst([vdc1, vdc2].map(|v| v.map(|c| c.integral / c.bound)));
    out.push(check("van_der_corput (|I| / bound)", vdc, 1.0));

    let small = oscillatory_integral(1, 1.0, 1e-6, 0.0, 1.0).map(|q| (q.value.norm() - 2.0).abs());
    out.push(check("small_t_limit", small.unwrap_or(f64::INFINITY), 1e-5));

    // |I| on the ray decays like t^{-1/3}
    let times = log_spaced(1e2, 1e4, 9);
    let ray = ray_series(1, 1.0, &times, 3.0)?;
    let slope = fit_decay(&times, &ray, [1e2, 1e4], false).map(|f| (f.alpha + 1.0 / 3.0).abs());
    out.push(check("ray_exponent |alpha + 1/3|", slope.unwrap_or(f64::INFINITY), 0.03));

    // away from every stationary ray the decay beats t^{-1/2}
    let off: Vec<f64> = times
        .iter()
        .map(|&t| oscillatory_integral(1, 1.0, t, 1.2 * t, 3.0).map(|q| q.value.norm()))
        .collect::<strato_core::Result<_>>()
        .at(Stage::Validate)?;
    let off_alpha = fit_decay(&times, &off, [1e2, 1e4], false).map(|f| f.alpha + 0.5);
    out.push(check("off_ray_exponent + 1/2", off_alpha.unwrap_or(f64::INFINITY), 0.0));

    let sharp = SharpnessProfile::new(1, 1.0, 0.2)
        .and_then(|p| p.scaled_amplitude(1e4))
        .map(|a| (a / sharpness_limit() - 1.0).abs());
    out.push(check("sharpness_limit (t = 1e4)", sharp.unwrap_or(f64::INFINITY), 0.05));
    Ok(out)
}

fn packet(grid: &GridSpec) -> (Array2<f64>, Array2<f64>) {
    let psi = sample(grid, |x, y| (x.sin() + 0.5 * (2.0 * x + 0.3).cos()) * (-y * y / 2.0).exp());
    let rho = sample(grid, |x, y| 0.5 * (x + 0.7).cos() * (-(y - 0.3).powi(2) / 2.0).exp());
    (psi, rho)
}

fn field_energy_drift() -> strato_core::Result<f64> {
    let grid = GridSpec::new(8, 256, 20.0)?;
    let (psi, rho) = packet(&grid);
    let p = RegimeParams::from_physical(0.0, 0.5, 2.0)?;
    let mut drift: f64 = 0.0;
    for model in [FieldModel::Boussinesq, FieldModel::FullEuler { beta: 0.5 }] {
        let fld = ingest_initial_data(&grid, &psi, &rho, model, 1e-12)?;
        let series = evolve_spectral(&fld, &p, &[0.0, 1.0, 10.0, 100.0, 1000.0])?;
        let energy = |e: &strato_core::field::EvolvedField| -> strato_core::Result<f64> {
            let n = |c| e.norm(c, NormKind::L2, Projection::Full, None).map(|v| v * v);
            Ok(n(Component::Vx)? + n(Component::Vy)? + p.g / p.beta * n(Component::Density)?)
        };
        let e0 = energy(&series[0])?;
        for e in &series {
            drift = drift.max((energy(e)? - e0).abs() / e0);
        }
    }
    Ok(drift)
}

/// Frame and structure invariants on evolved fields.
pub fn field_suite(opts: &ValidateOptions) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let grid = GridSpec::new(16, 256, 20.0).at(Stage::Validate)?;
    let (psi, rho) = packet(&grid);
    let cases = [
        (FieldModel::Boussinesq, RegimeParams::from_b2(3.0 / 16.0)),
        (FieldModel::Boussinesq, RegimeParams::from_b2(0.25)),
        (FieldModel::Boussinesq, RegimeParams::from_b2(0.0)),
        (FieldModel::FullEuler { beta: 0.5 }, RegimeParams::from_physical(1.0, 0.5, 1.0)),
    ];
    let (mut frame, mut herm, mut idem, mut start): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for (model, p) in cases {
        let p = p.at(Stage::Validate)?;
        let fld = ingest_initial_data(&grid, &psi, &rho, model, 1e-12).at(Stage::Ingest)?;
        let evolved = evolve_spectral(&fld, &p, &[0.0, 3.0, 40.0]).at(Stage::Evolve)?;
        for e in &evolved {
            for comp in Component::ALL {
                let a = e.component(comp);
                let scale = a.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(f64::MIN_POSITIVE);
                herm = herm.max(hermitian_defect(&grid, a) / scale);
                let lab = e.to_physical(comp, Frame::Lab);
                let sheared = e.to_physical(comp, Frame::Sheared);
                let l2 = |f: &Array2<f64>, proj| physical_norm(&grid, f, NormKind::L2, proj, None);
                let (nl, ns) =
                    (l2(&lab, Projection::Full).at(Stage::Norm)?, l2(&sheared, Projection::Full).at(Stage::Norm)?);
                frame = frame.max((nl - ns).abs() / nl.max(f64::MIN_POSITIVE));
                // P!=0 applied twice equals once
                let mut once = lab.clone();
                for mut row in once.axis_iter_mut(Axis(0)) {
                    let mean = row.mean().unwrap_or(0.0);
                    row.mapv_inplace(|v| v - mean);
                }
                let n1 = l2(&lab, Projection::NonZero).at(Stage::Norm)?;
                let n2 = l2(&once, Projection::NonZero).at(Stage::Norm)?;
                let n0 = l2(&once, Projection::Full).at(Stage::Norm)?;
                idem = idem.max((n1 - n2).abs().max((n1 - n0).abs()) / nl.max(f64::MIN_POSITIVE));
            }
        }
        // t = 0 returns the data (weighted under full Euler)
        let mut w_psi = psi.clone();
        if let FieldModel::FullEuler { beta } = model {
            strato_core::field::apply_weight(&grid, &mut w_psi, beta);
        }
        let back = evolved[0].to_physical(Component::Stream, Frame::Lab);
        start = start.max((&back - &w_psi).iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    out.push(check("sheared_vs_lab_l2", frame, 1e-12));
    out.push(check("hermitian_symmetry", herm, 1e-12));
    out.push(check("nonzero_projection_idempotent", idem, 1e-12));
    out.push(check("initial_data_at_t0", start, 1e-9));
    out.push(check("report_determinism (differing bytes)", determinism_defect(opts.seed)?, 0.0));
    Ok(out)
}

/// Runs a small randomized experiment twice and counts differing bytes of
/// the two JSON reports.
pub fn determinism_defect(seed: u64) -> Result<f64> {
    let cfg = determinism_config(seed);
    let a = run_experiment(&cfg, None)?.to_json();
    let b = run_experiment(&cfg, None)?.to_json();
    let differing = a.bytes().zip(b.bytes()).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len());
    Ok(differing as f64)
}

pub fn determinism_config(seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_toml(
        r#"
        name = "determinism"
        [model]
        kind = "boussinesq"
        b2 = 0.1875
        [grid]
        nx = 16
        ny = 128
        ly = 16.0
        [data]
        recipe = "random_packet"
        [schedule]
        t_min = 1.0
        t_max = 50.0
        points = 21
        "#,
    )
    .expect("built-in config parses");
    cfg.seed = seed;
    cfg.norms = vec![
        NormConfig::new(ComponentName::Vx, NormName::L2),
        NormConfig::new(ComponentName::Vy, NormName::L2),
        NormConfig::new(ComponentName::Density, NormName::L2Linf),
    ];
    cfg.model = ModelConfig { kind: ModelKind::Boussinesq, b2: Some(0.1875), r: None, beta: None, g: None };
    cfg
}
