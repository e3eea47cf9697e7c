//! Field experiments: ingest, evolve, record norms, fit, report.

use crate::config::{ComponentName, ExperimentConfig, ModelKind, NormConfig, NormName, ProjectionName, SnapshotFormat};
use crate::error::{io_error, AtStage, HarnessError, Result, Stage};
use crate::fit::fit_decay;
use crate::recipe;
use crate::report::{
    write_text, ConservationRecord, FitFailure, FitRecord, ModeSummary, RegimeSummary, Report, Series,
};
use num_complex::Complex64;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use strato_core::boussinesq::evolve_mode_series;
use strato_core::dispersive::{evolve_no_shear_mode, DispersionModel, DispersionParams};
use strato_core::euler::{evolve_euler_mode_series, EulerModeParams};
use strato_core::field::io::{write_binary, write_csv, BinaryHeader, ModelTag};
use strato_core::field::{
    evolve_field, evolve_spectral, ingest_initial_data, Component, EvolvedField, NormKind, Projection, SpectralField,
};
use strato_core::ode::{compare_closed_form, ModeProblem, Tolerances};
use strato_core::regime::{ModeIndex, Regime, RegimeParams};

/// Spectral storage budget per evolution batch, in complex amplitudes.
const BATCH_AMPLITUDES: usize = 1 << 24;

/// Decay exponents (alpha, gamma) of the estimates for an L^2 norm (or the
/// L^2_x L^inf_y norm without shear). `has_density` selects the B^2 = 0 row.
pub fn expected_exponent(regime: &RegimeParams, norm: &NormConfig, has_density: bool) -> Option<(f64, Option<f64>)> {
    let nonzero = norm.projection == ProjectionName::Nonzero || norm.component == ComponentName::Vy;
    if !nonzero {
        return None;
    }
    let c = norm.component;
    match (regime.regime, norm.kind) {
        (Regime::NoShear, NormName::L2Linf) if c != ComponentName::Stream && c != ComponentName::Density => {
            Some((-1.0 / 3.0, None))
        }
        (Regime::NoShear, _) => None,
        (_, NormName::L2) => {
            let (vx, vy) = match regime.regime {
                Regime::Subcritical => (-0.5 + regime.nu.re, -1.5 + regime.nu.re),
                Regime::Critical | Regime::Supercritical => (-0.5, -1.5),
                Regime::Homogeneous if has_density => (0.0, -1.0),
                Regime::Homogeneous => (-1.0, -2.0),
                Regime::NoShear => unreachable!(),
            };
            let gamma = (regime.regime == Regime::Critical).then_some(1.0);
            match c {
                ComponentName::Vx => Some((vx, gamma)),
                ComponentName::Vy => Some((vy, gamma)),
                ComponentName::Density if regime.regime != Regime::Homogeneous => Some((vx, gamma)),
                _ => None,
            }
        }
        _ => None,
    }
}

fn norm_value(e: &EvolvedField, n: &NormConfig, p: &RegimeParams, kind: ModelKind) -> strato_core::Result<f64> {
    // full Euler fields already carry their weight
    let weight = (n.weighted && kind == ModelKind::Boussinesq).then_some(p.beta);
    e.norm(n.component.component(), n.kind(), n.projection(), weight)
}

/// ||v||^2 + (g/beta) ||density||^2, conserved without shear.
fn energy(e: &EvolvedField, p: &RegimeParams) -> strato_core::Result<f64> {
    let l2 = |c| e.norm(c, NormKind::L2, Projection::Full, None).map(|v| v * v);
    Ok(l2(Component::Vx)? + l2(Component::Vy)? + p.g / p.beta * l2(Component::Density)?)
}

pub struct Prepared {
    pub params: RegimeParams,
    pub field: SpectralField,
    pub times: Vec<f64>,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    cfg.validate()?;
    let params = cfg.model.regime_params()?;
    let grid = cfg.grid.spec()?;
    let (psi0, rho0) = recipe::build(cfg, &grid)?;
    let field = ingest_initial_data(&grid, &psi0, &rho0, cfg.model.field_model(&params), cfg.grid.truncation_tol)
        .at(Stage::Ingest)?;
    Ok(Prepared { params, field, times: cfg.schedule.times()? })
}

/// Runs one experiment; writes report.json, the series and any snapshots
/// to `out` when given.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Report> {
    let Prepared { params: p, field, times } = prepare(cfg)?;
    let mut report = Report::new(Some(cfg.clone()), Some(RegimeSummary::new(&p)));
    let no_shear = p.regime == Regime::NoShear;
    let has_density = field.rho.iter().any(|v| v.norm() > 0.0);

    if !cfg.norms.is_empty() || no_shear {
        let mut eval_times = times.clone();
        if no_shear && times[0] != 0.0 {
            eval_times.insert(0, 0.0);
        }
        let mut values = vec![Vec::with_capacity(eval_times.len()); cfg.norms.len()];
        let mut energies = Vec::new();
        let per_time = 4 * field.grid.nx * field.grid.ny;
        let batch = (BATCH_AMPLITUDES / per_time).max(1);
        for chunk in eval_times.chunks(batch) {
            let evolved = evolve_spectral(&field, &p, chunk).at(Stage::Evolve)?;
            for e in &evolved {
                for (n, v) in cfg.norms.iter().zip(values.iter_mut()) {
                    v.push(norm_value(e, n, &p, cfg.model.kind).at(Stage::Norm)?);
                }
                if no_shear {
                    energies.push(energy(e, &p).at(Stage::Norm)?);
                }
            }
        }
        if no_shear {
            let e0 = energies[0];
            let drift = energies.iter().map(|e| (e - e0).abs() / e0.max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
            report.conservation.push(ConservationRecord { name: "energy".into(), max_rel_drift: drift });
        }
        let skip = eval_times.len() - times.len();
        let window = if cfg.norms.is_empty() { None } else { Some(cfg.fit_window(&times)?) };
        for (n, v) in cfg.norms.iter().zip(values) {
            let name = n.name();
            let v = v[skip..].to_vec();
            let log = n.log_correction.unwrap_or(cfg.fit.log_correction);
            match fit_decay(&times, &v, window.expect("norms present"), log) {
                Ok(f) => report.fits.push(FitRecord::new(&name, &f, expected_exponent(&p, n, has_density))),
                Err(e) => report.fit_errors.push(FitFailure { norm: name.clone(), error: e.to_string() }),
            }
            report.series.push(Series { norm: name, times: times.clone(), values: v });
        }
    }

    if let Some(dir) = out {
        report.write(dir)?;
        write_snapshots(cfg, &field, &p, dir)?;
    }
    Ok(report)
}

fn write_snapshots(cfg: &ExperimentConfig, field: &SpectralField, p: &RegimeParams, dir: &Path) -> Result<()> {
    let tag = match (p.regime, cfg.model.kind) {
        (Regime::NoShear, _) => ModelTag::NoShear,
        (_, ModelKind::Boussinesq) => ModelTag::Boussinesq,
        (_, ModelKind::FullEuler) => ModelTag::FullEuler,
    };
    for &t in &cfg.output.snapshots {
        let snap = evolve_field(field, p, t).at(Stage::Evolve)?;
        for c in Component::ALL {
            let values = snap.component(c);
            let (ext, fmt) = match cfg.output.format {
                SnapshotFormat::Csv => ("csv", SnapshotFormat::Csv),
                SnapshotFormat::Binary => ("bin", SnapshotFormat::Binary),
            };
            let path = dir.join(format!("snapshot_{}_t{t}.{ext}", c.name()));
            let file = BufWriter::new(File::create(&path).map_err(|e| io_error(Stage::Output, &path, e))?);
            match fmt {
                SnapshotFormat::Csv => write_csv(file, values),
                SnapshotFormat::Binary => {
                    let header = BinaryHeader { nx: field.grid.nx, ny: field.grid.ny, ly: field.grid.ly, tag };
                    write_binary(file, &header, values)
                }
            }
            .map_err(|e| io_error(Stage::Output, &path, e))?;
        }
    }
    Ok(())
}

/// One experiment per B^2 of [sweep], run in order; each writes to
/// `out/b2_<value>/` and a sweep.json lists every fit.
pub fn sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Vec<Report>> {
    let s = cfg.sweep.as_ref().ok_or_else(|| HarnessError::Config("sweep needs a [sweep] section".into()))?;
    let mut reports = Vec::new();
    for &b2 in &s.b2 {
        let c = cfg.with_b2(b2)?;
        let sub = out.map(|d| d.join(format!("b2_{b2}")));
        reports.push(run_experiment(&c, sub.as_deref())?);
    }
    if let Some(dir) = out {
        let summary: Vec<_> = reports
            .iter()
            .map(|r| serde_json::json!({ "regime": r.regime, "fits": r.fits, "fit_errors": r.fit_errors }))
            .collect();
        fs::create_dir_all(dir).map_err(|e| io_error(Stage::Output, dir, e))?;
        let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
        write_text(&dir.join("sweep.json"), &text)?;
    }
    Ok(reports)
}

/// Closed-form evolution of the single mode of [mode]: amplitude series
/// |stream|, |vx|, |vy|, |density|, their fits and the oracle comparison.
pub fn run_mode(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Report> {
    let m = cfg.mode.ok_or_else(|| HarnessError::Config("mode needs a [mode] section".into()))?;
    let p = cfg.model.regime_params()?;
    let times = cfg.schedule.times()?;
    let psi0 = Complex64::new(m.psi0[0], m.psi0[1]);
    let rho0 = Complex64::new(m.rho0[0], m.rho0[1]);
    let mut report = Report::new(Some(cfg.clone()), Some(RegimeSummary::new(&p)));
    let mut oracle_err = None;

    let amplitudes: Vec<[Complex64; 4]> = match (p.regime, cfg.model.kind) {
        (Regime::NoShear, kind) => {
            let model = match kind {
                ModelKind::Boussinesq => DispersionModel::Boussinesq,
                ModelKind::FullEuler => DispersionModel::FullEuler,
            };
            let dp = DispersionParams::from_regime(&p, model).at(Stage::Evolve)?;
            let wb = if kind == ModelKind::FullEuler { p.beta } else { 0.0 };
            let i = Complex64::new(0.0, 1.0);
            times
                .iter()
                .map(|&t| {
                    let (psi, th) = evolve_no_shear_mode(m.k, m.eta, &dp, t, psi0, rho0 / dp.beta)?;
                    Ok([psi, (-i * m.eta - 0.5 * wb) * psi, i * m.k as f64 * psi, dp.beta * th])
                })
                .collect::<strato_core::Result<_>>()
                .at(Stage::Evolve)?
        }
        (Regime::Homogeneous, _) | (_, ModelKind::Boussinesq) => {
            let mode = ModeIndex::new(m.k, m.eta).at(Stage::Config)?;
            let (t0, scale) =
                if p.regime == Regime::Homogeneous { (rho0, 1.0) } else { (p.r / p.beta * rho0, p.beta / p.r) };
            let states = evolve_mode_series(&mode, &p, &times, psi0, t0).at(Stage::Evolve)?;
            if m.oracle {
                let problem = ModeProblem::Boussinesq { mode, params: p, psi0, t0 };
                oracle_err = Some(oracle(&problem, &times)?);
            }
            states.iter().map(|s| [s.phi, s.vx, s.vy, scale * s.tau]).collect()
        }
        (_, ModelKind::FullEuler) => {
            let ep = EulerModeParams::new(m.k, m.eta, p.beta, p.b2).at(Stage::Config)?;
            let up0 = p.r / p.beta * rho0;
            let states = evolve_euler_mode_series(&ep, &times, psi0, up0).at(Stage::Evolve)?;
            if m.oracle {
                oracle_err = Some(oracle(&ModeProblem::Euler { params: ep, psi0, up0 }, &times)?);
            }
            states.iter().map(|s| [s.chi, s.wvx, s.wvy, p.beta / p.r * s.mu]).collect()
        }
    };

    let window = cfg.fit_window(&times)?;
    for (c, comp) in Component::ALL.iter().enumerate() {
        let name = format!("mode_{}", comp.name());
        let values: Vec<f64> = amplitudes.iter().map(|a| a[c].norm()).collect();
        match fit_decay(&times, &values, window, cfg.fit.log_correction) {
            Ok(f) => report.fits.push(FitRecord::new(&name, &f, None)),
            Err(e) => report.fit_errors.push(FitFailure { norm: name.clone(), error: e.to_string() }),
        }
        report.series.push(Series { norm: name, times: times.clone(), values });
    }
    report.mode = Some(ModeSummary { k: m.k, eta: m.eta, oracle_max_rel_err: oracle_err });
    if let Some(dir) = out {
        report.write(dir)?;
    }
    Ok(report)
}

fn oracle(problem: &ModeProblem, times: &[f64]) -> Result<f64> {
    let mut grid = times.to_vec();
    if grid[0] != 0.0 {
        grid.insert(0, 0.0);
    }
    compare_closed_form(problem, &grid, &Tolerances::default()).at(Stage::Validate)
}
