//! Experiment configuration, read from TOML. The schema is documented in
//! docs/config.md; every section except [model] has defaults.

use crate::error::{HarnessError, Result};
use crate::fit::log_spaced;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use strato_core::field::{Component, FieldModel, GridSpec, NormKind, Projection};
use strato_core::regime::{Regime, RegimeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    /// Drives the randomized data recipes and validation draws.
    #[serde(default)]
    pub seed: u64,
    pub model: ModelConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub data: DataRecipe,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub norms: Vec<NormConfig>,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersive: Option<DispersiveConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Boussinesq,
    FullEuler,
}

/// Either the Richardson number `b2` (with R = 1 unless `r` is given) or
/// the physical triple (r, beta, g); r = 0 selects the unsheared problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
}

const B2_MATCH: f64 = 1e-12;

impl ModelConfig {
    pub fn regime_params(&self) -> Result<RegimeParams> {
        let bad = |m: String| HarnessError::Config(format!("[model] {m}"));
        let core = |e: strato_core::Error| bad(e.to_string());
        let r = self.r.unwrap_or(1.0);
        let p = match (self.b2, self.beta, self.g) {
            (Some(b2), beta, g) if r > 0.0 => {
                if !(b2 >= 0.0 && b2.is_finite()) {
                    return Err(bad(format!("b2 must be finite and >= 0 (got {b2})")));
                }
                match (beta, g) {
                    (Some(beta), Some(g)) => {
                        let implied = beta * g / (r * r);
                        if (implied - b2).abs() > B2_MATCH * b2.max(1.0) {
                            return Err(bad(format!("b2 = {b2} but beta g / r^2 = {implied}")));
                        }
                        RegimeParams::from_physical(r, beta, g).map_err(core)?
                    }
                    (Some(beta), None) if b2 == 0.0 => {
                        if beta != 0.0 {
                            return Err(bad(format!("b2 = 0 means beta = 0 (got beta = {beta})")));
                        }
                        RegimeParams::from_physical(r, 0.0, 1.0).map_err(core)?
                    }
                    (Some(beta), None) => {
                        if !(beta > 0.0) {
                            return Err(bad(format!("b2 = {b2} needs beta > 0 (got {beta})")));
                        }
                        RegimeParams::from_physical(r, beta, b2 * r * r / beta).map_err(core)?
                    }
                    (None, Some(g)) if b2 == 0.0 => RegimeParams::from_physical(r, 0.0, g).map_err(core)?,
                    (None, Some(g)) => {
                        if !(g > 0.0) {
                            return Err(bad(format!("b2 = {b2} needs g > 0 (got {g})")));
                        }
                        RegimeParams::from_physical(r, b2 * r * r / g, g).map_err(core)?
                    }
                    (None, None) => {
                        if self.kind == ModelKind::FullEuler && b2 > 0.0 {
                            return Err(bad("full_euler needs beta: it sets the e^{-beta y/2} weight".into()));
                        }
                        if r == 1.0 {
                            RegimeParams::from_b2(b2).map_err(core)?
                        } else {
                            RegimeParams::from_physical(r, b2 * r * r, 1.0).map_err(core)?
                        }
                    }
                }
            }
            (Some(_), _, _) => return Err(bad("b2 is undefined without shear; give beta and g with r = 0".into())),
            (None, Some(beta), Some(g)) => RegimeParams::from_physical(r, beta, g).map_err(core)?,
            (None, _, _) => return Err(bad("give b2, or beta and g".into())),
        };
        if self.kind == ModelKind::FullEuler && p.regime == Regime::Homogeneous && p.beta > 0.0 {
            return Err(bad("b2 = 0 means beta = 0 for full_euler".into()));
        }
        Ok(p)
    }

    pub fn field_model(&self, p: &RegimeParams) -> FieldModel {
        match self.kind {
            ModelKind::Boussinesq => FieldModel::Boussinesq,
            ModelKind::FullEuler => FieldModel::FullEuler { beta: p.beta },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
    /// Largest |sample| allowed on the first and last y rows.
    pub truncation_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nx: 32, ny: 512, ly: 20.0, truncation_tol: 1e-8 }
    }
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.nx, self.ny, self.ly).map_err(|e| HarnessError::Config(format!("[grid] {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataRecipe {
    /// Three x-harmonics under a Gaussian in y, plus a one-harmonic density
    /// bump when `density` is set.
    GaussianPacket {
        #[serde(default = "yes")]
        density: bool,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// Harmonics 1..=kmax with seeded random amplitudes, phases and centres.
    RandomPacket {
        #[serde(default = "four")]
        kmax: usize,
        #[serde(default = "yes")]
        density: bool,
        #[serde(default = "one")]
        width: f64,
    },
    /// y-spectrum <eta>^{-(order + 1/2)}: in H^s_y exactly for s < order.
    RoughPacket {
        order: f64,
        #[serde(default = "yes")]
        density: bool,
    },
    /// Samples from disk: .csv, or the binary layout (anything else).
    File {
        stream: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<PathBuf>,
    },
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

fn four() -> usize {
    4
}

impl Default for DataRecipe {
    fn default() -> Self {
        DataRecipe::GaussianPacket { density: true, amplitude: 1.0, width: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    /// Explicit times; overrides the log-spaced schedule when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { times: None, t_min: 1.0, t_max: 200.0, points: 61 }
    }
}

impl ScheduleConfig {
    pub fn times(&self) -> Result<Vec<f64>> {
        let bad = |m: String| HarnessError::Config(format!("[schedule] {m}"));
        let times = match &self.times {
            Some(t) => t.clone(),
            None => {
                if !(self.t_min > 0.0 && self.t_max > self.t_min && self.t_max.is_finite()) || self.points < 2 {
                    return Err(bad(format!(
                        "need 0 < t_min < t_max and points >= 2 (got {}, {}, {})",
                        self.t_min, self.t_max, self.points
                    )));
                }
                log_spaced(self.t_min, self.t_max, self.points)
            }
        };
        if times.is_empty() {
            return Err(bad("no times".into()));
        }
        if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("times must be finite, non-negative and strictly ascending".into()));
        }
        Ok(times)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentName {
    Stream,
    Vx,
    Vy,
    Density,
}

impl ComponentName {
    pub fn component(self) -> Component {
        match self {
            ComponentName::Stream => Component::Stream,
            ComponentName::Vx => Component::Vx,
            ComponentName::Vy => Component::Vy,
            ComponentName::Density => Component::Density,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    L2,
    /// L^2 in x, sup in y.
    L2Linf,
    /// H^sx_x H^sy_y.
    SobolevHh,
    /// H^sx_x W^{sy,p}_y.
    SobolevHw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionName {
    Full,
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub component: ComponentName,
    #[serde(default = "default_norm")]
    pub kind: NormName,
    #[serde(default = "default_projection")]
    pub projection: ProjectionName,
    #[serde(default)]
    pub sx: f64,
    #[serde(default)]
    pub sy: f64,
    #[serde(default = "two")]
    pub p: f64,
    /// Measure with the e^{-beta y/2} weight (always the case for full_euler).
    #[serde(default)]
    pub weighted: bool,
    /// Overrides [fit] log_correction for this norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_correction: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn default_norm() -> NormName {
    NormName::L2
}

fn default_projection() -> ProjectionName {
    ProjectionName::Nonzero
}

fn two() -> f64 {
    2.0
}

impl NormConfig {
    pub fn new(component: ComponentName, kind: NormName) -> Self {
        NormConfig {
            component,
            kind,
            projection: ProjectionName::Nonzero,
            sx: 0.0,
            sy: 0.0,
            p: 2.0,
            weighted: false,
            log_correction: None,
            label: None,
        }
    }

    pub fn kind(&self) -> NormKind {
        match self.kind {
            NormName::L2 => NormKind::L2,
            NormName::L2Linf => NormKind::L2xLinfY,
            NormName::SobolevHh => NormKind::SobolevHxHy { sx: self.sx, sy: self.sy },
            NormName::SobolevHw => NormKind::SobolevHxWy { sx: self.sx, sy: self.sy, p: self.p },
        }
    }

    pub fn projection(&self) -> Projection {
        match self.projection {
            ProjectionName::Full => Projection::Full,
            ProjectionName::Nonzero => Projection::NonZero,
        }
    }

    /// File-name safe identifier, e.g. `vx_l2_nonzero` or `vy_hw_1_1_inf_full`.
    pub fn name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let comp = match self.component {
            ComponentName::Stream => "stream",
            ComponentName::Vx => "vx",
            ComponentName::Vy => "vy",
            ComponentName::Density => "density",
        };
        let kind = match self.kind {
            NormName::L2 => "l2".to_string(),
            NormName::L2Linf => "l2linf".to_string(),
            NormName::SobolevHh => format!("hh_{}_{}", self.sx, self.sy),
            NormName::SobolevHw => format!("hw_{}_{}_{}", self.sx, self.sy, self.p),
        };
        let proj = match self.projection {
            ProjectionName::Full => "full",
            ProjectionName::Nonzero => "nonzero",
        };
        let w = if self.weighted { "_weighted" } else { "" };
        format!("{comp}_{kind}_{proj}{w}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    /// Defaults to [t_max / 10, t_max].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    pub log_correction: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { window: None, log_correction: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnapshotFormat {
    Csv,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Overridden by --out.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Times at which lab-frame samples of every component are written.
    pub snapshots: Vec<f64>,
    pub format: SnapshotFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, snapshots: Vec::new(), format: SnapshotFormat::Csv }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub b2: Vec<f64>,
}

/// One Fourier mode for `strato mode`; amplitudes are (re, im) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub k: i64,
    pub eta: f64,
    pub psi0: [f64; 2],
    /// Initial density amplitude.
    #[serde(default)]
    pub rho0: [f64; 2],
    /// Compare against the ODE oracle on the schedule.
    #[serde(default = "yes")]
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersiveConfig {
    pub ks: Vec<i64>,
    /// Times of the envelope-constant sweep.
    pub envelope_times: Vec<f64>,
    /// Half-width n of the frequency window.
    pub n: f64,
    /// Times of the |I| series along the stationary ray.
    pub ray_times: Vec<f64>,
    pub sharpness_k: i64,
    pub sharpness_delta: f64,
    pub sharpness_t: f64,
}

impl Default for DispersiveConfig {
    fn default() -> Self {
        DispersiveConfig {
            ks: vec![1, 2, 4],
            envelope_times: vec![10.0, 1e2, 1e3, 1e4],
            n: 8.0,
            ray_times: log_spaced(1e2, 1e4, 17),
            sharpness_k: 1,
            sharpness_delta: 0.2,
            sharpness_t: 1e4,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // relative data paths are taken from the config's directory
        if let DataRecipe::File { stream, density } = &mut cfg.data {
            let base = path.parent().unwrap_or(Path::new("."));
            *stream = base.join(&*stream);
            if let Some(d) = density {
                *d = base.join(&*d);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn fit_window(&self, times: &[f64]) -> Result<[f64; 2]> {
        let last = *times.last().ok_or_else(|| HarnessError::Config("[schedule] no times".into()))?;
        let w = self.fit.window.unwrap_or([last / 10.0, last]);
        if !(w[0] < w[1]) || w[0] < times[0] || w[1] > last {
            return Err(HarnessError::Config(format!(
                "[fit] window [{}, {}] must be increasing and inside the schedule [{}, {last}]",
                w[0], w[1], times[0]
            )));
        }
        Ok(w)
    }

    /// Checks everything that can be checked without running.
    pub fn validate(&self) -> Result<()> {
        let p = self.model.regime_params()?;
        self.grid.spec()?;
        let times = self.schedule.times()?;
        if !self.norms.is_empty() {
            self.fit_window(&times)?;
        }
        let mut names: Vec<String> = self.norms.iter().map(NormConfig::name).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(HarnessError::Config(format!("[[norms]] duplicate norm {}", w[0])));
        }
        for n in &self.norms {
            if n.kind == NormName::SobolevHw && (n.sy < 0.0 || n.sy.fract() != 0.0 || !(n.p >= 1.0)) {
                return Err(HarnessError::Config(format!(
                    "[[norms]] {}: W^(sy,p) needs integer sy >= 0, p >= 1",
                    n.name()
                )));
            }
        }
        if self.model.kind == ModelKind::Boussinesq && p.regime != Regime::NoShear && p.beta == 0.0 {
            if self.norms.iter().any(|n| n.weighted) {
                return Err(HarnessError::Config("[[norms]] weighted norms need beta > 0".into()));
            }
        }
        if let Some(s) = &self.sweep {
            if s.b2.is_empty() {
                return Err(HarnessError::Config("[sweep] b2 is empty".into()));
            }
            for &b2 in &s.b2 {
                self.with_b2(b2)?.model.regime_params()?;
            }
        }
        if let DataRecipe::RoughPacket { order, .. } = self.data {
            if !(order > 0.0) {
                return Err(HarnessError::Config(format!("[data] rough_packet order must be > 0 (got {order})")));
            }
        }
        Ok(())
    }

    /// Single-experiment copy with the Richardson number replaced; beta is
    /// kept when given (g follows), and B^2 = 0 switches the stratification off.
    pub fn with_b2(&self, b2: f64) -> Result<Self> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        let m = &mut cfg.model;
        m.b2 = Some(b2);
        if b2 == 0.0 {
            m.beta = m.beta.map(|_| 0.0);
            m.g = None;
        } else {
            if m.beta == Some(0.0) {
                m.beta = None;
            }
            if m.beta.is_some() {
                m.g = None;
            }
        }
        if cfg.name.is_empty() {
            cfg.name = format!("b2_{b2}");
        } else {
            cfg.name = format!("{}_b2_{b2}", cfg.name);
        }
        Ok(cfg)
    }
}
