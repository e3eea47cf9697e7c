use thiserror::Error;

/// Stage of an experiment at which something went wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Evolve,
    Norm,
    Fit,
    Validate,
    Output,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Evolve => "evolve",
            Stage::Norm => "norm",
            Stage::Fit => "fit",
            Stage::Validate => "validate",
            Stage::Output => "output",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {need} points in the fit window, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error("values must be positive (value {value} at t = {t})")]
    NonPositiveValues { t: f64, value: f64 },
    #[error("fit is singular: {0}")]
    Singular(String),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{stage}: {source}")]
    Numerics {
        stage: Stage,
        #[source]
        source: strato_core::Error,
    },
    #[error("fit of {norm}: {source}")]
    Fit {
        norm: String,
        #[source]
        source: FitError,
    },
    #[error("{stage}: {path}: {message}")]
    Io { stage: Stage, path: String, message: String },
}

impl HarnessError {
    pub fn stage(&self) -> Stage {
        match self {
            HarnessError::Config(_) => Stage::Config,
            HarnessError::Numerics { stage, .. } | HarnessError::Io { stage, .. } => *stage,
            HarnessError::Fit { .. } => Stage::Fit,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Tags a core error with the stage it came from.
pub(crate) trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T>;
}

impl<T> AtStage<T> for std::result::Result<T, strato_core::Error> {
    fn at(self, stage: Stage) -> Result<T> {
        self.map_err(|source| HarnessError::Numerics { stage, source })
    }
}

pub(crate) fn io_error(stage: Stage, path: &std::path::Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io { stage, path: path.display().to_string(), message: e.to_string() }
}
