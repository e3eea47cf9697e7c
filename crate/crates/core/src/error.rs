use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("series failed to converge after {terms} terms (last term {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },
    #[error("connection formula is degenerate: a - b = {a_minus_b} is within {tol:e} of an integer")]
    DegenerateConnection { a_minus_b: f64, tol: f64 },
    #[error("point {z} is outside the supported domain: {reason}")]
    DomainError { z: String, reason: String },
    #[error("hypergeometric function diverges at z = 1 (Re(c - a - b) = {0} <= 0)")]
    Divergent(f64),
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudget { t: f64, max_steps: usize },
    #[error("grid truncation error {0:e} exceeds tolerance")]
    TruncationError(f64),
    #[error("unsupported norm/field combination: {0}")]
    UnsupportedCombination(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("phase is not convex or concave on the interval")]
    NotConvex,
    #[error("bad window: {0}")]
    BadWindow(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
