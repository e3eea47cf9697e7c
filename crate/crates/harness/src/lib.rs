//! Experiment harness for the stratified shear-flow solvers: TOML configs,
//! decay-rate fits, validation suites and JSON reports.

pub mod config;
pub mod dispersive;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod recipe;
pub mod report;
pub mod validate;

pub use config::ExperimentConfig;
pub use error::{FitError, HarnessError, Result, Stage};
pub use experiment::{run_experiment, run_mode, sweep};
pub use fit::{fit_decay, DecayFit};
pub use report::Report;
pub use validate::{validate, Suite, ValidateOptions};
