pub mod boussinesq;
pub mod dispersive;
pub mod error;
pub mod euler;
pub mod field;
pub mod hypergeometric;
pub mod ode;
pub mod quadrature;
pub mod regime;
pub mod special;

pub use error::{Error, Result};
