pub mod cli;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
