use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {x} is outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },

    #[error("degenerate parametrization at t = {t}: |z'(t)| = {speed:e}")]
    DegenerateParametrization { t: f64, speed: f64 },

    #[error("point ({x}, {y}) is within {threshold:.3e} of the boundary (distance {distance:.3e})")]
    NearBoundary {
        x: f64,
        y: f64,
        distance: f64,
        threshold: f64,
    },

    #[error("far-field direction must be a unit vector, got norm {norm}")]
    NonUnitDirection { norm: f64 },

    #[error("point source ({x}, {y}) is not strictly inside the obstacle")]
    SourceNotInside { x: f64, y: f64 },

    #[error("observation point lies on the point source")]
    CoincidentSource,

    #[error("linear system is numerically singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
