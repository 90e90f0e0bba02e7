use thiserror::Error;

/// Errors raised by the solvers, the geometry helpers and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("characteristic speed U* is zero; nondimensionalization impossible")]
    ZeroSpeed,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("unstable step: max|phi| = {max_abs_phi:.4} exceeds 2 (dt too large, bound {dt_bound:.3e})")]
    UnstableStep { max_abs_phi: f64, dt_bound: f64 },

    #[error("no interface: phi does not change sign")]
    NoInterface,

    #[error("unsupported contour topology: {0}")]
    UnsupportedTopology(String),

    #[error("coincident markers {0} and {1} with zero blob length")]
    CoincidentMarkers(usize, usize),

    #[error("sheet strength iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("self-intersection between segments {0} and {1}")]
    SelfIntersection(usize, usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("initial interfaces differ by {distance:.3e}, more than one grid cell ({cell:.3e})")]
    MismatchedInitialCondition { distance: f64, cell: f64 },

    #[error("invalid config field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error("malformed csv {path}: {message}")]
    MalformedCsv { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        field: field.to_string(),
        message: message.into(),
    }
}
