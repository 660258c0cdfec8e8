use thiserror::Error;

/// Errors produced by the quadrature, kernel, solver and harness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation was called with an incompatible combination of inputs
    /// (wrong parity, mismatched dimensions, too few levels, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A callable returned a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The derivative stencil would reach a non-positive radius.
    #[error("stencil error: radius {t} with half-width {half_width} reaches non-positive radii")]
    Stencil { t: f64, half_width: f64 },

    /// The periodic box is too small for the requested data and times.
    #[error("domain-size error: {0}")]
    DomainSize(String),

    /// Run configuration failed validation.
    #[error("config error in [{}]: {message}", keys.join(", "))]
    Config { keys: Vec<String>, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl WaveError {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        WaveError::Config {
            keys: vec![key.into()],
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for WaveError {
    fn from(e: std::io::Error) -> Self {
        WaveError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WaveError>;
