use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("mixed polarizations are not supported: both dipoles must lie along the same axis")]
    MixedPolarization,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("{what} did not converge: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("configuration error in `{key}`: {reason}")]
    Config { key: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
