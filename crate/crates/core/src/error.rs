use thiserror::Error;

/// Errors produced by the scattering and focusing solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate medium: {0}")]
    DegenerateMedium(String),

    #[error("degenerate configuration at {interface}: {reason}")]
    DegenerateConfiguration { interface: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
