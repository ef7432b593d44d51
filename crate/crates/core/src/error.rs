use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A station or window lies outside the beam.
    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config key `{key}`: {reason}")]
    ConfigKey { key: String, reason: String },

    #[error("non-finite section property at x = {x}")]
    Assembly { x: f64 },

    /// The dynamic stiffness is singular or too ill-conditioned to trust.
    #[error("resonance at omega = {omega} rad/s (condition estimate {condition:.3e})")]
    Resonance { omega: f64, condition: f64 },

    #[error("linear solve residual {residual:.3e} exceeds tolerance at omega = {omega} rad/s")]
    Residual { omega: f64, residual: f64 },

    #[error("eigenvalue iteration did not converge")]
    Eigen,

    #[error("cost function undefined for an all-zero envelope")]
    ZeroEnvelope,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn key(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::ConfigKey {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// Short tag used in sweep status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Config(_) | Error::ConfigKey { .. } => "config",
            Error::Assembly { .. } => "assembly",
            Error::Resonance { .. } => "resonance",
            Error::Residual { .. } => "residual",
            Error::Eigen => "eigen",
            Error::ZeroEnvelope => "zero-envelope",
            Error::Io { .. } => "io",
        }
    }
}
