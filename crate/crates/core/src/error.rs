use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// The mode has no normalizable steady state (xi <= 0 or absorption not
    /// exceeding emission).
    #[error("degenerate mode: {0}")]
    DegenerateMode(String),

    /// An iterative scheme failed to converge.
    #[error("{op} did not converge: {msg}")]
    NonConvergence { op: &'static str, msg: String },

    /// The population stepper could not keep populations non-negative.
    #[error("positivity violated during evolution at t = {t}: {msg}")]
    Positivity { t: f64, msg: String },

    #[error("config syntax error: {0}")]
    ConfigSyntax(String),

    #[error("config validation error at `{path}`: {msg}")]
    ConfigValidation { path: String, msg: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
