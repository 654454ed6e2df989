use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violates a documented invariant.
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },

    /// The program cannot be funded as requested.
    #[error("infeasible: {constraint}: {detail}")]
    Infeasible { constraint: String, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error: {0}")]
    Syntax(String),

    #[error("{path}: unresolved reference to module \"{name}\"")]
    UnresolvedReference { path: String, name: String },

    #[error("{path}: unsupported: {reason}")]
    Unsupported { path: String, reason: String },

    #[error("threshold search: {0}")]
    Bracket(String),
}

/// Coarse category used for exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Infeasible,
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Infeasible { .. } => ErrorKind::Infeasible,
            _ => ErrorKind::Input,
        }
    }
}
