use thiserror::Error;

/// Library-wide error type.
///
/// Variants are grouped by how a caller should react: `Parse` and
/// `InvalidInput` mean the input data is at fault, `Resource` means a
/// configured enumeration cap was hit (results so far are discarded, never
/// truncated), and `Internal` flags a broken invariant inside the kernel
/// itself.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vector is not admissible: {0}")]
    NotAdmissible(String),

    #[error("incompatible disc systems in tetrahedron {tet}")]
    Incompatible { tet: usize },

    #[error("resource cap exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::NotAdmissible(_)
            | Error::Incompatible { .. } => 2,
            Error::Resource { .. } => 3,
            Error::Internal(_) => 4,
        }
    }
}
