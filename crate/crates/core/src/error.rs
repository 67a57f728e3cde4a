use thiserror::Error;

/// Errors raised by the library.
///
/// The variants line up with the CLI exit-code contract (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request is valid but exceeds what the chosen resources can resolve
    /// (grid order, coefficient guard, integer range).
    #[error("capability error: {0}")]
    Capability(String),
    /// Inputs that do not fit together (misaligned lengths, different grids).
    #[error("contract error: {0}")]
    Contract(String),
    /// A numerical routine failed to converge or produced an inconsistent result.
    #[error("internal error: {0}")]
    Internal(String),
    /// Checksum mismatch or malformed file content.
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 1 is reserved for failed invariant checks and never produced here.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Capability(_) | Error::Contract(_) | Error::Internal(_) => 2,
            Error::Io(_) => 3,
            Error::Integrity(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
