use std::fmt;

/// Errors surfaced by the library, classified so the CLI can map them to
/// distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: unparsable files, unknown element tokens, invalid
    /// point/poset/meet-table data.
    Input(String),
    /// A domain precondition does not hold (non-standard system, D-cycles
    /// where none are allowed, unsound construction, ...).
    Domain(String),
    /// An exponential enumeration was requested on a ground set larger than
    /// the configured cap.
    CapExceeded { size: usize, cap: usize },
    /// An internal consistency check failed; indicates a bug or a violated
    /// caller-asserted precondition.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::CapExceeded { size, cap } => write!(
                f,
                "ground set has {size} elements, over the enumeration cap {cap}; \
                 raise it with --cap if this is intentional"
            ),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
