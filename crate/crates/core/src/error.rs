use thiserror::Error;

/// Errors raised by the procedures and numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A documented precondition of an operation was not met.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// The input is valid in form but the requested quantity is undefined
    /// (a zero p-value fed to a log, a ratio with a zero denominator, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A numerical routine failed to converge or lost all precision.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed external data. `row` is 1-based over data rows (header excluded).
    #[error("input error{}{}: {message}", .row.map(|r| format!(" at row {r}")).unwrap_or_default(), .column.as_ref().map(|c| format!(", column '{c}'")).unwrap_or_default())]
    Input {
        row: Option<usize>,
        column: Option<String>,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.position() {
            Some(pos) => Error::Input {
                row: Some(pos.line() as usize),
                column: None,
                message: e.to_string(),
            },
            None => Error::Io(e.to_string()),
        }
    }
}
