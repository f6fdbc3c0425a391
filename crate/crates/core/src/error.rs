use thiserror::Error;

use crate::laws::LawKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A digit or bin outside the domain of the law.
    #[error("bin {bin} is outside the domain of {kind}")]
    BinOutOfRange { kind: LawKind, bin: u32 },

    #[error("tally is for {found} but the expected distribution is {expected}")]
    KindMismatch { expected: LawKind, found: LawKind },

    /// Zero has no significant digits.
    #[error("zero has no significant digits")]
    ZeroValue,

    #[error("value is not numeric")]
    NonNumeric,

    /// Empty input, or input that became empty after exclusions.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}, column {column}: {message}")]
    Ingest {
        line: u64,
        column: String,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the data rather than by how the tool was
    /// invoked.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_)
                | Error::Ingest { .. }
                | Error::Csv(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::ZeroValue
                | Error::NonNumeric
        )
    }
}
