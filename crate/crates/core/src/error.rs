use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse rational from {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {name} = {value} lies outside [-1, 1]")]
    OutOfDomain { name: &'static str, value: String },

    #[error("simplex stopped after {0} pivots without a verdict")]
    PivotLimit(usize),

    #[error("certificate failed re-verification: {0}")]
    Verification(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),
}
