use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed form overflowed or underflowed for the requested index.
    #[error("range error: {what} at n = {n} is not representable")]
    Range { what: &'static str, n: u64 },

    /// The exact rational backend was requested for a partition with
    /// irrational atoms.
    #[error("partition has no exact rational representation")]
    NotExact,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Malformed partition spec file; `field` names the offending entry.
    #[error("spec parse error in `{field}`: {message}")]
    SpecParse { field: String, message: String },

    #[error("strong renewal law not guaranteed: {0}")]
    StrongLawNotGuaranteed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SpecParse {
            field: field.into(),
            message: message.into(),
        }
    }
}
