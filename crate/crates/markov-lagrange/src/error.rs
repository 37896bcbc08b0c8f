use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid digit {0}: continued-fraction digits are positive integers")]
    InvalidDigit(i64),

    #[error("empty period: a periodic expansion needs at least one digit")]
    EmptyPeriod,

    #[error("surds from different quadratic fields cannot be combined (D = {0} vs D = {1})")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("the shift `{0}` has no bi-infinite admissible sequence")]
    EmptyShift(String),

    #[error("no admissible continuation of the prefix {0}")]
    EmptyAdmissible(String),

    #[error("the shift `{0}` is not transitive")]
    NotTransitive(String),

    #[error("the shift `{0}` is not symmetric under reversal")]
    NotSymmetric(String),

    #[error("`{inner}` is not contained in `{outer}`")]
    NotContained { inner: String, outer: String },

    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("ratio maximum {0} is not below 1, no exponent can make the covering sum contract")]
    NonContracting(String),

    #[error("no sign change of the determinant in (0, 1) at order {0}")]
    NoRoot(usize),

    #[error("block-presented shifts are not supported here: {0}")]
    Unsupported(String),

    #[error("inconsistent report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.to_string(),
            message: message.into(),
        }
    }
}
