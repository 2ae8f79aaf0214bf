use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report.
///
/// Variant names double as machine-readable error codes (see [`Error::code`]),
/// which the HTTP layer forwards verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("column `{0}` has no non-missing values")]
    AllMissing(String),
    #[error("column `{column}` cannot be typed as {requested}: {reason}")]
    TypeOverride {
        column: String,
        requested: String,
        reason: String,
    },
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("row index {index} is out of range for {n_rows} rows")]
    RowOutOfRange { index: usize, n_rows: usize },
    #[error("subset is empty")]
    EmptySubset,

    #[error("cannot parse constraint `{0}` (expected `col:lo..hi` or `col=a|b`)")]
    ConstraintSyntax(String),
    #[error("invalid constraint on `{column}`: {reason}")]
    InvalidConstraint { column: String, reason: String },
    #[error("the outcome column `{0}` cannot be filtered")]
    OutcomeConstraint(String),
    #[error("no filter on column `{0}`")]
    NotInStack(String),

    #[error("filter matches no rows")]
    EmptyIncluded,
    #[error("filter matches every row")]
    EmptyComplement,
    #[error("no usable similarity features")]
    NoUsableFeatures,
    #[error("invalid similarity configuration: {0}")]
    InvalidConfig(String),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("distributions have different lengths ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("sample is empty")]
    EmptySample,
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("need at least 2 complete rows, found {0}")]
    TooFewRows(usize),
}

impl Error {
    /// Stable error code, equal to the variant name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedCsv(_) => "MalformedCsv",
            Error::EmptyDataset => "EmptyDataset",
            Error::AllMissing(_) => "AllMissing",
            Error::TypeOverride { .. } => "TypeOverride",
            Error::UnknownColumn(_) => "UnknownColumn",
            Error::RowOutOfRange { .. } => "RowOutOfRange",
            Error::EmptySubset => "EmptySubset",
            Error::ConstraintSyntax(_) => "ConstraintSyntax",
            Error::InvalidConstraint { .. } => "InvalidConstraint",
            Error::OutcomeConstraint(_) => "OutcomeConstraint",
            Error::NotInStack(_) => "NotInStack",
            Error::EmptyIncluded => "EmptyIncluded",
            Error::EmptyComplement => "EmptyComplement",
            Error::NoUsableFeatures => "NoUsableFeatures",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::NotADistribution(_) => "NotADistribution",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptySample => "EmptySample",
            Error::OutOfRange(_) => "OutOfRange",
            Error::TooFewRows(_) => "TooFewRows",
        }
    }
}
