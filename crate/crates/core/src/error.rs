use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("bidegree mismatch: {left} vs {right}")]
    BidegreeMismatch { left: String, right: String },

    #[error("variable index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("weight {b} of a degree-{r} form is below the truncation threshold {threshold}")]
    Truncation { r: i64, b: i64, threshold: i64 },

    #[error("action coefficients undefined at (r, b, c) = ({r}, {b}, {c}): vanishing denominator")]
    CoefficientDomain { r: i64, b: i64, c: i64 },

    #[error("evaluation outside the declared bounds: {0}")]
    OutOfBounds(String),

    #[error("operator is not of order one: {0}")]
    NotOrderOne(String),

    #[error("unsupported operator degree: {0}")]
    UnsupportedDegree(String),

    #[error("reduction unavailable: {0}")]
    ReductionUnavailable(String),

    #[error("not a submodule: {0}")]
    NotASubmodule(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("inhomogeneous input, found bidegrees {0}")]
    Inhomogeneous(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Short machine-readable tag used by the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VariableMismatch { .. } => "variable-mismatch",
            Error::BidegreeMismatch { .. } => "bidegree-mismatch",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::InvalidTerm(_) => "invalid-term",
            Error::Domain(_) => "domain",
            Error::Truncation { .. } => "truncation",
            Error::CoefficientDomain { .. } => "coefficient-domain",
            Error::OutOfBounds(_) => "out-of-bounds",
            Error::NotOrderOne(_) => "not-order-one",
            Error::UnsupportedDegree(_) => "unsupported-degree",
            Error::ReductionUnavailable(_) => "reduction-unavailable",
            Error::NotASubmodule(_) => "not-a-submodule",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::Parse { .. } => "parse",
            Error::Inhomogeneous(_) => "inhomogeneous",
            Error::Config(_) => "config",
        }
    }
}
