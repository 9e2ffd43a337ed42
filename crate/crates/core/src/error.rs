use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient mode mismatch: {0} vs {1}")]
    ModeMismatch(String, String),

    #[error("matrix size mismatch: {0}x{0} vs {1}x{1}")]
    SizeMismatch(usize, usize),

    #[error("unsupported matrix size k={0}, need k >= 2")]
    UnsupportedSize(usize),

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("monomial {0} of the polynomial is missing from the basis")]
    IncompleteBasis(String),

    #[error("degree mismatch: element has degree {0}, span has degree {1}")]
    DegreeMismatch(String, String),

    #[error("left-normed bracket needs at least 2 indices, got {0}")]
    TooFewIndices(usize),

    #[error("generator index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("undefined series: {0}")]
    UndefinedSeries(String),

    #[error("not a Hilbert series: {0}")]
    NotHilbertSeries(String),

    #[error("factorization error: {0}")]
    Factorization(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
