use thiserror::Error;

/// Errors produced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {0} is a perfect square, value is rational")]
    PerfectSquare(String),
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(String),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("empty period")]
    EmptyPeriod,
    #[error("period entries must be positive, got {0}")]
    NonPositivePeriodEntry(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("alpha must be one of -1, 0, 1, got {0}")]
    InvalidAlpha(i64),
    #[error("field too large: {p}^{n} exceeds the enumeration guard {guard}")]
    FieldTooLarge { p: u64, n: u32, guard: u64 },
    #[error("singular model: {0}")]
    SingularModel(String),
    #[error("model not {p}-integral: coefficient {coefficient} has denominator divisible by {p}; apply a clearing transform first")]
    NotPIntegral { p: u64, coefficient: String },
    #[error("admissible transform requires u != 0")]
    ZeroScale,
    #[error("count bug: {0}")]
    CountBug(String),
    #[error("series domain error: {0}")]
    SeriesDomain(String),
    #[error("degenerate incidence matrix: {0}")]
    DegenerateIncidence(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
