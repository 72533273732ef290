use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid function spec `{0}`")]
    InvalidSpec(String),

    #[error("table index {n} out of range (table has {len} entries)")]
    TableIndex { n: u64, len: usize },

    #[error("h vanishes at n = {0}")]
    ZeroValue(u64),

    #[error("h is not normalized: h(1) = {0}")]
    NotNormalized(String),

    #[error("negative radicand in {what} at n = {n}: {value} (h is not log-concave here)")]
    NegativeRadicand { what: &'static str, n: u64, value: String },

    #[error("generator g = {0} is not supported here; only g = id yields an orthogonal sequence")]
    UnsupportedG(String),

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("affine scale a must be nonzero")]
    ZeroScale,

    #[error("orthonormal coefficient a_{index} = {value} is not positive")]
    NonPositiveA { index: usize, value: String },

    #[error("recurrence coefficient lambda_{n} = {value} is not positive")]
    NonPositiveLambda { n: usize, value: String },

    #[error("not enough data: {0}")]
    Insufficient(String),

    #[error("polynomial is not squarefree (gcd with derivative has degree {0})")]
    NonSquarefree(usize),

    #[error("exact rational coefficients required")]
    NotRational,

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("eigenvalue brackets collide near {at}: {count} eigenvalues inside width {width}")]
    Multiplicity { at: String, count: usize, width: String },

    #[error("zero anomaly: {0}")]
    ZeroAnomaly(String),

    #[error("invalid grid `{0}`")]
    InvalidGrid(String),

    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    #[error("precision must be at least 53 bits, got {0}")]
    Precision(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
