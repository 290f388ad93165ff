use thiserror::Error;

/// Errors surfaced by the certified computations.
///
/// Every bound-producing routine returns `Result` rather than clamping or
/// guessing: an overflow, an exhausted BFS horizon, or a failed residual
/// check must abort the computation instead of contaminating a certificate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow during {op}")]
    Overflow { op: &'static str },

    #[error("expected an element of {expected}, got {got}")]
    ElementMismatch { expected: String, got: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not invertible over the integers (det = {det})")]
    NotUnimodular { det: i128 },

    #[error("{0}")]
    InvalidParameter(String),

    #[error("word length horizon {horizon} exhausted; extend the table deliberately")]
    HorizonExhausted { horizon: u32 },

    #[error("ball budget of {budget} elements exceeded at radius {reached}")]
    BudgetExceeded { budget: usize, reached: u32 },

    #[error("product set cardinality cap {cap} reached at step {reached}")]
    CardinalityCap { cap: u64, reached: u32 },

    #[error("composition count {count} exceeds cap {cap}")]
    CompositionCap { count: u128, cap: u64 },

    #[error("root finder failed: {0}")]
    RootFinding(String),

    #[error("spectral residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    SpectralResidual { residual: f64, tol: f64 },

    #[error("cache rejected: {0}")]
    CacheMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cache record malformed: {0}")]
    CacheFormat(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
