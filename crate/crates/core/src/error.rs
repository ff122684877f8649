use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("empty chain")]
    EmptyChain,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric overflow in {0}")]
    Overflow(&'static str),

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("rejection budget of {budget} proposals exhausted")]
    RejectionBudget { budget: u64 },

    #[error("polytope obstacle is unbounded")]
    UnboundedPolytope,

    #[error("polytope obstacle is empty")]
    EmptyPolytope,

    #[error("degenerate environment: {0}")]
    DegenerateEnvironment(String),

    #[error("initial belief is in collision")]
    InitInCollision,

    #[error("no path found")]
    NoPath,

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("roadmap file error: {0}")]
    Persist(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
