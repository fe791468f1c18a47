use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector arguments disagree in dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that needs data received none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A precondition on the call sequence was violated.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    /// A determinant-based moment is undefined for the given parameters.
    #[error("moment undefined: det(I - 2sQR) = {det} is not positive")]
    MomentUndefined { det: f64 },

    /// A matrix required to be positive definite is numerically singular.
    #[error("ill-conditioned matrix: condition number {cond:.3e}")]
    IllConditioned { cond: f64 },

    /// The theoretical recursion left its validity region.
    #[error("model divergence at iteration {iteration}: sigma_e^2 = {sigma_e2}")]
    ModelDivergence { iteration: usize, sigma_e2: f64 },

    /// Experiment configuration cannot be resolved.
    #[error("config error: {0}")]
    Config(String),

    /// A required data file is missing or unreadable.
    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
